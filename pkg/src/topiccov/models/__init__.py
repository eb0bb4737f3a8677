"""Topic model trainers: collapsed-Gibbs LDA, fixed-topic LDA, NMF."""

from .lda import (
    FixedLdaResult,
    FixedTopicSpec,
    fixed_spec_from_refset,
    topic_sizes,
    train_fixed_lda,
    train_lda,
)
from .nmf import NmfFactors, nndsvd_init, projected_gradient, train_nmf

__all__ = [
    "FixedLdaResult",
    "FixedTopicSpec",
    "NmfFactors",
    "fixed_spec_from_refset",
    "nndsvd_init",
    "projected_gradient",
    "topic_sizes",
    "train_fixed_lda",
    "train_lda",
    "train_nmf",
]
