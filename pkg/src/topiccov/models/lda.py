"""Collapsed-Gibbs LDA and the fixed-topic variant used for topic sizing.

train_lda runs standard collapsed Gibbs sampling and reads the returned
topics from the final state. train_fixed_lda keeps a block of immutable
topic-word distributions (plus optional learnable topics) and estimates,
per document, the occurrence probability of each fixed topic; the
document-side prior of a fixed topic enters as an additive pseudo-count
eta * theta_prior.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..corpus import Corpus, token_stream
from ..sparsevec import SparseVector
from ..topics import ModelType, Topic, TopicModel
from . import _gibbs


def train_lda(
    corpus: Corpus,
    n_topics: int,
    alpha: float | None = None,
    beta: float = 0.01,
    warmup: int = 50,
    iters: int = 800,
    seed: int = 0,
    audit: bool = False,
) -> TopicModel:
    """Collapsed Gibbs LDA; alpha defaults to 50/n_topics.

    Deterministic for a fixed seed. The returned topic k has
    word_weights[w] = (n_kw + beta)/(n_k + V beta) and
    doc_weights[d] = (n_dk + alpha)/(len_d + T alpha).
    """
    if n_topics < 1:
        raise ValueError("n_topics must be >= 1")
    if corpus.n_docs == 0:
        raise ValueError("empty corpus")
    if alpha is None:
        alpha = 50.0 / n_topics
    doc_of, word_of = token_stream(corpus)
    n_tokens = doc_of.size
    if n_topics > n_tokens:
        warnings.warn(
            f"n_topics={n_topics} exceeds total token count {n_tokens}; "
            "some topics will stay empty"
        )
    n_docs, n_words = corpus.n_docs, corpus.n_words
    rng = np.random.default_rng(seed)
    z = rng.integers(0, n_topics, size=n_tokens).astype(np.int32)
    n_dk = np.zeros((n_docs, n_topics), dtype=np.int32)
    n_kw = np.zeros((n_topics, n_words), dtype=np.int32)
    n_k = np.zeros(n_topics, dtype=np.int32)
    np.add.at(n_dk, (doc_of, z), 1)
    np.add.at(n_kw, (z, word_of), 1)
    np.add.at(n_k, z, 1)
    work = np.empty(n_topics, dtype=np.float64)
    v_beta = n_words * beta
    for _ in range(warmup + iters):
        uniforms = rng.random(n_tokens)
        _gibbs.lda_sweep(z, doc_of, word_of, n_dk, n_kw, n_k, alpha, beta, v_beta, uniforms, work)
        if audit:
            _gibbs.audit_counts(z, doc_of, word_of, n_dk, n_kw, n_k)
    doc_lengths = n_dk.sum(axis=1)
    phi = (n_kw + beta) / (n_k + v_beta)[:, np.newaxis]
    theta = (n_dk + alpha) / (doc_lengths + n_topics * alpha)[:, np.newaxis]
    topics = [
        Topic(
            SparseVector.from_dense(phi[k]),
            SparseVector.from_dense(theta[:, k]),
        )
        for k in range(n_topics)
    ]
    return TopicModel(topics, ModelType.LDA, seed)


@dataclass(frozen=True)
class FixedTopicSpec:
    """Immutable topic-word rows plus per-document prior weights.

    phi_fixed: (F, V), each row a probability distribution.
    theta_prior: (N, F), non-negative document-side prior weights per fixed
    topic (typically the reference topics' doc weights normalized per topic).
    eta: strength of the prior pseudo-count.
    """

    phi_fixed: np.ndarray
    theta_prior: np.ndarray
    eta: float = 1.0

    def __post_init__(self):
        phi = np.asarray(self.phi_fixed, dtype=np.float64)
        theta = np.asarray(self.theta_prior, dtype=np.float64)
        if phi.ndim != 2 or theta.ndim != 2 or theta.shape[1] != phi.shape[0]:
            raise ValueError("phi_fixed (F,V) and theta_prior (N,F) shapes disagree")
        if np.any(phi < 0) or np.any(theta < 0):
            raise ValueError("weights must be non-negative")
        if not np.allclose(phi.sum(axis=1), 1.0, atol=1e-8):
            raise ValueError("each phi_fixed row must sum to 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        object.__setattr__(self, "phi_fixed", phi)
        object.__setattr__(self, "theta_prior", theta)

    @property
    def n_fixed(self) -> int:
        return self.phi_fixed.shape[0]


def fixed_spec_from_refset(refset, n_docs: int, eta: float = 1.0) -> FixedTopicSpec:
    """Derive a FixedTopicSpec from reference topics.

    Word vectors are normalized to distributions; doc vectors are
    normalized per topic so each theta_prior column sums to 1 (columns of
    all-zero doc weights stay zero).
    """
    n_words = refset.topics[0].word_weights.size
    phi = np.zeros((refset.n_topics, n_words))
    theta = np.zeros((n_docs, refset.n_topics))
    for k, topic in enumerate(refset.topics):
        wv = topic.word_weights.to_dense()
        total = wv.sum()
        if total == 0:
            raise ValueError(f"reference topic {k} has an all-zero word vector")
        phi[k] = wv / total
        dv = topic.doc_weights.to_dense()
        if dv.size != n_docs:
            raise ValueError("reference doc vectors disagree with n_docs")
        dtotal = dv.sum()
        if dtotal > 0:
            theta[:, k] = dv / dtotal
    return FixedTopicSpec(phi, theta, eta=eta)


@dataclass
class FixedLdaResult:
    theta: np.ndarray  # (N, F) occurrence probability of each fixed topic
    extra_model: TopicModel | None  # learnable topics, None when extra_n == 0
    alpha: float
    eta: float


def train_fixed_lda(
    corpus: Corpus,
    fixed: FixedTopicSpec,
    extra_n: int = 20,
    beta: float = 0.01,
    iters: int = 1000,
    seed: int = 0,
    audit: bool = False,
) -> FixedLdaResult:
    """Gibbs sampling with an immutable topic block; alpha = 1/T.

    For fixed topic k the conditional is
    (n_dk + alpha + eta*theta_prior[d,k]) * phi_fixed[k,w]; learnable
    topics follow the standard collapsed conditional. Returns the smoothed
    occurrence estimate theta_dk = (n_dk + alpha_dk)/(len_d + sum_k alpha_dk)
    for the fixed block.
    """
    n_fixed = fixed.n_fixed
    n_topics = n_fixed + extra_n
    if extra_n < 0:
        raise ValueError("extra_n must be >= 0")
    if fixed.theta_prior.shape[0] != corpus.n_docs or fixed.phi_fixed.shape[1] != corpus.n_words:
        raise ValueError("fixed spec dimensions disagree with the corpus")
    alpha = 1.0 / n_topics
    doc_of, word_of = token_stream(corpus)
    n_tokens = doc_of.size
    rng = np.random.default_rng(seed)
    z = rng.integers(0, n_topics, size=n_tokens).astype(np.int32)
    n_dk = np.zeros((corpus.n_docs, n_topics), dtype=np.int32)
    np.add.at(n_dk, (doc_of, z), 1)
    n_kw_learn = np.zeros((extra_n, corpus.n_words), dtype=np.int32)
    n_k_learn = np.zeros(extra_n, dtype=np.int32)
    learn_mask = z >= n_fixed
    np.add.at(n_kw_learn, (z[learn_mask] - n_fixed, word_of[learn_mask]), 1)
    np.add.at(n_k_learn, z[learn_mask] - n_fixed, 1)
    prior_dk = alpha + fixed.eta * fixed.theta_prior  # (N, F)
    work = np.empty(n_topics, dtype=np.float64)
    v_beta = corpus.n_words * beta
    for _ in range(iters):
        uniforms = rng.random(n_tokens)
        _gibbs.fixed_sweep(
            z,
            doc_of,
            word_of,
            n_dk,
            n_kw_learn,
            n_k_learn,
            prior_dk,
            fixed.phi_fixed,
            alpha,
            beta,
            v_beta,
            uniforms,
            work,
        )
        if audit:
            _audit_fixed(z, doc_of, word_of, n_dk, n_kw_learn, n_k_learn, n_fixed)
    doc_lengths = n_dk.sum(axis=1)
    # total Dirichlet mass per document: alpha for every topic plus the
    # fixed-block prior pseudo-counts
    alpha_total = n_topics * alpha + fixed.eta * fixed.theta_prior.sum(axis=1)
    theta = (n_dk[:, :n_fixed] + prior_dk) / (doc_lengths + alpha_total)[:, np.newaxis]
    extra_model = None
    if extra_n > 0:
        phi = (n_kw_learn + beta) / (n_k_learn + v_beta)[:, np.newaxis]
        theta_learn = (n_dk[:, n_fixed:] + alpha) / (doc_lengths + alpha_total)[:, np.newaxis]
        extra_topics = [
            Topic(
                SparseVector.from_dense(phi[k]),
                SparseVector.from_dense(theta_learn[:, k]),
            )
            for k in range(extra_n)
        ]
        extra_model = TopicModel(extra_topics, ModelType.FIXED_LDA, seed)
    return FixedLdaResult(theta=theta, extra_model=extra_model, alpha=alpha, eta=fixed.eta)


def _audit_fixed(z, doc_of, word_of, n_dk, n_kw_learn, n_k_learn, n_fixed):
    ref_dk = np.zeros(n_dk.shape, dtype=np.int32)
    np.add.at(ref_dk, (doc_of, z), 1)
    assert np.array_equal(ref_dk, n_dk), "n_dk inconsistent with z"
    mask = z >= n_fixed
    ref_kw = np.zeros(n_kw_learn.shape, dtype=np.int32)
    np.add.at(ref_kw, (z[mask] - n_fixed, word_of[mask]), 1)
    assert np.array_equal(ref_kw, n_kw_learn), "learnable n_kw inconsistent with z"
    assert np.array_equal(n_kw_learn.sum(axis=1, dtype=np.int32), n_k_learn)


def topic_sizes(theta: np.ndarray, threshold: float = 0.10) -> np.ndarray:
    """Per-topic count of documents where the topic occurs with
    probability at least `threshold` (inclusive)."""
    theta = np.asarray(theta, dtype=np.float64)
    if np.any(theta < 0) or np.any(theta > 1):
        raise ValueError("theta entries must lie in [0, 1]")
    return (theta >= threshold).sum(axis=0)
