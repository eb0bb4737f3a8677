"""Model stability measures.

Three measures over a set of model instances trained with different seeds:
bipartite-matching instance stability (optimal topic alignment, cosine
similarity), reference-set stability (reference topics discovered by both
instances), and coverage-curve stability (area-under-curve coverage of one
instance's topics by the other, averaged over both directions).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._assignment import solve_lsap
from .coverage import aucdc, build_cdc_curve, covered_reference_topics, word_matrix
from .topics import ReferenceTopicSet, TopicModel


@dataclass(frozen=True)
class Assignment:
    """One-to-one pairing of min(T_A, T_B) topics and its total similarity."""

    pairs: tuple
    total_similarity: float


def hungarian_max(similarity: np.ndarray) -> Assignment:
    """Maximum-total-similarity assignment of min(T_A, T_B) pairs.

    Solved as min-cost assignment on the negated matrix; rows and columns
    swap internally when T_A > T_B so every short-side topic is matched.
    """
    sim = np.asarray(similarity, dtype=np.float64)
    if sim.ndim != 2 or sim.size == 0:
        raise ValueError("similarity matrix must be 2-D and non-empty")
    transposed = sim.shape[0] > sim.shape[1]
    work = sim.T if transposed else sim
    col4row = solve_lsap(np.ascontiguousarray(-work))
    if transposed:
        pairs = tuple(sorted((int(j), int(i)) for i, j in enumerate(col4row)))
    else:
        pairs = tuple((int(i), int(j)) for i, j in enumerate(col4row))
    total = float(sum(sim[i, j] for i, j in pairs))
    return Assignment(pairs=pairs, total_similarity=total)


def _cosine_similarity_matrix(m1: TopicModel, m2: TopicModel) -> np.ndarray:
    a = word_matrix(m1.topics, normalize=True)
    b = word_matrix(m2.topics, normalize=True)
    return a @ b.T


def model_similarity_bipartite(m1: TopicModel, m2: TopicModel) -> float:
    """Average word-vector cosine similarity of optimally paired topics."""
    sim = _cosine_similarity_matrix(m1, m2)
    assignment = hungarian_max(sim)
    return assignment.total_similarity / min(m1.n_topics, m2.n_topics)


def instance_stability(models: list[TopicModel]) -> float:
    """Mean pairwise bipartite similarity over all unordered instance pairs."""
    if len(models) < 2:
        raise ValueError("need at least 2 model instances")
    sims = [model_similarity_bipartite(a, b) for a, b in combinations(models, 2)]
    return float(np.mean(sims))


def refset_model_similarity(
    m1: TopicModel, m2: TopicModel, refset: ReferenceTopicSet, matcher
) -> float:
    """|reference topics discovered by both instances| / T."""
    if m1.n_topics != m2.n_topics:
        raise ValueError("reference-set similarity requires equal topic counts")
    found1 = covered_reference_topics(m1, refset, matcher)
    found2 = covered_reference_topics(m2, refset, matcher)
    return len(found1 & found2) / m1.n_topics


def refset_stability(models: list[TopicModel], refset: ReferenceTopicSet, matcher) -> float:
    if len(models) < 2:
        raise ValueError("need at least 2 model instances")
    sims = [
        refset_model_similarity(a, b, refset, matcher) for a, b in combinations(models, 2)
    ]
    return float(np.mean(sims))


def aucdc_model_similarity(m1: TopicModel, m2: TopicModel) -> float:
    """Coverage-curve similarity: each model's topics taken as the
    reference set covered by the other, averaged over both directions."""
    as_ref_1 = ReferenceTopicSet(m1.topics)
    as_ref_2 = ReferenceTopicSet(m2.topics)
    forward = aucdc(build_cdc_curve(m2, as_ref_1))
    backward = aucdc(build_cdc_curve(m1, as_ref_2))
    return (forward + backward) / 2.0


def aucdc_stability(models: list[TopicModel]) -> float:
    if len(models) < 2:
        raise ValueError("need at least 2 model instances")
    sims = [aucdc_model_similarity(a, b) for a, b in combinations(models, 2)]
    return float(np.mean(sims))
