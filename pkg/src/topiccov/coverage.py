"""Coverage measures over a reference topic set.

The unsupervised route builds a coverage-distance curve: for each cosine
distance threshold on a 51-point grid over [0, 1], the fraction of
reference topics whose nearest model topic lies strictly below the
threshold. Its area (trapezoidal rule) is the threshold-free AuCDC score.
The supervised route counts reference topics matched by at least one model
topic according to a trained pair classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import cosine_distance, hellinger_distance, l1_distance, l2_distance
from .sparsevec import SparseVector, union_dense
from .topics import ReferenceTopicSet, Topic, TopicModel

GRID_POINTS = 51

FEATURE_NAMES = (
    "word_cosine",
    "word_hellinger",
    "word_l1",
    "word_l2",
    "doc_cosine",
    "doc_hellinger",
    "doc_l1",
    "doc_l2",
)


@dataclass(frozen=True)
class CdcCurve:
    """51 (threshold, coverage) points over the [0, 1] distance range."""

    thresholds: np.ndarray
    coverages: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=np.float64)
        c = np.asarray(self.coverages, dtype=np.float64)
        if t.shape != (GRID_POINTS,) or c.shape != (GRID_POINTS,):
            raise ValueError(f"curve must have {GRID_POINTS} points")
        steps = np.diff(t)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], atol=1e-12):
            raise ValueError("thresholds must be strictly increasing and equidistant")
        if np.any(np.diff(c) < 0) or c.min() < 0 or c.max() > 1:
            raise ValueError("coverages must be non-decreasing within [0, 1]")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "coverages", c)


def grid_thresholds() -> np.ndarray:
    return np.arange(GRID_POINTS) * 0.02


def word_matrix(topics, normalize: bool = False) -> np.ndarray:
    """Stack dense word vectors; optionally scale rows to unit norm."""
    if not topics:
        raise ValueError("no topics")
    size = topics[0].word_weights.size
    out = np.zeros((len(topics), size), dtype=np.float64)
    for i, topic in enumerate(topics):
        if topic.word_weights.nnz == 0:
            raise ValueError(f"topic {i} has an all-zero word vector")
        out[i, topic.word_weights.indices] = topic.word_weights.values
    if normalize:
        out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def min_reference_distances(model: TopicModel, refset: ReferenceTopicSet) -> np.ndarray:
    """Per reference topic, the smallest word-vector cosine distance to any
    model topic, clipped into [0, 1]."""
    refs = word_matrix(refset.topics, normalize=True)
    mods = word_matrix(model.topics, normalize=True)
    best_sim = (refs @ mods.T).max(axis=1)
    return np.clip(1.0 - best_sim, 0.0, 1.0)


def build_cdc_curve(model: TopicModel, refset: ReferenceTopicSet) -> CdcCurve:
    """Coverage at each grid threshold; a reference topic counts as covered
    when its minimum distance is strictly below the threshold."""
    dists = min_reference_distances(model, refset)
    thresholds = grid_thresholds()
    coverages = (dists[np.newaxis, :] < thresholds[:, np.newaxis]).mean(axis=1)
    return CdcCurve(thresholds=thresholds, coverages=coverages)


def aucdc(curve: CdcCurve) -> float:
    """Trapezoidal area under the curve over the 50 subintervals."""
    c = curve.coverages
    dx = (curve.thresholds[-1] - curve.thresholds[0]) / (GRID_POINTS - 1)
    return float(dx * (c.sum() - 0.5 * (c[0] + c[-1])))


def aucdc_coverage(model: TopicModel, refset: ReferenceTopicSet) -> float:
    return aucdc(build_cdc_curve(model, refset))


# -- pair features -------------------------------------------------------


def _distribution_features(a: SparseVector, b: SparseVector):
    total_a, total_b = a.sum(), b.sum()
    if total_a == 0 or total_b == 0:
        raise ValueError("degenerate all-zero vector")
    pa, pb = a.scaled(1.0 / total_a), b.scaled(1.0 / total_b)
    va, vb = union_dense(pa, pb)
    return (
        cosine_distance(va, vb),
        hellinger_distance(va, vb),
        l1_distance(va, vb),
        l2_distance(va, vb),
    )


def pair_features(t1: Topic, t2: Topic) -> np.ndarray:
    """Eight distances between two topics, on probability-normalized
    vectors: cosine/Hellinger/L1/L2 over words, then the same over docs."""
    word = _distribution_features(t1.word_weights, t2.word_weights)
    doc = _distribution_features(t1.doc_weights, t2.doc_weights)
    return np.array(word + doc, dtype=np.float64)


# -- supervised coverage --------------------------------------------------


def covered_reference_topics(model: TopicModel, refset: ReferenceTopicSet, matcher) -> set:
    """Indices of reference topics matched by at least one model topic."""
    covered = set()
    for r, ref in enumerate(refset.topics):
        for topic in model.topics:
            if matcher.predict(pair_features(ref, topic)):
                covered.add(r)
                break
    return covered


def supervised_coverage(model: TopicModel, refset: ReferenceTopicSet, matcher) -> float:
    """Fraction of reference topics matched by at least one model topic."""
    return len(covered_reference_topics(model, refset, matcher)) / refset.n_topics


def topic_score_sup(topic: Topic, refset: ReferenceTopicSet | None, matcher) -> int:
    """1 when some reference topic matches the topic, else 0."""
    if refset is None or refset.n_topics == 0:
        return 0
    for ref in refset.topics:
        if matcher.predict(pair_features(ref, topic)):
            return 1
    return 0


def topic_score_cos(topic: Topic, refset: ReferenceTopicSet) -> float:
    """Largest word-vector cosine similarity to any reference topic."""
    if topic.word_weights.nnz == 0:
        raise ValueError("topic has an all-zero word vector")
    refs = word_matrix(refset.topics, normalize=True)
    vec = topic.word_weights.to_dense()
    vec /= np.linalg.norm(vec)
    return float(np.clip(refs @ vec, 0.0, 1.0).max())


# -- exports ---------------------------------------------------------------


def cdc_csv(curve: CdcCurve) -> str:
    lines = ["threshold,coverage"]
    for t, c in zip(curve.thresholds, curve.coverages):
        lines.append(f"{t:.6f},{c:.6f}")
    return "\n".join(lines) + "\n"


def cdc_svg(curves: dict[str, CdcCurve], width: int = 480, height: int = 360) -> str:
    """Dependency-free SVG line chart; one polyline per labeled curve."""
    pad = 40
    plot_w, plot_h = width - 2 * pad, height - 2 * pad

    def sx(x):
        return pad + x * plot_w

    def sy(y):
        return height - pad - y * plot_h

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(1)}" y2="{sy(0)}" stroke="black"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(0)}" y2="{sy(1)}" stroke="black"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{sx(frac):.1f}" y="{height - pad + 16}" font-size="11" '
            f'text-anchor="middle">{frac:.1f}</text>'
        )
        parts.append(
            f'<text x="{pad - 8}" y="{sy(frac) + 4:.1f}" font-size="11" '
            f'text-anchor="end">{frac:.1f}</text>'
        )
    parts.append(
        f'<text x="{sx(0.5):.1f}" y="{height - 6}" font-size="12" '
        f'text-anchor="middle">distance threshold</text>'
    )
    for idx, (label, curve) in enumerate(curves.items()):
        color = palette[idx % len(palette)]
        points = " ".join(
            f"{sx(t):.2f},{sy(c):.2f}" for t, c in zip(curve.thresholds, curve.coverages)
        )
        parts.append(f'<polyline fill="none" stroke="{color}" points="{points}"/>')
        parts.append(
            f'<text x="{width - pad - 120}" y="{pad + 14 * idx + 10}" font-size="11" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
