"""Base distance measures between weight vectors.

Four measures: cosine distance on raw non-negative vectors, and Hellinger,
L1, L2 on probability distributions. Hellinger carries the 1/sqrt(2)
constant so its range is [0, 1], in line with the other bounded measures.
"""

from __future__ import annotations

import numpy as np

from .sparsevec import SparseVector, union_dense


def _as_pair(v, w):
    if isinstance(v, SparseVector) and isinstance(w, SparseVector):
        return union_dense(v, w)
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise ValueError(f"length mismatch: {v.shape} vs {w.shape}")
    return v, w


def normalize_to_distribution(v):
    """Scale a non-negative vector to sum 1; all-zero input stays all-zero."""
    if isinstance(v, SparseVector):
        total = v.sum()
        return v if total == 0 else v.scaled(1.0 / total)
    v = np.asarray(v, dtype=np.float64)
    if np.any(v < 0):
        raise ValueError("negative component")
    total = v.sum()
    if total == 0:
        return np.zeros_like(v)
    return v / total


def cosine_distance(v, w) -> float:
    """1 - cos(angle); lies in [0, 1] for non-negative inputs."""
    v, w = _as_pair(v, w)
    nv = np.sqrt(np.dot(v, v))
    nw = np.sqrt(np.dot(w, w))
    if nv == 0 or nw == 0:
        raise ValueError("cosine distance undefined for a zero vector")
    return float(1.0 - np.dot(v, w) / (nv * nw))


def hellinger_distance(p, q) -> float:
    """sqrt(sum (sqrt(p_i) - sqrt(q_i))^2) / sqrt(2) on distributions."""
    p, q = _as_pair(p, q)
    _check_distribution(p)
    _check_distribution(q)
    diff = np.sqrt(p) - np.sqrt(q)
    return float(np.sqrt(np.dot(diff, diff)) / np.sqrt(2.0))


def l1_distance(p, q) -> float:
    p, q = _as_pair(p, q)
    return float(np.abs(p - q).sum())


def l2_distance(p, q) -> float:
    p, q = _as_pair(p, q)
    diff = p - q
    return float(np.sqrt(np.dot(diff, diff)))


def _check_distribution(p):
    if np.any(p < 0):
        raise ValueError("negative component in distribution")
    if p.sum() == 0:
        raise ValueError("degenerate all-zero distribution")
