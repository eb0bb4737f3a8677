"""Immutable sparse non-negative vectors used for topic word/doc weights.

Stored as (sorted indices, values) over a fixed logical length. Distance
code iterates only over unions of supports, which matters when the
dictionary has tens of thousands of words.
"""

from __future__ import annotations

import numpy as np


class SparseVector:
    """Non-negative vector of logical length ``size`` with explicit support."""

    __slots__ = ("size", "indices", "values")

    def __init__(self, size: int, indices, values):
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if indices.shape != values.shape or indices.ndim != 1:
            raise ValueError("indices and values must be 1-D and equally long")
        if indices.size:
            if indices[0] < 0 or indices[-1] >= size:
                # sorted check below guarantees the extremes are min/max
                pass
            order = np.argsort(indices, kind="stable")
            indices = indices[order]
            values = values[order]
            if np.any(indices[1:] == indices[:-1]):
                raise ValueError("duplicate indices")
            if indices[0] < 0 or int(indices[-1]) >= size:
                raise ValueError("index out of range")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("values must be finite and non-negative")
        keep = values != 0
        if not keep.all():
            indices = indices[keep]
            values = values[keep]
        self.size = int(size)
        self.indices = indices
        self.values = values
        self.indices.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_dense(cls, arr) -> "SparseVector":
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("expected a 1-D array")
        idx = np.nonzero(arr)[0]
        return cls(arr.size, idx, arr[idx])

    @classmethod
    def from_pairs(cls, size: int, pairs) -> "SparseVector":
        if not pairs:
            return cls(size, [], [])
        idx, vals = zip(*pairs)
        return cls(size, list(idx), list(vals))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.float64)
        out[self.indices] = self.values
        return out

    def pairs(self):
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values)]

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def sum(self) -> float:
        return float(self.values.sum())

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def scaled(self, factor: float) -> "SparseVector":
        if factor < 0:
            raise ValueError("factor must be non-negative")
        return SparseVector(self.size, self.indices, self.values * factor)

    def __eq__(self, other):
        return (
            isinstance(other, SparseVector)
            and self.size == other.size
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.size, self.indices.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return f"SparseVector(size={self.size}, nnz={self.nnz})"


def union_dense(a: SparseVector, b: SparseVector):
    """Densify two sparse vectors over the union of their supports.

    Returns (va, vb) aligned on the shared support; all omitted coordinates
    are zero in both, so any coordinate-wise distance computed on (va, vb)
    equals the distance on the full dense vectors.
    """
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    union = np.union1d(a.indices, b.indices)
    va = np.zeros(union.size, dtype=np.float64)
    vb = np.zeros(union.size, dtype=np.float64)
    va[np.searchsorted(union, a.indices)] = a.values
    vb[np.searchsorted(union, b.indices)] = b.values
    return va, vb
