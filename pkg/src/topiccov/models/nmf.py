"""NMF by alternating projected gradient, initialized with NNDSVD.

The factorization minimizes ||A - WH||_F^2 with non-negativity enforced by
projection; each alternating update uses Armijo backtracking, so the
objective trace is non-increasing by construction. The initializer is the
plain NNDSVD scheme (zeros stay zero) on a truncated SVD; small inputs use
the exact SVD, larger ones a seeded randomized subspace iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import NumericalError
from ..sparsevec import SparseVector
from ..topics import ModelType, Topic, TopicModel

_EXACT_SVD_LIMIT = 400
_RANK_EPS = 1e-10
_FILL = 1e-6


def _truncated_svd(matrix, rank: int, seed: int, oversample: int = 10, power_iters: int = 2):
    n_rows, n_cols = matrix.shape
    small = min(n_rows, n_cols)
    if small <= _EXACT_SVD_LIMIT or rank + oversample >= small:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
        u, s, vt = np.linalg.svd(dense, full_matrices=False)
        return u[:, :rank], s[:rank], vt[:rank]
    rng = np.random.default_rng(seed)
    sketch = rng.standard_normal((n_cols, rank + oversample))
    basis = matrix @ sketch
    basis, _ = np.linalg.qr(basis)
    for _ in range(power_iters):
        basis = matrix.T @ basis if sp.issparse(matrix) else matrix.T @ basis
        basis, _ = np.linalg.qr(basis)
        basis = matrix @ basis
        basis, _ = np.linalg.qr(basis)
    small_mat = basis.T @ matrix
    if sp.issparse(small_mat):
        small_mat = np.asarray(small_mat)
    u_small, s, vt = np.linalg.svd(small_mat, full_matrices=False)
    u = basis @ u_small
    return u[:, :rank], s[:rank], vt[:rank]


def nndsvd_init(matrix, n_topics: int, seed: int = 0):
    """Non-negative factor pair (W0, H0) from the truncated SVD.

    Rank-deficient trailing components are filled with the small positive
    constant 1e-6 so no factor is identically zero.
    """
    n_rows, n_cols = matrix.shape
    if n_topics < 1 or n_topics > min(n_rows, n_cols):
        raise ValueError("n_topics must lie in [1, min(N, V)]")
    if (matrix < 0).sum() > 0:
        raise ValueError("matrix must be non-negative")
    u, s, vt = _truncated_svd(matrix, n_topics, seed)
    w = np.zeros((n_rows, n_topics))
    h = np.zeros((n_topics, n_cols))
    w[:, 0] = np.sqrt(s[0]) * np.abs(u[:, 0])
    h[0] = np.sqrt(s[0]) * np.abs(vt[0])
    for j in range(1, n_topics):
        if s[j] <= _RANK_EPS * s[0]:
            w[:, j] = _FILL
            h[j] = _FILL
            continue
        x, y = u[:, j], vt[j]
        x_pos, y_pos = np.maximum(x, 0), np.maximum(y, 0)
        x_neg, y_neg = np.maximum(-x, 0), np.maximum(-y, 0)
        norm_xp, norm_yp = np.linalg.norm(x_pos), np.linalg.norm(y_pos)
        norm_xn, norm_yn = np.linalg.norm(x_neg), np.linalg.norm(y_neg)
        mass_pos = norm_xp * norm_yp
        mass_neg = norm_xn * norm_yn
        if mass_pos >= mass_neg and mass_pos > 0:
            scale = np.sqrt(s[j] * mass_pos)
            w[:, j] = scale * x_pos / norm_xp
            h[j] = scale * y_pos / norm_yp
        elif mass_neg > 0:
            scale = np.sqrt(s[j] * mass_neg)
            w[:, j] = scale * x_neg / norm_xn
            h[j] = scale * y_neg / norm_yn
        else:
            w[:, j] = _FILL
            h[j] = _FILL
    return w, h


@dataclass
class NmfFactors:
    w: np.ndarray  # (N, T) document-topic weights
    h: np.ndarray  # (T, V) topic-word weights
    objective_trace: list[float] = field(default_factory=list)


class _Objective:
    """||A - WH||_F^2 evaluated through Gram/cross products only."""

    def __init__(self, matrix):
        self.matrix = matrix
        if sp.issparse(matrix):
            self.norm_sq = float(matrix.multiply(matrix).sum())
        else:
            self.norm_sq = float(np.dot(matrix.ravel(), matrix.ravel()))

    def cross_h(self, w):
        # W^T A, shape (T, V)
        out = w.T @ self.matrix if not sp.issparse(self.matrix) else (self.matrix.T @ w).T
        return np.asarray(out)

    def cross_w(self, h):
        # A H^T, shape (N, T)
        return np.asarray(self.matrix @ h.T)

    def value(self, w, h, cross=None):
        if cross is None:
            cross = self.cross_h(w)
        fit = float(np.sum((w.T @ w) * (h @ h.T)))
        inner = float(np.sum(cross * h))
        return self.norm_sq - 2.0 * inner + fit


def _pg_step(x, grad, f, f_old, step, sigma=0.01, shrink=0.5, max_tries=30):
    """One projected Armijo step: x+ = max(x - step*grad, 0).

    Accepts when f(x+) - f(x) <= sigma * <grad, x+ - x>; since x+ lies along
    the projected negative gradient the bound is <= 0, so acceptance never
    increases f. Returns x unchanged when every tried step fails.
    """
    for attempt in range(max_tries):
        candidate = np.maximum(x - step * grad, 0.0)
        f_new = f(candidate)
        if f_new - f_old <= sigma * float(np.sum(grad * (candidate - x))):
            if attempt == 0:
                step /= shrink  # first try worked, probe a larger step next time
            return candidate, step
        step *= shrink
    return x, step


def projected_gradient(matrix, w0, h0, max_iters: int = 200, tol: float = 1e-6) -> NmfFactors:
    """Alternating PG descent on ||A - WH||_F^2 from the given init.

    Stops when the objective decrease falls below tol * previous value or
    after max_iters alternations. The trace holds the objective at the
    initial point and after every alternation and is non-increasing.
    """
    obj = _Objective(matrix)
    w = np.asarray(w0, dtype=np.float64).copy()
    h = np.asarray(h0, dtype=np.float64).copy()
    cross_h = obj.cross_h(w)  # W^T A
    trace = [obj.value(w, h, cross=cross_h)]
    step_w, step_h = 1.0, 1.0
    for it in range(max_iters):
        # H subproblem, W fixed: f(H) = ||A||^2 - 2<W^T A, H> + <(W^T W) H, H>
        gram_w = w.T @ w
        grad_h = 2.0 * (gram_w @ h - cross_h)

        def f_of_h(cand):
            return obj.norm_sq - 2.0 * float(np.sum(cross_h * cand)) + float(
                np.sum((gram_w @ cand) * cand)
            )

        h, step_h = _pg_step(h, grad_h, f_of_h, f_of_h(h), step_h)

        # W subproblem, H fixed
        gram_h = h @ h.T
        cross_w = obj.cross_w(h)  # A H^T
        grad_w = 2.0 * (w @ gram_h - cross_w)

        def f_of_w(cand):
            return obj.norm_sq - 2.0 * float(np.sum(cross_w * cand)) + float(
                np.sum((cand @ gram_h) * cand)
            )

        w, step_w = _pg_step(w, grad_w, f_of_w, f_of_w(w), step_w)

        cross_h = obj.cross_h(w)
        f_new = obj.value(w, h, cross=cross_h)
        if not np.isfinite(f_new):
            raise NumericalError("non-finite NMF objective", iteration=it)
        # line searches guarantee mathematical descent; the recorded value
        # may wobble by rounding noise between the two subproblem forms of
        # the objective, so pin the trace to the guarantee
        f_new = min(f_new, trace[-1])
        trace.append(f_new)
        if trace[-2] - f_new <= tol * max(trace[-2], 1e-30):
            break
    return NmfFactors(w=w, h=h, objective_trace=trace)


def train_nmf(matrix, n_topics: int, max_iters: int = 200, tol: float = 1e-6, seed: int = 0) -> TopicModel:
    """NNDSVD-initialized projected-gradient NMF as a TopicModel.

    Topic k takes word weights from row k of H and document weights from
    column k of W. A component that dies during optimization keeps a
    negligible uniform word weight so it stays representable.
    """
    w0, h0 = nndsvd_init(matrix, n_topics, seed=seed)
    factors = projected_gradient(matrix, w0, h0, max_iters=max_iters, tol=tol)
    topics = []
    for k in range(n_topics):
        word = factors.h[k]
        doc = factors.w[:, k]
        if not word.any() and not doc.any():
            word = np.full(word.size, 1e-12)
        topics.append(
            Topic(SparseVector.from_dense(word), SparseVector.from_dense(doc))
        )
    model = TopicModel(topics, ModelType.NMF, seed)
    model.factors = factors
    return model
