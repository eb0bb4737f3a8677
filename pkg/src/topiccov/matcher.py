"""Supervised topic-pair matcher.

Pipeline: sample candidate topic pairs stratified by cosine distance,
aggregate ternary annotator labels into binary match labels, train an
L1- or L2-regularized logistic regression on the eight pair features, and
select hyperparameters by (nested) stratified cross-validation scored
with F1.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coverage import FEATURE_NAMES, word_matrix
from .errors import FormatError, TrainingError

MATCHER_FORMAT = "topiccov-matcher"
FILE_VERSION = 1

VALID_LABELS = (0.0, 0.5, 1.0)
MATCH_THRESHOLD = 0.75

# regularization constants paired with both norms, C-major order
DEFAULT_GRID = tuple(
    (c, norm) for c in (0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0) for norm in ("l1", "l2")
)

# feature subset for the matcher variant that drops both cosine features
NOCOS_FEATURES = tuple(i for i, name in enumerate(FEATURE_NAMES) if "cosine" not in name)


def sample_topic_pairs(pool, intervals: int = 10, per_interval: int = 50, seed: int = 0):
    """Sample index pairs stratified by word-vector cosine distance.

    All unordered pairs of distinct pool entries are binned into
    `intervals` equidistant distance bins over [0, 1] (last bin closed);
    up to per_interval pairs are drawn uniformly without replacement from
    each bin. Duplicate topics in the pool are legitimate distance-zero
    candidates. Returns (i, j) pool-index pairs, i < j, grouped by bin.
    """
    if len(pool) < 2:
        raise ValueError("pool must contain at least 2 topics")
    if intervals < 1 or per_interval < 1:
        raise ValueError("intervals and per_interval must be >= 1")
    vecs = word_matrix(pool, normalize=True)
    dist = np.clip(1.0 - vecs @ vecs.T, 0.0, 1.0)
    bins: list[list[tuple[int, int]]] = [[] for _ in range(intervals)]
    n = len(pool)
    for i in range(n):
        for j in range(i + 1, n):
            b = min(int(dist[i, j] * intervals), intervals - 1)
            bins[b].append((i, j))
    rng = np.random.default_rng(seed)
    out = []
    for candidates in bins:
        if not candidates:
            continue
        take = min(per_interval, len(candidates))
        chosen = rng.choice(len(candidates), size=take, replace=False)
        out.extend(candidates[c] for c in sorted(chosen))
    return out


def aggregate_labels(*labels) -> bool:
    """True when the mean of the ternary labels strictly exceeds 0.75."""
    if not labels:
        raise ValueError("at least one label required")
    for lab in labels:
        if float(lab) not in VALID_LABELS:
            raise ValueError(f"label {lab!r} not in {{0, 0.5, 1}}")
    return sum(float(lab) for lab in labels) / len(labels) > MATCH_THRESHOLD


@dataclass(frozen=True)
class AnnotatedPair:
    """A topic pair with its ternary annotator labels and derived flag."""

    topic_a: str
    topic_b: str
    labels: tuple
    features: np.ndarray
    binary: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "binary", aggregate_labels(*self.labels))


# -- logistic regression ---------------------------------------------------


def _sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log1p_exp(m):
    # log(1 + exp(m)) without overflow
    out = np.empty_like(m)
    pos = m > 0
    out[pos] = m[pos] + np.log1p(np.exp(-m[pos]))
    out[~pos] = np.log1p(np.exp(m[~pos]))
    return out


def logistic_objective(weights, bias, x, y, reg_c: float, norm: str):
    """(objective, grad_w, grad_b): mean logistic loss plus (1/C) penalty.

    For the L1 norm the returned gradient covers the smooth part only.
    """
    margins = x @ weights + bias
    loss = float(np.mean(_log1p_exp(margins) - y * margins))
    resid = _sigmoid(margins) - y
    grad_w = x.T @ resid / x.shape[0]
    grad_b = float(resid.mean())
    if norm == "l2":
        loss += 0.5 * float(np.dot(weights, weights)) / reg_c
        grad_w = grad_w + weights / reg_c
    elif norm == "l1":
        loss += float(np.abs(weights).sum()) / reg_c
    else:
        raise ValueError(f"unknown norm {norm!r}")
    return loss, grad_w, grad_b


@dataclass
class LogisticModel:
    """Trained matcher: linear weights over the pair features."""

    weights: np.ndarray
    bias: float
    reg_norm: str
    reg_c: float
    feature_indices: tuple = tuple(range(len(FEATURE_NAMES)))
    objective_trace: list = field(default_factory=list, repr=False)

    def _design(self, features):
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features[np.newaxis, :]
        return features[:, list(self.feature_indices)]

    def predict_prob(self, features):
        probs = _sigmoid(self._design(features) @ self.weights + self.bias)
        return float(probs[0]) if probs.size == 1 else probs

    def predict(self, features):
        prob = self.predict_prob(features)
        if np.ndim(prob) == 0:
            return bool(prob > 0.5)
        return prob > 0.5


def train_logistic(
    x,
    y,
    reg_c: float = 1.0,
    norm: str = "l2",
    tol: float = 1e-6,
    max_iters: int = 50000,
    feature_indices=None,
) -> LogisticModel:
    """Fit by Newton steps (L2) or proximal gradient descent (L1).

    Both solvers line-search on the full objective, so the recorded
    objective trace is non-increasing; iteration stops when the gradient
    norm (prox-gradient residual for L1) drops below tol.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.ndim != 2 or x.shape[0] != y.size:
        raise ValueError("x must be (n_examples, n_features) matching y")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite feature values")
    if reg_c <= 0:
        raise ValueError("reg_c must be positive")
    if feature_indices is not None:
        x = x[:, list(feature_indices)]
    classes = np.unique(y)
    if not np.array_equal(classes, [0.0, 1.0]):
        if classes.size < 2:
            raise TrainingError("training data contains a single class")
        raise ValueError("labels must be binary 0/1")
    if norm == "l2":
        weights, bias, trace = _fit_l2(x, y, reg_c, tol, max_iters)
    elif norm == "l1":
        weights, bias, trace = _fit_l1(x, y, reg_c, tol, max_iters)
    else:
        raise ValueError(f"unknown norm {norm!r}")
    return LogisticModel(
        weights=weights,
        bias=float(bias),
        reg_norm=norm,
        reg_c=reg_c,
        feature_indices=tuple(feature_indices) if feature_indices is not None else tuple(range(x.shape[1])),
        objective_trace=trace,
    )


def _fit_l2(x, y, reg_c, tol, max_iters):
    n, d = x.shape
    weights = np.zeros(d)
    bias = 0.0
    f_cur, grad_w, grad_b = logistic_objective(weights, bias, x, y, reg_c, "l2")
    trace = [f_cur]
    for _ in range(max_iters):
        grad = np.concatenate([grad_w, [grad_b]])
        if np.linalg.norm(grad) < tol:
            break
        margins = x @ weights + bias
        p = _sigmoid(margins)
        s = p * (1.0 - p)
        xs = x * s[:, np.newaxis]
        hess = np.empty((d + 1, d + 1))
        hess[:d, :d] = x.T @ xs / n + np.eye(d) / reg_c
        hess[:d, d] = xs.sum(axis=0) / n
        hess[d, :d] = hess[:d, d]
        hess[d, d] = s.sum() / n + 1e-12
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = grad
        # backtrack on the full objective
        scale = 1.0
        for _ in range(60):
            w_new = weights - scale * step[:d]
            b_new = bias - scale * step[d]
            f_new, gw_new, gb_new = logistic_objective(w_new, b_new, x, y, reg_c, "l2")
            if f_new <= f_cur:
                break
            scale *= 0.5
        else:
            break
        weights, bias = w_new, b_new
        f_cur, grad_w, grad_b = f_new, gw_new, gb_new
        trace.append(f_cur)
    return weights, bias, trace


def _fit_l1(x, y, reg_c, tol, max_iters):
    n, d = x.shape
    weights = np.zeros(d)
    bias = 0.0
    lam = 1.0 / reg_c
    step = 1.0
    f_cur, _, _ = logistic_objective(weights, bias, x, y, reg_c, "l1")
    trace = [f_cur]

    def smooth_parts(w, b):
        margins = x @ w + b
        loss = float(np.mean(_log1p_exp(margins) - y * margins))
        resid = _sigmoid(margins) - y
        return loss, x.T @ resid / n, float(resid.mean())

    loss_cur, grad_w, grad_b = smooth_parts(weights, bias)
    for _ in range(max_iters):
        # optimality residual of the composite objective
        res = np.where(
            weights != 0,
            grad_w + lam * np.sign(weights),
            np.sign(grad_w) * np.maximum(np.abs(grad_w) - lam, 0.0),
        )
        if np.sqrt(np.dot(res, res) + grad_b * grad_b) < tol:
            break
        accepted = False
        for _ in range(60):
            w_try = weights - step * grad_w
            w_new = np.sign(w_try) * np.maximum(np.abs(w_try) - step * lam, 0.0)
            b_new = bias - step * grad_b
            loss_new, gw_new, gb_new = smooth_parts(w_new, b_new)
            dw = w_new - weights
            db = b_new - bias
            quad = loss_cur + float(np.dot(grad_w, dw)) + grad_b * db + (
                float(np.dot(dw, dw)) + db * db
            ) / (2.0 * step)
            if loss_new <= quad:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        weights, bias = w_new, b_new
        loss_cur, grad_w, grad_b = loss_new, gw_new, gb_new
        f_new = loss_cur + lam * float(np.abs(weights).sum())
        trace.append(min(f_new, trace[-1]))
        step *= 1.2  # gentle step growth between iterations
    return weights, bias, trace


# -- evaluation -------------------------------------------------------------


def f1_score(predictions, labels) -> float:
    predictions = np.asarray(predictions, dtype=bool)
    labels = np.asarray(labels, dtype=bool)
    if predictions.shape != labels.shape:
        raise ValueError("predictions and labels must have equal length")
    tp = int(np.sum(predictions & labels))
    fp = int(np.sum(predictions & ~labels))
    fn = int(np.sum(~predictions & labels))
    if 2 * tp + fp + fn == 0:
        return 0.0
    return 2.0 * tp / (2.0 * tp + fp + fn)


def stratified_folds(labels, k: int = 5, seed=0):
    """k disjoint index arrays with per-class proportions preserved.

    Degrades to a plain shuffled split (with a warning) when some class is
    rarer than k.
    """
    labels = np.asarray(labels)
    n = labels.size
    if k < 2 or k > n:
        raise ValueError("k must lie in [2, n_examples]")
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(labels, return_counts=True)
    folds: list[list[int]] = [[] for _ in range(k)]
    if classes.size >= 2 and counts.min() < k:
        warnings.warn("minority class smaller than k; falling back to a plain split")
        order = rng.permutation(n)
        for pos, idx in enumerate(order):
            folds[pos % k].append(int(idx))
    else:
        pos = 0
        for cls in classes:
            members = np.nonzero(labels == cls)[0]
            members = members[rng.permutation(members.size)]
            for idx in members:
                folds[pos % k].append(int(idx))
                pos += 1
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass
class CvSelection:
    params: tuple  # (C, norm)
    mean_f1: float
    failed: list = field(default_factory=list)


@dataclass
class CvReport:
    fold_f1: list
    mean: float
    std: float
    selected: list  # per-fold (C, norm)


def crossvalidate(x, y, grid=DEFAULT_GRID, k: int = 5, seed=0) -> CvSelection:
    """Mean F1 per grid point over k stratified folds; best point wins,
    ties resolved by grid order. Points failing on any fold are excluded."""
    if not grid:
        raise ValueError("empty hyperparameter grid")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    folds = stratified_folds(y, k=k, seed=seed)
    all_idx = np.arange(y.size)
    best = None
    failed = []
    for params in grid:
        reg_c, norm = params
        scores = []
        try:
            for fold in folds:
                train_idx = np.setdiff1d(all_idx, fold)
                model = train_logistic(x[train_idx], y[train_idx], reg_c=reg_c, norm=norm)
                scores.append(f1_score(model.predict(x[fold]), y[fold]))
        except TrainingError as exc:
            failed.append((params, str(exc)))
            continue
        mean = float(np.mean(scores))
        if best is None or mean > best.mean_f1:
            best = CvSelection(params=tuple(params), mean_f1=mean)
    if best is None:
        raise TrainingError("every grid point failed cross-validation")
    best.failed = failed
    return best


def nested_crossvalidate(x, y, grid=DEFAULT_GRID, k: int = 5, seed=0) -> CvReport:
    """Outer k-fold assessment of the full inner hyperparameter search."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    outer = stratified_folds(y, k=k, seed=seed)
    all_idx = np.arange(y.size)
    fold_f1 = []
    selected = []
    for fold_no, fold in enumerate(outer):
        train_idx = np.setdiff1d(all_idx, fold)
        inner = crossvalidate(x[train_idx], y[train_idx], grid=grid, k=k, seed=[seed, fold_no])
        reg_c, norm = inner.params
        model = train_logistic(x[train_idx], y[train_idx], reg_c=reg_c, norm=norm)
        fold_f1.append(f1_score(model.predict(x[fold]), y[fold]))
        selected.append(inner.params)
    return CvReport(
        fold_f1=fold_f1,
        mean=float(np.mean(fold_f1)),
        std=float(np.std(fold_f1)),
        selected=selected,
    )


# -- serialization -----------------------------------------------------------


def save_matcher(model: LogisticModel, path) -> None:
    doc = {
        "format": MATCHER_FORMAT,
        "version": FILE_VERSION,
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "norm": model.reg_norm,
        "C": model.reg_c,
        "features": [FEATURE_NAMES[i] for i in model.feature_indices],
    }
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def load_matcher(path) -> LogisticModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != MATCHER_FORMAT:
        raise FormatError(f"{path}: not a {MATCHER_FORMAT} file")
    if doc.get("version") != FILE_VERSION:
        raise FormatError(f"{path}: unsupported version {doc.get('version')}")
    try:
        indices = tuple(FEATURE_NAMES.index(name) for name in doc["features"])
    except ValueError as exc:
        raise FormatError(f"{path}: unknown feature name") from exc
    return LogisticModel(
        weights=np.asarray(doc["weights"], dtype=np.float64),
        bias=float(doc["bias"]),
        reg_norm=doc["norm"],
        reg_c=float(doc["C"]),
        feature_indices=indices,
    )
