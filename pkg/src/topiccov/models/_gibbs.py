"""Collapsed Gibbs sweep kernels.

Each kernel exists twice: a scalar-loop variant compiled with numba and a
per-token vectorized numpy variant. Both consume one pre-drawn uniform per
token, so for a fixed RNG stream the two paths produce bit-identical
states. Path selection happens per call via topiccov._accel.use_numba().

Count-table layout for the plain sampler:
  n_dk : (N, T) int32   tokens of doc d assigned to topic k
  n_kw : (T, V) int32   tokens of word w assigned to topic k
  n_k  : (T,)  int32    total tokens assigned to topic k

The fixed-topic sampler keeps word counts only for the learnable block;
the fixed block's word distributions never change.
"""

from __future__ import annotations

import numpy as np

from .. import _accel


def _lda_sweep_py(z, doc_of, word_of, n_dk, n_kw, n_k, alpha, beta, v_beta, uniforms, work):
    n_tokens = z.shape[0]
    n_topics = n_k.shape[0]
    for t in range(n_tokens):
        d = doc_of[t]
        w = word_of[t]
        k = z[t]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for kk in range(n_topics):
            p = (n_dk[d, kk] + alpha) * (n_kw[kk, w] + beta) / (n_k[kk] + v_beta)
            total += p
            work[kk] = total
        u = uniforms[t] * total
        k_new = 0
        while k_new < n_topics - 1 and work[k_new] < u:
            k_new += 1
        z[t] = k_new
        n_dk[d, k_new] += 1
        n_kw[k_new, w] += 1
        n_k[k_new] += 1


def _lda_sweep_numpy(z, doc_of, word_of, n_dk, n_kw, n_k, alpha, beta, v_beta, uniforms, work):
    n_tokens = z.shape[0]
    n_topics = n_k.shape[0]
    for t in range(n_tokens):
        d = doc_of[t]
        w = word_of[t]
        k = z[t]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        cum = np.cumsum((n_dk[d] + alpha) * (n_kw[:, w] + beta) / (n_k + v_beta))
        u = uniforms[t] * cum[-1]
        k_new = min(int(np.searchsorted(cum, u, side="left")), n_topics - 1)
        z[t] = k_new
        n_dk[d, k_new] += 1
        n_kw[k_new, w] += 1
        n_k[k_new] += 1


def _fixed_sweep_py(
    z,
    doc_of,
    word_of,
    n_dk,
    n_kw_learn,
    n_k_learn,
    prior_dk,
    phi_fixed,
    alpha,
    beta,
    v_beta,
    uniforms,
    work,
):
    n_tokens = z.shape[0]
    n_fixed = phi_fixed.shape[0]
    n_learn = n_k_learn.shape[0]
    n_topics = n_fixed + n_learn
    for t in range(n_tokens):
        d = doc_of[t]
        w = word_of[t]
        k = z[t]
        n_dk[d, k] -= 1
        if k >= n_fixed:
            n_kw_learn[k - n_fixed, w] -= 1
            n_k_learn[k - n_fixed] -= 1
        total = 0.0
        for kk in range(n_fixed):
            p = (n_dk[d, kk] + prior_dk[d, kk]) * phi_fixed[kk, w]
            total += p
            work[kk] = total
        for kk in range(n_learn):
            p = (n_dk[d, n_fixed + kk] + alpha) * (n_kw_learn[kk, w] + beta) / (n_k_learn[kk] + v_beta)
            total += p
            work[n_fixed + kk] = total
        if total <= 0.0:
            # every topic has zero mass for this token; spread by the prior
            k_new = min(int(uniforms[t] * n_topics), n_topics - 1)
        else:
            u = uniforms[t] * total
            k_new = 0
            while k_new < n_topics - 1 and work[k_new] < u:
                k_new += 1
        z[t] = k_new
        n_dk[d, k_new] += 1
        if k_new >= n_fixed:
            n_kw_learn[k_new - n_fixed, w] += 1
            n_k_learn[k_new - n_fixed] += 1


def _fixed_sweep_numpy(
    z,
    doc_of,
    word_of,
    n_dk,
    n_kw_learn,
    n_k_learn,
    prior_dk,
    phi_fixed,
    alpha,
    beta,
    v_beta,
    uniforms,
    work,
):
    n_tokens = z.shape[0]
    n_fixed = phi_fixed.shape[0]
    n_learn = n_k_learn.shape[0]
    n_topics = n_fixed + n_learn
    for t in range(n_tokens):
        d = doc_of[t]
        w = word_of[t]
        k = z[t]
        n_dk[d, k] -= 1
        if k >= n_fixed:
            n_kw_learn[k - n_fixed, w] -= 1
            n_k_learn[k - n_fixed] -= 1
        p_fixed = (n_dk[d, :n_fixed] + prior_dk[d]) * phi_fixed[:, w]
        if n_learn:
            p_learn = (n_dk[d, n_fixed:] + alpha) * (n_kw_learn[:, w] + beta) / (n_k_learn + v_beta)
            cum = np.cumsum(np.concatenate((p_fixed, p_learn)))
        else:
            cum = np.cumsum(p_fixed)
        total = cum[-1]
        if total <= 0.0:
            k_new = min(int(uniforms[t] * n_topics), n_topics - 1)
        else:
            u = uniforms[t] * total
            k_new = min(int(np.searchsorted(cum, u, side="left")), n_topics - 1)
        z[t] = k_new
        n_dk[d, k_new] += 1
        if k_new >= n_fixed:
            n_kw_learn[k_new - n_fixed, w] += 1
            n_k_learn[k_new - n_fixed] += 1


_lda_sweep_njit = _accel.compile_kernel(_lda_sweep_py)
_fixed_sweep_njit = _accel.compile_kernel(_fixed_sweep_py)


def lda_sweep(*args):
    if _accel.use_numba():
        _lda_sweep_njit(*args)
    else:
        _lda_sweep_numpy(*args)


def fixed_sweep(*args):
    if _accel.use_numba():
        _fixed_sweep_njit(*args)
    else:
        _fixed_sweep_numpy(*args)


def audit_counts(z, doc_of, word_of, n_dk, n_kw, n_k) -> None:
    """Assert count tables are consistent with the assignment vector."""
    n_docs, n_topics = n_dk.shape
    ref_dk = np.zeros((n_docs, n_topics), dtype=np.int32)
    np.add.at(ref_dk, (doc_of, z), 1)
    assert np.array_equal(ref_dk, n_dk), "n_dk inconsistent with z"
    if n_kw is not None:
        ref_kw = np.zeros(n_kw.shape, dtype=np.int32)
        np.add.at(ref_kw, (z, word_of), 1)
        assert np.array_equal(ref_kw, n_kw), "n_kw inconsistent with z"
        assert np.array_equal(n_kw.sum(axis=1, dtype=np.int32), n_k), "n_k inconsistent with n_kw"
