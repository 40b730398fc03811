"""Compiled inner loops for path simulation.

All kernels consume a single replicate's uniform row left to right with a
fixed layout, so batch drivers and single-path simulation reproduce each
other exactly for the same (master seed, replicate index).

Marginal kernels use one uniform per step.  Literal kernels use one
uniform for the first step, then two per step (copy/flip decision first,
memory index second).
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def walk_path_marginal(u, p, q):
    """Steps and positions from one uniform row, one uniform per step."""
    n = u.shape[0]
    eta = np.empty(n, dtype=np.int8)
    s = np.empty(n, dtype=np.int64)
    drift = 2.0 * p - 1.0
    eta[0] = 1 if u[0] < q else -1
    s[0] = eta[0]
    for k in range(1, n):
        p_up = 0.5 * (1.0 + drift * s[k - 1] / k)
        eta[k] = 1 if u[k] < p_up else -1
        s[k] = s[k - 1] + eta[k]
    return eta, s


@numba.njit(cache=True)
def walk_path_literal(u, p, q):
    """Steps and positions drawing the copy/flip sign and the memory index
    explicitly: u[0] seeds the first step, then u[2k-1] decides the sign
    alpha_k and u[2k] selects beta_k uniformly from the first k steps."""
    n = (u.shape[0] + 1) // 2
    eta = np.empty(n, dtype=np.int8)
    s = np.empty(n, dtype=np.int64)
    eta[0] = 1 if u[0] < q else -1
    s[0] = eta[0]
    for k in range(1, n):
        alpha = 1 if u[2 * k - 1] < p else -1
        beta = int(u[2 * k] * k)  # uniform over 0..k-1; u < 1 so no clamp
        eta[k] = alpha * eta[beta]
        s[k] = s[k - 1] + eta[k]
    return eta, s


@numba.njit(cache=True)
def walk_stats_marginal(u, a, a2, p, q, first_exact):
    """One pass over a marginal-mode path, returning
    (final position, predictable quadratic variation of the transform,
    max |increment| / (2 a_k) over the path, final transform value).

    The transform is m_k = a_k s_k - 2q + 1.  The quadratic-variation
    increment for step k >= 2 is a_k^2 (1 - (2p-1)^2 (s_{k-1}/(k-1))^2);
    the first increment is a_1^2 = 1 unless `first_exact`, in which case
    the actual variance 1 - (2q-1)^2 of the first step is used.
    """
    n = u.shape[0]
    drift = 2.0 * p - 1.0
    shift = 2.0 * q - 1.0
    eta1 = 1 if u[0] < q else -1
    s = eta1
    m_prev = a[0] * s - shift
    max_ratio = abs(m_prev) / (2.0 * a[0])
    qv = (1.0 - shift * shift) if first_exact else a2[0]
    for k in range(1, n):
        frac = s / k
        qv += a2[k] * (1.0 - drift * drift * frac * frac)
        p_up = 0.5 * (1.0 + drift * frac)
        s += 1 if u[k] < p_up else -1
        m = a[k] * s - shift
        ratio = abs(m - m_prev) / (2.0 * a[k])
        if ratio > max_ratio:
            max_ratio = ratio
        m_prev = m
    return s, qv, max_ratio, m_prev


@numba.njit(cache=True)
def walk_final_marginal(u, p, q):
    """Final position only, marginal mode, same layout as walk_path_marginal."""
    n = u.shape[0]
    drift = 2.0 * p - 1.0
    s = np.int64(1 if u[0] < q else -1)
    for k in range(1, n):
        p_up = 0.5 * (1.0 + drift * s / k)
        s += 1 if u[k] < p_up else -1
    return s


@numba.njit(cache=True)
def walk_final_literal(u, p, q):
    """Final position only, literal mode, same layout as walk_path_literal."""
    n = (u.shape[0] + 1) // 2
    eta = np.empty(n, dtype=np.int8)
    eta[0] = 1 if u[0] < q else -1
    s = np.int64(eta[0])
    for k in range(1, n):
        alpha = 1 if u[2 * k - 1] < p else -1
        beta = int(u[2 * k] * k)
        eta[k] = alpha * eta[beta]
        s += eta[k]
    return s
