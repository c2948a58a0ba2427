"""Pure-Python/numpy implementations of the numerical kernels.

These mirror ``_ckernels.pyx`` function for function and are used when the
compiled extension is unavailable.  Every kernel returns ``(values, bad)``
where ``bad`` is -1 on success or the index of the first term/node that
overflowed.
"""

from __future__ import annotations

import math

import numpy as np

# exp() overflows just above 709.78
LOG_MAX = 709.0
_DIRECT_LIMIT = 700.0
_GAMMA_DIRECT_MAX = 170.0


def dexp_weights(z, jmax):
    """Taylor weights z**j / j! for j <= jmax, truncated once they underflow."""
    w = [1.0 + 0.0 * z]
    j = 1
    while j <= jmax:
        nxt = w[-1] * z / j
        if nxt == 0:
            break
        w.append(nxt)
        j += 1
    return np.array(w)


def dexp_eval(z, u, kmax=None):
    """Delay exponential by the method-of-steps node recurrence.

    ``z`` is lambda*tau and ``u`` holds t/tau.  With T_k the value at t = k*tau,
    T_{k+1} = sum_j z^j/j! T_{k-j} and on [k*tau, (k+1)*tau)
    T = sum_j z^j s^j / j! T_{k-j}, s = t/tau - k.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    is_complex = isinstance(z, complex)
    dtype = np.complex128 if is_complex else np.float64
    out = np.zeros(u.shape, dtype=dtype)
    pos = u >= 0.0
    if not pos.any():
        return out, -1
    up = u[pos]
    k = np.floor(up).astype(np.int64)
    K = int(k.max()) if kmax is None else int(kmax)
    w = dexp_weights(z, K).astype(dtype)
    J = len(w) - 1

    nodes = np.empty(K + 1, dtype=dtype)
    nodes[0] = 1.0
    for m in range(K):
        jm = min(m, J)
        val = np.dot(w[: jm + 1], nodes[m - jm : m + 1][::-1])
        if not np.isfinite(val):
            return out, m + 1
        nodes[m + 1] = val

    s = up - k
    acc = np.zeros(up.shape, dtype=dtype)
    for j in range(min(K, J), -1, -1):
        idx = k - j
        valid = idx >= 0
        acc = acc * s + np.where(valid, w[j] * nodes[np.where(valid, idx, 0)], 0.0)
    if not np.all(np.isfinite(acc)):
        return out, int(k[~np.isfinite(acc)].min())
    out[pos] = acc
    return out, -1


def _lgamma_table(alpha, n):
    return np.array([math.lgamma(alpha * i + 1.0) for i in range(n + 1)])


def series_sum(mant, logscale, log_a, tau, alpha, t):
    """Sum_{n<=floor(t/tau)} D_n (-a)^n (t - n tau)^(alpha n) / Gamma(alpha n + 1).

    ``D_n = mant[n] * exp(logscale[n])`` is the n-th spatial derivative of the
    initial profile.  Terms are formed directly while all factors are in range
    and in log space otherwise.  Returns 0 for t < 0.
    """
    mant = np.asarray(mant, dtype=np.float64)
    logscale = np.asarray(logscale, dtype=np.float64)
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.zeros(t.shape, dtype=np.float64)
    N = len(mant) - 1
    if t.size and t.max() >= 0 and math.floor(t.max() / tau) > N:
        raise ValueError(f"derivative table has {N + 1} entries, t/tau needs more")
    lg = _lgamma_table(alpha, N)
    a = math.exp(log_a)
    sign = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
    flat_t = t.ravel()
    flat_out = out.ravel()
    for i, ti in enumerate(flat_t):
        if ti < 0.0:
            continue
        K = int(math.floor(ti / tau))
        n = np.arange(K + 1)
        d = ti - n * tau
        live = (mant[: K + 1] != 0.0) & ((n == 0) | (d > 0.0))
        n = n[live]
        if n.size == 0:
            continue
        d = d[live]
        m = mant[n]
        ls = logscale[n]
        with np.errstate(divide="ignore"):
            logd = np.where(n == 0, 0.0, np.log(np.where(d > 0, d, 1.0)))
        core = n * log_a + alpha * n * logd
        logterm = ls + core - lg[n]
        over = logterm > LOG_MAX
        if over.any():
            return out, int(n[over].min())
        direct = (
            (np.abs(ls) < _DIRECT_LIMIT)
            & (np.abs(core) < _DIRECT_LIMIT)
            & (np.abs(ls + core) < _DIRECT_LIMIT)
            & (alpha * n + 1.0 <= _GAMMA_DIRECT_MAX)
        )
        terms = np.empty(n.shape)
        if direct.any():
            nd = n[direct]
            dd = np.where(nd == 0, 1.0, d[direct])
            g = np.array([math.gamma(alpha * v + 1.0) for v in nd])
            terms[direct] = (
                m[direct] * np.exp(ls[direct]) * a**nd * dd ** (alpha * nd) / g
            )
        if (~direct).any():
            terms[~direct] = m[~direct] * np.exp(logterm[~direct])
        terms *= sign[n]
        flat_out[i] = math.fsum(terms)
    return out, -1


def l1_caputo(tn, un, alpha):
    """L1 (piecewise-linear) Caputo derivative of order alpha at tn[-1]."""
    tn = np.asarray(tn, dtype=np.float64)
    un = np.asarray(un, dtype=np.float64)
    t = tn[-1]
    slopes = np.diff(un) / np.diff(tn)
    e = 1.0 - alpha
    weights = (t - tn[:-1]) ** e - (t - tn[1:]) ** e
    return math.fsum(slopes * weights) / math.gamma(2.0 - alpha)


def dexp_eval_multi(z, u):
    """dexp_eval for many complex z = lambda*tau at a single u = t/tau."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    out = np.zeros(z.shape, dtype=np.complex128)
    if u < 0:
        return out, -1
    K = int(math.floor(u))
    s = u - K
    w = np.empty((K + 1, z.size), dtype=np.complex128)
    w[0] = 1.0
    for j in range(1, K + 1):
        w[j] = w[j - 1] * z / j
    nodes = np.empty((K + 1, z.size), dtype=np.complex128)
    nodes[0] = 1.0
    for m in range(K):
        nodes[m + 1] = np.sum(w[: m + 1] * nodes[m::-1], axis=0)
        if not np.all(np.isfinite(nodes[m + 1])):
            return out, m + 1
    acc = np.zeros(z.size, dtype=np.complex128)
    for j in range(K, -1, -1):
        acc = acc * s + w[j] * nodes[K - j]
    return acc, -1
