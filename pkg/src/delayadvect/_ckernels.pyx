# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np

from libc.math cimport exp, floor, lgamma, log, pow, tgamma, isfinite, fabs

cdef double LOG_MAX = 709.0
cdef double DIRECT_LIMIT = 700.0
cdef double GAMMA_DIRECT_MAX = 170.0

ctypedef fused scalar_t:
    double
    double complex


cdef inline bint _finite(scalar_t v) noexcept nogil:
    if scalar_t is double:
        return isfinite(v)
    else:
        return isfinite(v.real) and isfinite(v.imag)


def _dexp_eval(scalar_t z, const double[::1] u, long kmax):
    cdef Py_ssize_t i, n = u.shape[0]
    cdef long K = kmax, J, m, j, jm, k
    cdef scalar_t acc, val
    cdef double s

    if scalar_t is double:
        dtype = np.float64
    else:
        dtype = np.complex128
    out_arr = np.zeros(n, dtype=dtype)
    cdef scalar_t[::1] out = out_arr
    if K < 0:
        return out_arr, -1

    w_arr = np.zeros(K + 1, dtype=dtype)
    cdef scalar_t[::1] w = w_arr
    w[0] = 1.0
    J = 0
    with nogil:
        for j in range(1, K + 1):
            val = w[j - 1] * z / j
            if val == 0:
                break
            w[j] = val
            J = j

    nodes_arr = np.empty(K + 1, dtype=dtype)
    cdef scalar_t[::1] nodes = nodes_arr
    nodes[0] = 1.0
    cdef long bad = -1
    with nogil:
        for m in range(K):
            jm = m if m < J else J
            acc = 0
            for j in range(jm + 1):
                acc = acc + w[j] * nodes[m - j]
            if not _finite(acc):
                bad = m + 1
                break
            nodes[m + 1] = acc
    if bad >= 0:
        return out_arr, bad

    with nogil:
        for i in range(n):
            if u[i] < 0.0:
                continue
            k = <long>floor(u[i])
            s = u[i] - k
            jm = k if k < J else J
            acc = 0
            for j in range(jm, -1, -1):
                acc = acc * s + w[j] * nodes[k - j]
            if not _finite(acc):
                bad = k
                break
            out[i] = acc
    return out_arr, bad


def dexp_eval(z, u, kmax=None):
    u = np.ascontiguousarray(u, dtype=np.float64).ravel()
    if kmax is None:
        kmax = int(np.floor(u.max())) if u.size and u.max() >= 0 else -1
    if isinstance(z, complex):
        return _dexp_eval(complex(z), u, kmax)
    return _dexp_eval(float(z), u, kmax)


def series_sum(mant, logscale, double log_a, double tau, double alpha, t):
    cdef const double[::1] mv = np.ascontiguousarray(mant, dtype=np.float64)
    cdef const double[::1] lv = np.ascontiguousarray(logscale, dtype=np.float64)
    t_arr = np.ascontiguousarray(t, dtype=np.float64)
    shape = t_arr.shape
    cdef const double[::1] tv = t_arr.ravel()
    out_arr = np.zeros(tv.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, nt = tv.shape[0]
    cdef long N = mv.shape[0] - 1, K, n
    cdef double ti, d, core, lt, term, s, c, tt, a = exp(log_a)
    cdef long bad = -1
    if tv.shape[0] and np.max(t_arr) >= 0 and floor(np.max(t_arr) / tau) > N:
        raise ValueError(f"derivative table has {N + 1} entries, t/tau needs more")

    cdef double[::1] lg = np.empty(N + 1, dtype=np.float64)
    for n in range(N + 1):
        lg[n] = lgamma(alpha * n + 1.0)

    with nogil:
        for i in range(nt):
            ti = tv[i]
            if ti < 0.0:
                continue
            K = <long>floor(ti / tau)
            s = 0.0
            c = 0.0
            for n in range(K + 1):
                if mv[n] == 0.0:
                    continue
                d = ti - n * tau
                if n > 0 and d <= 0.0:
                    continue
                if n == 0:
                    core = 0.0
                else:
                    core = n * log_a + alpha * n * log(d)
                lt = lv[n] + core - lg[n]
                if lt > LOG_MAX:
                    bad = n
                    break
                if (fabs(lv[n]) < DIRECT_LIMIT and fabs(core) < DIRECT_LIMIT
                        and fabs(lv[n] + core) < DIRECT_LIMIT
                        and alpha * n + 1.0 <= GAMMA_DIRECT_MAX):
                    if n == 0:
                        term = mv[n] * exp(lv[n])
                    else:
                        term = (mv[n] * exp(lv[n]) * pow(a, <double>n)
                                * pow(d, alpha * n) / tgamma(alpha * n + 1.0))
                else:
                    term = mv[n] * exp(lt)
                if n % 2 == 1:
                    term = -term
                # Neumaier compensated summation
                tt = s + term
                if fabs(s) >= fabs(term):
                    c = c + ((s - tt) + term)
                else:
                    c = c + ((term - tt) + s)
                s = tt
            if bad >= 0:
                break
            out[i] = s + c
    return out_arr.reshape(shape), bad


def l1_caputo(tn, un, double alpha):
    cdef const double[::1] tv = np.ascontiguousarray(tn, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(un, dtype=np.float64)
    cdef Py_ssize_t j, M = tv.shape[0] - 1
    cdef double t = tv[M], e = 1.0 - alpha, term, s = 0.0, c = 0.0, tt
    with nogil:
        for j in range(M):
            term = ((uv[j + 1] - uv[j]) / (tv[j + 1] - tv[j])
                    * (pow(t - tv[j], e) - pow(t - tv[j + 1], e)))
            tt = s + term
            if fabs(s) >= fabs(term):
                c = c + ((s - tt) + term)
            else:
                c = c + ((term - tt) + s)
            s = tt
    return (s + c) / tgamma(2.0 - alpha)


def dexp_eval_multi(z, double u):
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t i, nz = zv.shape[0]
    out_arr = np.zeros(nz, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    if u < 0:
        return out_arr, -1
    cdef long K = <long>floor(u), m, j, J, jm
    cdef double s = u - K
    cdef double complex[::1] w = np.empty(K + 1, dtype=np.complex128)
    cdef double complex[::1] nodes = np.empty(K + 1, dtype=np.complex128)
    cdef double complex acc, val, zi
    cdef long bad = -1
    with nogil:
        for i in range(nz):
            zi = zv[i]
            w[0] = 1.0
            J = 0
            for j in range(1, K + 1):
                val = w[j - 1] * zi / j
                if val == 0:
                    break
                w[j] = val
                J = j
            nodes[0] = 1.0
            for m in range(K):
                jm = m if m < J else J
                acc = 0
                for j in range(jm + 1):
                    acc = acc + w[j] * nodes[m - j]
                if not _finite(acc):
                    bad = m + 1
                    break
                nodes[m + 1] = acc
            if bad >= 0:
                break
            jm = K if K < J else J
            acc = 0
            for j in range(jm, -1, -1):
                acc = acc * s + w[j] * nodes[K - j]
            out[i] = acc
    return out_arr, bad
