# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled SMO solver for the epsilon-SVR dual.

Same contract as ``_smo_py.solve``; the per-iteration pair selection and
gradient update run as typed C loops instead of numpy scans.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def solve(K, y, double c, double epsilon, double tol, long max_iter):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] K_arr = \
        np.ascontiguousarray(K, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] y_arr = \
        np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = y_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] a = np.zeros(2 * n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] k_beta = np.zeros(n)
    cdef double[:, ::1] Kv = K_arr
    cdef double[::1] yv = y_arr
    cdef double[::1] av = a
    cdef double[::1] kb = k_beta

    cdef Py_ssize_t it = 0, u, i, j, ii, jj
    cdef double gap = np.inf
    cdef double score, m, M, eta, t, t_lim, si, sj, hi, lo
    cdef bint in_up, in_low

    while it < max_iter:
        m = -np.inf
        M = np.inf
        i = -1
        j = -1
        for u in range(2 * n):
            if u < n:
                si = 1.0
                score = yv[u] - epsilon - kb[u]
            else:
                si = -1.0
                score = yv[u - n] + epsilon - kb[u - n]
            in_up = (si > 0.0 and av[u] < c) or (si < 0.0 and av[u] > 0.0)
            in_low = (si > 0.0 and av[u] > 0.0) or (si < 0.0 and av[u] < c)
            if in_up and score > m:
                m = score
                i = u
            if in_low and score < M:
                M = score
                j = u
        if i < 0 or j < 0:
            gap = 0.0
            break
        gap = m - M
        if gap <= tol:
            break

        ii = i % n
        jj = j % n
        eta = Kv[ii, ii] + Kv[jj, jj] - 2.0 * Kv[ii, jj]
        if eta < 1e-12:
            eta = 1e-12
        t = gap / eta
        si = 1.0 if i < n else -1.0
        sj = 1.0 if j < n else -1.0
        t_lim = (c - av[i]) if si > 0.0 else av[i]
        if t_lim < t:
            t = t_lim
        t_lim = av[j] if sj > 0.0 else (c - av[j])
        if t_lim < t:
            t = t_lim
        av[i] += si * t
        av[j] -= sj * t
        if av[i] < 0.0:
            av[i] = 0.0
        elif av[i] > c:
            av[i] = c
        if av[j] < 0.0:
            av[j] = 0.0
        elif av[j] > c:
            av[j] = c
        for u in range(n):
            kb[u] += t * (Kv[u, ii] - Kv[u, jj])
        it += 1

    hi = -np.inf
    lo = np.inf
    for u in range(2 * n):
        if u < n:
            si = 1.0
            score = yv[u] - epsilon - kb[u]
        else:
            si = -1.0
            score = yv[u - n] + epsilon - kb[u - n]
        in_up = (si > 0.0 and av[u] < c) or (si < 0.0 and av[u] > 0.0)
        in_low = (si > 0.0 and av[u] > 0.0) or (si < 0.0 and av[u] < c)
        if in_up and score > hi:
            hi = score
        if in_low and score < lo:
            lo = score
    if hi == -np.inf:
        hi = 0.0
    if lo == np.inf:
        lo = 0.0

    beta = a[:n] - a[n:]
    return beta, 0.5 * (hi + lo), it, gap
