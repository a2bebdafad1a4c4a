"""Pure-numpy SMO solver for the epsilon-SVR dual.

Fallback backend; a compiled twin lives in ``_smo_core.pyx``. Both expose
``solve(K, y, c, epsilon, tol, max_iter)`` over a precomputed kernel matrix
and must agree to solver tolerance.

The 2n-variable dual (alpha and alpha-star stacked) is optimized by
maximal-violating-pair selection: each iteration picks the most violating
(up, low) index pair and solves the two-variable subproblem analytically,
preserving the equality constraint exactly.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def solve(K, y, c, epsilon, tol, max_iter):
    """Minimize the epsilon-SVR dual; returns (beta, bias, iterations, gap).

    K: (n, n) PSD kernel matrix; y: (n,) targets; beta[i] = alpha_i -
    alpha*_i with |beta| <= c and sum(beta) == 0; gap is the final KKT
    violation (m - M, <= tol on convergence).
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.shape[0]
    s = np.concatenate([np.ones(n), -np.ones(n)])
    p = np.concatenate([epsilon - y, epsilon + y])
    a = np.zeros(2 * n)
    k_beta = np.zeros(n)
    diag = np.diag(K)

    it = 0
    gap = np.inf
    while it < max_iter:
        score = -s * (s * np.tile(k_beta, 2) + p)  # -s_i * G_i
        up = ((s > 0) & (a < c)) | ((s < 0) & (a > 0))
        low = ((s > 0) & (a > 0)) | ((s < 0) & (a < c))
        up_idx = np.flatnonzero(up)
        low_idx = np.flatnonzero(low)
        if up_idx.size == 0 or low_idx.size == 0:
            gap = 0.0
            break
        i = up_idx[np.argmax(score[up_idx])]
        j = low_idx[np.argmin(score[low_idx])]
        gap = score[i] - score[j]
        if gap <= tol:
            break

        ii, jj = i % n, j % n
        eta = max(diag[ii] + diag[jj] - 2.0 * K[ii, jj], 1e-12)
        t = gap / eta
        # Box limits on both coordinates along the feasible direction.
        t_max_i = c - a[i] if s[i] > 0 else a[i]
        t_max_j = a[j] if s[j] > 0 else c - a[j]
        t = min(t, t_max_i, t_max_j)
        a[i] += s[i] * t
        a[j] -= s[j] * t
        a[i] = min(max(a[i], 0.0), c)
        a[j] = min(max(a[j], 0.0), c)
        k_beta += t * (K[:, ii] - K[:, jj])
        it += 1

    # Bias from the final violation interval midpoint.
    score = -s * (s * np.tile(k_beta, 2) + p)
    up = ((s > 0) & (a < c)) | ((s < 0) & (a > 0))
    low = ((s > 0) & (a > 0)) | ((s < 0) & (a < c))
    hi = score[up].max() if up.any() else 0.0
    lo = score[low].min() if low.any() else 0.0
    bias = 0.5 * (hi + lo)

    beta = a[:n] - a[n:]
    return beta, float(bias), it, float(gap)
