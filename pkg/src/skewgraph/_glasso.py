"""Numba kernel for the l1-penalized precision estimator.

Block coordinate descent over columns; each block is a lasso on the
working covariance solved by cyclic coordinate descent. The working
covariance keeps diagonal S_jj + lam throughout, matching the penalized
stationarity conditions with the diagonal included in the penalty.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _lasso_cd(W11, s12, lam, beta, tol, max_pass):
    """Minimize 0.5 b'W11 b - s12'b + lam*||b||_1 in place; returns passes used."""
    m = s12.shape[0]
    v = W11 @ beta
    for it in range(max_pass):
        max_d = 0.0
        for k in range(m):
            bk = beta[k]
            rho = s12[k] - v[k] + W11[k, k] * bk
            if rho > lam:
                new = (rho - lam) / W11[k, k]
            elif rho < -lam:
                new = (rho + lam) / W11[k, k]
            else:
                new = 0.0
            d = new - bk
            if d != 0.0:
                beta[k] = new
                for t in range(m):
                    v[t] += W11[t, k] * d
                ad = abs(d)
                if ad > max_d:
                    max_d = ad
        if max_d <= tol:
            return it + 1
    return max_pass


@njit(cache=True)
def glasso_kernel(S, lam, tol, max_iter, inner_tol, inner_max, W, B):
    """Run block coordinate descent starting from (W, B), both modified.

    W must enter with diagonal S_jj + lam. B holds, per row j, the lasso
    coefficients of column j. Returns (Theta, iterations, converged).
    """
    p = S.shape[0]
    off_sum = 0.0
    for r in range(p):
        for c in range(p):
            if r != c:
                off_sum += abs(S[r, c])
    mean_off = off_sum / (p * (p - 1)) if p > 1 else 0.0
    thr = tol * mean_off
    if thr <= 0.0:
        thr = tol

    W11 = np.empty((p - 1, p - 1))
    s12 = np.empty(p - 1)
    beta = np.empty(p - 1)

    iterations = 0
    converged = False
    for sweep in range(max_iter):
        delta = 0.0
        for j in range(p):
            a = 0
            for r in range(p):
                if r == j:
                    continue
                s12[a] = S[r, j]
                beta[a] = B[j, a]
                b = 0
                for c in range(p):
                    if c == j:
                        continue
                    W11[a, b] = W[r, c]
                    b += 1
                a += 1
            _lasso_cd(W11, s12, lam, beta, inner_tol, inner_max)
            w12 = W11 @ beta
            a = 0
            for r in range(p):
                if r == j:
                    continue
                delta += abs(W[r, j] - w12[a])
                W[r, j] = w12[a]
                W[j, r] = w12[a]
                B[j, a] = beta[a]
                a += 1
        iterations = sweep + 1
        if delta / (p * (p - 1)) <= thr:
            converged = True
            break

    Theta = np.empty((p, p))
    for j in range(p):
        dot = 0.0
        a = 0
        for r in range(p):
            if r == j:
                continue
            dot += W[r, j] * B[j, a]
            a += 1
        tjj = 1.0 / (W[j, j] - dot)
        Theta[j, j] = tjj
        a = 0
        for r in range(p):
            if r == j:
                continue
            Theta[r, j] = -tjj * B[j, a]
            a += 1
    return Theta, iterations, converged
