"""Numba kernels for the O(n log n) Kendall tau-b computation.

The per-pair routine sorts by the first variable (ties broken by the
second), counts tie groups, and counts discordant pairs as merge-sort
inversions of the second variable. Each (i, j) cell is computed
independently, so results do not depend on evaluation order.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _lexsort_pair(x, y):
    """Indices sorting by x ascending with ties broken by y ascending."""
    n = x.shape[0]
    idx = np.arange(n)
    buf = np.empty(n, np.int64)
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                a = idx[i]
                b = idx[j]
                if x[a] < x[b] or (x[a] == x[b] and y[a] <= y[b]):
                    buf[k] = a
                    i += 1
                else:
                    buf[k] = b
                    j += 1
                k += 1
            while i < mid:
                buf[k] = idx[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = idx[j]
                j += 1
                k += 1
            for t in range(lo, hi):
                idx[t] = buf[t]
            lo += 2 * width
        width *= 2
    return idx


@njit(cache=True)
def _sort_and_count_inversions(a, buf):
    """Sort a in place (merge sort) and return the strict inversion count."""
    n = a.shape[0]
    inv = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                k += 1
            while i < mid:
                buf[k] = a[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = a[j]
                j += 1
                k += 1
            for t in range(lo, hi):
                a[t] = buf[t]
            lo += 2 * width
        width *= 2
    return inv


@njit(cache=True)
def _kendall_tau_b(x, y):
    """Tau-b between two columns; assumes neither column is constant."""
    n = x.shape[0]
    order = _lexsort_pair(x, y)
    xs = np.empty(n, np.float64)
    ys = np.empty(n, np.float64)
    for k in range(n):
        xs[k] = x[order[k]]
        ys[k] = y[order[k]]

    xtie = 0
    ntie = 0
    run_x = 1
    run_xy = 1
    for k in range(1, n):
        if xs[k] == xs[k - 1]:
            run_x += 1
            if ys[k] == ys[k - 1]:
                run_xy += 1
            else:
                ntie += run_xy * (run_xy - 1) // 2
                run_xy = 1
        else:
            xtie += run_x * (run_x - 1) // 2
            run_x = 1
            ntie += run_xy * (run_xy - 1) // 2
            run_xy = 1
    xtie += run_x * (run_x - 1) // 2
    ntie += run_xy * (run_xy - 1) // 2

    buf = np.empty(n, np.float64)
    dis = _sort_and_count_inversions(ys, buf)

    ytie = 0
    run_y = 1
    for k in range(1, n):
        if ys[k] == ys[k - 1]:
            run_y += 1
        else:
            ytie += run_y * (run_y - 1) // 2
            run_y = 1
    ytie += run_y * (run_y - 1) // 2

    tot = n * (n - 1) // 2
    num = float(tot - xtie - ytie + ntie - 2 * dis)
    den = np.sqrt(float(tot - xtie)) * np.sqrt(float(tot - ytie))
    return num / den


@njit(cache=True)
def kendall_matrix_kernel(X):
    """Tau-b for every column pair of X (n x p), unit diagonal."""
    p = X.shape[1]
    T = np.eye(p)
    for i in range(p):
        xi = np.ascontiguousarray(X[:, i])
        for j in range(i + 1, p):
            xj = np.ascontiguousarray(X[:, j])
            t = _kendall_tau_b(xi, xj)
            T[i, j] = t
            T[j, i] = t
    return T
