import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_correlation(p, rng, extra_cols=None):
    """Well-conditioned random correlation matrix."""
    k = extra_cols if extra_cols is not None else 2 * p
    A = rng.standard_normal((p, k))
    C = A @ A.T
    d = np.sqrt(np.diag(C))
    C = C / np.outer(d, d)
    np.fill_diagonal(C, 1.0)
    return (C + C.T) / 2.0


def kendall_tau_b_naive(x, y):
    """O(n^2) tau-b straight from the pairwise sign-product definition."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = np.sign(x[:, None] - x[None, :])
    dy = np.sign(y[:, None] - y[None, :])
    iu = np.triu_indices(x.size, k=1)
    num = float((dx * dy)[iu].sum())
    tot = x.size * (x.size - 1) / 2.0
    xtie = float((dx[iu] == 0).sum())
    ytie = float((dy[iu] == 0).sum())
    return num / np.sqrt((tot - xtie) * (tot - ytie))
