"""Rank statistics: Kendall's tau, Spearman's rho, normalized ranks, and
the sine transforms mapping them to the latent correlation scale.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri
from scipy.stats import rankdata

from ._fastrank import kendall_matrix_kernel
from .errors import DegenerateColumnError

VALID_STATISTICS = ("kendall", "spearman", "pearson")


@dataclass(frozen=True)
class DataMatrix:
    """n x p observation matrix with column labels.

    Requires n >= 3, p >= 2, finite entries, and unique labels.
    """

    values: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array")
        n, p = values.shape
        if n < 3:
            raise ValueError(f"need at least 3 observations, got {n}")
        if p < 2:
            raise ValueError(f"need at least 2 variables, got {p}")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        labels = tuple(self.labels) if self.labels else tuple(f"x{j+1}" for j in range(p))
        if len(labels) != p:
            raise ValueError(f"expected {p} labels, got {len(labels)}")
        if len(set(labels)) != p:
            raise ValueError("labels must be unique")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class RankMatrix:
    """Normalized ranks r / (n + 1), every entry strictly inside (0, 1)."""

    ranks: np.ndarray

    def __post_init__(self):
        ranks = np.asarray(self.ranks, dtype=np.float64)
        if not (np.all(ranks > 0.0) and np.all(ranks < 1.0)):
            raise ValueError("normalized ranks must lie strictly in (0, 1)")
        object.__setattr__(self, "ranks", ranks)


@dataclass(frozen=True)
class CorrelationEstimate:
    """p x p correlation matrix plus provenance flags."""

    matrix: np.ndarray
    statistic: str
    transformed: bool = False
    skew_corrected: bool = False
    psd_repaired: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if self.statistic not in VALID_STATISTICS:
            raise ValueError(f"statistic must be one of {VALID_STATISTICS}")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("matrix must be symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-12):
            raise ValueError("matrix must have unit diagonal")
        if np.any(np.abs(m) > 1.0 + 1e-12):
            raise ValueError("entries must lie in [-1, 1]")
        object.__setattr__(self, "matrix", m)

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


def _check_degenerate(data: DataMatrix) -> None:
    values = data.values
    for j in range(data.p):
        col = values[:, j]
        if col.min() == col.max():
            raise DegenerateColumnError(j, data.labels[j])


def normalized_ranks(data: DataMatrix) -> RankMatrix:
    """Average-tie ranks divided by n + 1."""
    r = rankdata(data.values, method="average", axis=0)
    return RankMatrix(r / (data.n + 1))


def kendall_tau_matrix(data: DataMatrix) -> np.ndarray:
    """Pairwise tau-b matrix, O(n log n) per pair via merge-sort counting."""
    _check_degenerate(data)
    return kendall_matrix_kernel(np.ascontiguousarray(data.values))


def spearman_rho_matrix(data: DataMatrix) -> np.ndarray:
    """Pearson correlation of average-tie ranks."""
    _check_degenerate(data)
    r = rankdata(data.values, method="average", axis=0)
    rho = np.corrcoef(r, rowvar=False)
    np.fill_diagonal(rho, 1.0)
    return rho


def skeptic_from_tau(tau: np.ndarray) -> CorrelationEstimate:
    """sin(pi * tau / 2) off-diagonal, unit diagonal."""
    tau = np.asarray(tau, dtype=np.float64)
    m = np.sin(np.pi / 2.0 * tau)
    np.fill_diagonal(m, 1.0)
    return CorrelationEstimate(m, statistic="kendall", transformed=True)


def skeptic_from_rho(rho: np.ndarray) -> CorrelationEstimate:
    """2 sin(pi * rho / 6) off-diagonal, unit diagonal."""
    rho = np.asarray(rho, dtype=np.float64)
    m = 2.0 * np.sin(np.pi / 6.0 * rho)
    np.fill_diagonal(m, 1.0)
    return CorrelationEstimate(m, statistic="spearman", transformed=True)


def normal_scores(data: DataMatrix) -> DataMatrix:
    """Replace each entry by the standard-normal quantile of its normalized rank."""
    ranks = normalized_ranks(data).ranks
    return DataMatrix(ndtri(ranks), labels=data.labels)
