"""Assembly of skew-corrected rank correlation estimates.

The correction multiplies each off-diagonal sine-transformed entry by
B_ij = (1 + a_i a_j) / sqrt((1 + a_i^2)(1 + a_j^2)), which equals 1 when
the two shapes agree and shrinks toward (or through) zero as they
disagree. A one-shot eigenvalue-clipping repair is provided for solvers
that need positive semidefinite input.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateColumnError
from .rankcorr import (
    CorrelationEstimate,
    DataMatrix,
    kendall_tau_matrix,
    skeptic_from_rho,
    skeptic_from_tau,
    spearman_rho_matrix,
)
from .skewfit import SkewnessVector


@dataclass(frozen=True)
class SkewCorrectionMatrix:
    """Pairwise correction factors; symmetric with unit diagonal."""

    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=np.float64)
        if not np.allclose(B, B.T, atol=1e-12):
            raise ValueError("correction matrix must be symmetric")
        if not np.allclose(np.diag(B), 1.0, atol=1e-12):
            raise ValueError("correction matrix must have unit diagonal")
        if np.any(B > 1.0 + 1e-12) or np.any(B <= -1.0):
            raise ValueError("correction factors must lie in (-1, 1]")
        object.__setattr__(self, "B", B)


def correction_factor(a_i: float, a_j: float) -> float:
    """Scalar B for one pair of shapes."""
    return (1.0 + a_i * a_j) / np.sqrt((1.0 + a_i**2) * (1.0 + a_j**2))


def skew_correction(alpha: SkewnessVector) -> SkewCorrectionMatrix:
    """Correction factors for every pair; B_ii = 1 exactly."""
    a = alpha.alpha
    s = np.sqrt(1.0 + a**2)
    B = (1.0 + np.outer(a, a)) / np.outer(s, s)
    np.fill_diagonal(B, 1.0)
    return SkewCorrectionMatrix(B)


def apply_skew_correction(
    est: CorrelationEstimate, alpha: SkewnessVector
) -> CorrelationEstimate:
    """Multiply the off-diagonal entries of a transformed estimate by B."""
    B = skew_correction(alpha).B
    m = est.matrix * B
    np.fill_diagonal(m, 1.0)
    return replace(est, matrix=m, skew_corrected=True)


def skew_skeptic(
    data: DataMatrix, statistic: str, alpha: SkewnessVector
) -> CorrelationEstimate:
    """Skew-corrected sine-transformed rank correlation matrix.

    The spearman route is only valid under a Gaussian-kernel latent
    model; callers choose the statistic accordingly.
    """
    if statistic == "kendall":
        est = skeptic_from_tau(kendall_tau_matrix(data))
    elif statistic == "spearman":
        est = skeptic_from_rho(spearman_rho_matrix(data))
    else:
        raise ValueError("statistic must be 'kendall' or 'spearman'")
    return apply_skew_correction(est, alpha)


def pearson_corr(data: DataMatrix) -> CorrelationEstimate:
    """Plain Pearson correlation baseline (no transform, no correction)."""
    sd = data.values.std(axis=0)
    for j in range(data.p):
        if sd[j] == 0.0:
            raise DegenerateColumnError(j, data.labels[j])
    m = np.corrcoef(data.values, rowvar=False)
    np.fill_diagonal(m, 1.0)
    return CorrelationEstimate(m, statistic="pearson", transformed=False)


def psd_repair(est: CorrelationEstimate, eig_floor: float = 1e-4) -> CorrelationEstimate:
    """Clip eigenvalues up to eig_floor and rescale to unit diagonal.

    Inputs that are already positive semidefinite are returned unchanged
    (flag stays false), which makes the operation idempotent. The repair
    is one-shot: after the diagonal rescale the smallest eigenvalue can
    sit slightly below eig_floor, but it is strictly positive.
    """
    if eig_floor <= 0.0:
        raise ValueError("eig_floor must be positive")
    m = est.matrix
    w, v = np.linalg.eigh(m)
    if w[0] >= 0.0:
        return est
    w_clipped = np.maximum(w, eig_floor)
    repaired = (v * w_clipped) @ v.T
    d = np.sqrt(np.diag(repaired))
    repaired = repaired / np.outer(d, d)
    repaired = (repaired + repaired.T) / 2.0
    np.fill_diagonal(repaired, 1.0)
    return replace(est, matrix=repaired, psd_repaired=True)
