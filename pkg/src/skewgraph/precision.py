"""Sparse precision estimation: glasso, CLIME, and the graphical Dantzig
selector, plus edge extraction.

CLIME and the Dantzig selector share one LP core: minimize ||x||_1
subject to ||A x - b||_inf <= radius, solved by positive/negative part
splitting with the HiGHS solver. Column solutions are symmetrized by the
smaller-in-magnitude rule.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ._glasso import glasso_kernel
from .errors import InfeasibleColumnError, NotPositiveSemidefiniteError
from .rankcorr import CorrelationEstimate

VALID_PRECISION_METHODS = ("glasso", "clime", "dantzig")
PSD_TOL = 1e-8
EDGE_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class PrecisionEstimate:
    """Symmetric precision matrix with solver provenance."""

    omega: np.ndarray
    method: str
    lam: float
    iterations: int = 0
    kkt_residual: float = np.nan
    converged: bool = True

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=np.float64)
        if self.method not in VALID_PRECISION_METHODS:
            raise ValueError(f"method must be one of {VALID_PRECISION_METHODS}")
        if not np.all(np.isfinite(omega)):
            raise ValueError("omega must be finite")
        if not np.array_equal(omega, omega.T):
            raise ValueError("omega must be exactly symmetric")
        if np.any(np.diag(omega) <= 0.0):
            raise ValueError("omega diagonal must be strictly positive")
        object.__setattr__(self, "omega", omega)

    @property
    def p(self) -> int:
        return self.omega.shape[0]


@dataclass(frozen=True)
class EdgeSet:
    """Unordered node pairs (0-indexed, i < j) on p nodes."""

    edges: frozenset
    p: int

    def __post_init__(self):
        edges = frozenset((min(i, j), max(i, j)) for i, j in self.edges)
        for i, j in edges:
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < self.p and 0 <= j < self.p):
                raise ValueError(f"edge ({i},{j}) outside 0..{self.p-1}")
        object.__setattr__(self, "edges", edges)

    def __len__(self) -> int:
        return len(self.edges)


def _as_matrix(S) -> np.ndarray:
    if isinstance(S, CorrelationEstimate):
        return S.matrix
    return np.asarray(S, dtype=np.float64)


def _check_psd(S: np.ndarray) -> None:
    w = np.linalg.eigvalsh(S)
    if w[0] < -PSD_TOL:
        raise NotPositiveSemidefiniteError(float(w[0]))


def glasso(
    S,
    lam: float,
    tol: float = 1e-4,
    max_iter: int = 200,
    warm_start=None,
) -> PrecisionEstimate:
    """Penalized maximum likelihood precision estimate.

    Block coordinate descent; converged when the average absolute change
    of the working covariance off-diagonals drops below tol times the
    mean absolute off-diagonal of S. warm_start, when given, is the
    (W, B) pair of a previous solve on the same S (typically at a nearby
    lam); it is not modified.
    """
    S = _as_matrix(S)
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    p = S.shape[0]
    _check_psd(S)

    if lam == 0.0:
        omega = np.linalg.inv(S)
        omega = (omega + omega.T) / 2.0
        resid = kkt_residual(S, omega, 0.0)
        return PrecisionEstimate(
            omega, "glasso", 0.0, iterations=0, kkt_residual=resid, converged=True
        )

    if warm_start is None:
        W = S.copy()
        W[np.diag_indices(p)] = np.diag(S) + lam
        B = np.zeros((p, p - 1))
    else:
        W = warm_start[0].copy()
        W[np.diag_indices(p)] = np.diag(S) + lam
        B = warm_start[1].copy()

    inner_tol = tol * max(np.abs(S - np.diag(np.diag(S))).mean(), 1e-12) / 10.0
    theta, iterations, converged = glasso_kernel(
        S, lam, tol, max_iter, inner_tol, 10 * max_iter, W, B
    )
    omega = (theta + theta.T) / 2.0
    resid = kkt_residual(S, omega, lam)
    est = PrecisionEstimate(
        omega, "glasso", lam, iterations=iterations, kkt_residual=resid,
        converged=converged,
    )
    object.__setattr__(est, "_warm", (W, B))
    return est


def glasso_path(S, lams, tol: float = 1e-4, max_iter: int = 200):
    """Solve along a descending lam grid, each solve warm-started."""
    S = _as_matrix(S)
    _check_psd(S)
    out = []
    warm = None
    for lam in lams:
        est = glasso(S, lam, tol=tol, max_iter=max_iter, warm_start=warm)
        warm = getattr(est, "_warm", None)
        out.append(est)
    return out


def kkt_residual(S: np.ndarray, omega: np.ndarray, lam: float) -> float:
    """Max violation of the penalized stationarity conditions.

    Uses W = omega^{-1}: |S - W + lam*sign(omega)| on the support and
    max(0, |S - W| - lam) off it (diagonal included; its sign is +1).
    """
    W = np.linalg.inv(omega)
    G = S - W
    on = omega != 0.0
    r_on = np.abs(G + lam * np.sign(omega))[on]
    r_off = np.maximum(np.abs(G[~on]) - lam, 0.0) if (~on).any() else np.array([0.0])
    vals = [r_on.max() if r_on.size else 0.0, r_off.max() if r_off.size else 0.0]
    return float(max(vals))


def _min_l1_under_inf_constraint(A: np.ndarray, b: np.ndarray, radius: float):
    """min ||x||_1 s.t. ||A x - b||_inf <= radius, or None if infeasible."""
    m, k = A.shape
    c = np.ones(2 * k)
    A_ub = np.block([[A, -A], [-A, A]])
    b_ub = np.concatenate([radius + b, radius - b])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    if not res.success:
        return None
    z = res.x
    return z[:k] - z[k:]


def clime(S, lam: float, tol: float = 1e-6) -> PrecisionEstimate:
    """Columnwise l1-minimal inverse under ||S beta - e_i||_inf <= lam."""
    S = _as_matrix(S)
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    p = S.shape[0]
    cols = np.empty((p, p))
    for i in range(p):
        e = np.zeros(p)
        e[i] = 1.0
        beta = _min_l1_under_inf_constraint(S, e, lam)
        if beta is None:
            raise InfeasibleColumnError(i, lam)
        viol = np.max(np.abs(S @ beta - e)) - lam
        if viol > max(tol, 1e-6):
            raise InfeasibleColumnError(i, lam, f"constraint violation {viol:.2e}")
        cols[:, i] = beta
    omega = _min_magnitude_symmetrize(cols)
    return PrecisionEstimate(omega, "clime", lam)


def dantzig(S, delta: float) -> PrecisionEstimate:
    """Nodewise l1-minimal regression converted to precision columns."""
    S = _as_matrix(S)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    p = S.shape[0]
    cols = np.empty((p, p))
    idx = np.arange(p)
    for j in range(p):
        keep = idx != j
        A = S[np.ix_(keep, keep)]
        b = S[keep, j]
        theta = _min_l1_under_inf_constraint(A, b, delta)
        if theta is None:
            raise InfeasibleColumnError(j, delta)
        quad = 1.0 - 2.0 * theta @ b + theta @ A @ theta
        omega_jj = 1.0 / quad
        cols[j, j] = omega_jj
        cols[keep, j] = -omega_jj * theta
    omega = _min_magnitude_symmetrize(cols)
    return PrecisionEstimate(omega, "dantzig", delta)


def _min_magnitude_symmetrize(M: np.ndarray) -> np.ndarray:
    """Keep, for each (i, j), the smaller-in-magnitude of M_ij and M_ji."""
    choice = np.where(np.abs(M) <= np.abs(M.T), M, M.T)
    upper = np.triu(choice)  # upper triangle resolves magnitude ties
    return upper + np.triu(choice, 1).T


def edges_from_precision(omega, zero_tol: float = EDGE_ZERO_TOL) -> EdgeSet:
    """Edge (i, j) present iff |omega_ij| > zero_tol."""
    if isinstance(omega, PrecisionEstimate):
        m = omega.omega
    else:
        m = np.asarray(omega, dtype=np.float64)
    p = m.shape[0]
    iu = np.triu_indices(p, k=1)
    mask = np.abs(m[iu]) > zero_tol
    edges = frozenset(
        (int(i), int(j)) for i, j, keep in zip(iu[0], iu[1], mask) if keep
    )
    return EdgeSet(edges, p)
