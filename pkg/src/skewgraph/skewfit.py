"""Per-column shape parameter estimation for the skew correction.

Two routes: a moment inversion of the skew-normal skewness map, and
univariate maximum likelihood (skew-normal, or skew-t profiled over a
fixed degrees-of-freedom grid). Only the shape parameter alpha feeds the
downstream correction; location and scale are nuisance parameters.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import betainc, gammaln, log_ndtr

from .rankcorr import DataMatrix

ALPHA_CAP = 50.0
NU_GRID = (3.0, 4.0, 5.0, 7.0, 10.0, 20.0, 50.0)
VALID_METHODS = ("moments", "skew_normal_mle", "skew_t_mle")

_C = (4.0 - np.pi) / 2.0


def delta_from_alpha(alpha):
    return alpha / np.sqrt(1.0 + alpha**2)


def alpha_from_delta(delta):
    return delta / np.sqrt(1.0 - delta**2)


def skewness_from_delta(delta):
    """Skew-normal population skewness as a function of delta."""
    u = delta * np.sqrt(2.0 / np.pi)
    return _C * u**3 / (1.0 - u**2) ** 1.5


def delta_from_skewness(g1):
    """Invert the skewness map; caller must clamp |g1| first."""
    t = (np.abs(g1) / _C) ** (2.0 / 3.0)
    u2 = t / (1.0 + t)
    return np.sign(g1) * np.sqrt(np.pi / 2.0 * u2)


# largest skewness representable without exceeding the alpha cap
GAMMA1_CAP = float(skewness_from_delta(delta_from_alpha(ALPHA_CAP)))


@dataclass(frozen=True)
class FitDiagnostics:
    converged: np.ndarray  # bool per column
    clamped: np.ndarray  # bool per column, alpha or skewness hit the cap
    loglik: np.ndarray  # float per column, nan for the moments method


@dataclass(frozen=True)
class SkewnessVector:
    """Per-variable shape estimates with the method that produced them."""

    alpha: np.ndarray
    method: str
    diagnostics: FitDiagnostics

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if self.method not in VALID_METHODS:
            raise ValueError(f"method must be one of {VALID_METHODS}")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha must be finite")
        if np.any(np.abs(alpha) > ALPHA_CAP + 1e-9):
            raise ValueError(f"|alpha| must not exceed {ALPHA_CAP}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def p(self) -> int:
        return self.alpha.shape[0]


def zeros(p: int) -> SkewnessVector:
    """All-zero shape vector (no correction)."""
    diag = FitDiagnostics(
        converged=np.ones(p, dtype=bool),
        clamped=np.zeros(p, dtype=bool),
        loglik=np.full(p, np.nan),
    )
    return SkewnessVector(np.zeros(p), method="moments", diagnostics=diag)


def sample_skewness(x: np.ndarray) -> float:
    """Moment-ratio skewness m3 / m2^{3/2}."""
    d = x - x.mean()
    m2 = np.mean(d**2)
    if m2 == 0.0:
        return 0.0
    return float(np.mean(d**3) / m2**1.5)


def estimate_alpha_moments(data: DataMatrix) -> SkewnessVector:
    """Invert the skew-normal skewness map on each column's sample skewness."""
    if data.n < 8:
        raise ValueError(f"moments method needs n >= 8, got {data.n}")
    p = data.p
    alpha = np.zeros(p)
    clamped = np.zeros(p, dtype=bool)
    for j in range(p):
        g1 = sample_skewness(data.values[:, j])
        if abs(g1) > GAMMA1_CAP:
            g1 = np.sign(g1) * GAMMA1_CAP
            clamped[j] = True
        if g1 == 0.0:
            alpha[j] = 0.0
        else:
            a = alpha_from_delta(delta_from_skewness(g1))
            alpha[j] = np.clip(a, -ALPHA_CAP, ALPHA_CAP)
    diag = FitDiagnostics(
        converged=np.ones(p, dtype=bool), clamped=clamped, loglik=np.full(p, np.nan)
    )
    return SkewnessVector(alpha, method="moments", diagnostics=diag)


def _skew_normal_negloglik(params, x):
    xi, log_omega, alpha = params
    omega = np.exp(log_omega)
    z = (x - xi) / omega
    ll = (
        x.size * (np.log(2.0) - log_omega)
        - 0.5 * np.sum(z**2)
        - 0.5 * x.size * np.log(2.0 * np.pi)
        + np.sum(log_ndtr(alpha * z))
    )
    return -ll


def _t_logcdf(x, nu):
    """Student-t log CDF via the regularized incomplete beta function."""
    ib = betainc(nu / 2.0, 0.5, nu / (nu + x * x))
    with np.errstate(divide="ignore"):
        return np.where(x <= 0, np.log(0.5 * ib), np.log1p(-0.5 * ib))


def _skew_t_negloglik(params, x, nu):
    xi, log_omega, alpha = params
    omega = np.exp(log_omega)
    z = (x - xi) / omega
    w = alpha * z * np.sqrt((nu + 1.0) / (nu + z**2))
    t_const = gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0) - 0.5 * np.log(nu * np.pi)
    logpdf = t_const - (nu + 1.0) / 2.0 * np.log1p(z**2 / nu)
    ll = (
        x.size * (np.log(2.0) - log_omega)
        + np.sum(logpdf)
        + np.sum(_t_logcdf(w, nu + 1.0))
    )
    return -ll


def _moment_start(x: np.ndarray):
    g1 = sample_skewness(x)
    g1 = np.clip(g1, -0.95 * GAMMA1_CAP, 0.95 * GAMMA1_CAP)
    delta = delta_from_skewness(g1) if g1 != 0.0 else 0.0
    s = x.std()
    if s == 0.0:
        s = 1.0
    omega = s / np.sqrt(max(1.0 - 2.0 * delta**2 / np.pi, 1e-3))
    xi = x.mean() - omega * delta * np.sqrt(2.0 / np.pi)
    return np.array([xi, np.log(omega), alpha_from_delta(delta) if delta else 0.0])


def _fit_column(x, negloglik, args, start, max_iter):
    res = minimize(
        negloglik,
        start,
        args=args,
        method="Nelder-Mead",
        options={"fatol": 1e-8, "xatol": 1e-6, "maxiter": max_iter, "maxfev": max_iter},
    )
    return res


def estimate_alpha_mle(
    data: DataMatrix,
    family: str = "skew_normal",
    nu_grid=NU_GRID,
    max_iter: int = 2000,
) -> SkewnessVector:
    """Column-wise ML fit of (location, scale, alpha).

    skew_t profiles the likelihood over a fixed nu grid; a column that
    fails to converge falls back to its moments estimate.
    """
    if family not in ("skew_normal", "skew_t"):
        raise ValueError("family must be 'skew_normal' or 'skew_t'")
    if data.n < 20:
        raise ValueError(f"MLE needs n >= 20, got {data.n}")
    p = data.p
    moments = estimate_alpha_moments(data)
    alpha = np.zeros(p)
    converged = np.zeros(p, dtype=bool)
    clamped = np.zeros(p, dtype=bool)
    loglik = np.full(p, np.nan)

    for j in range(p):
        x = data.values[:, j]
        start = _moment_start(x)
        if family == "skew_normal":
            res = _fit_column(x, _skew_normal_negloglik, (x,), start, max_iter)
            best = res
        else:
            best = None
            warm = start
            for nu in nu_grid:
                res = _fit_column(x, _skew_t_negloglik, (x, nu), warm, max_iter)
                if res.success:
                    warm = res.x  # consecutive nu optima are close
                if best is None or res.fun < best.fun:
                    best = res
        if best.success and np.isfinite(best.fun):
            a = best.x[2]
            if abs(a) > ALPHA_CAP:
                a = np.sign(a) * ALPHA_CAP
                clamped[j] = True
            alpha[j] = a
            converged[j] = True
            loglik[j] = -best.fun
        else:
            alpha[j] = moments.alpha[j]
            clamped[j] = moments.diagnostics.clamped[j]
    method = "skew_normal_mle" if family == "skew_normal" else "skew_t_mle"
    diag = FitDiagnostics(converged=converged, clamped=clamped, loglik=loglik)
    return SkewnessVector(alpha, method=method, diagnostics=diag)
