"""Synthetic data generation: random sparse precision matrices, Gaussian
sampling, outlier contamination, power transformation, and a latent
Gaussian-copula sampler with half-normal/normal mixing used as an oracle
for the skew-corrected estimators.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import gammaln

from .precision import EdgeSet
from .rankcorr import DataMatrix


@dataclass(frozen=True)
class SimulationConfig:
    p: int
    n: int
    sparsity: float
    contamination_r: float = 0.0
    power_gamma: float = 1.0
    contamination_sd: float = 5.0
    off_diag_value: float = 0.3
    diag_boost: float = 0.5
    standardize: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not 0.0 < self.sparsity < 1.0:
            raise ValueError("sparsity must be in (0, 1)")
        if self.sparsity * self.p * (self.p - 1) / 2 < 1.0:
            raise ValueError("sparsity too small: no edge would be generated")
        if not 0.0 <= self.contamination_r < 1.0:
            raise ValueError("contamination_r must be in [0, 1)")
        if self.power_gamma <= 0.0:
            raise ValueError("power_gamma must be positive")


@dataclass(frozen=True)
class GroundTruth:
    omega: np.ndarray
    sigma: np.ndarray
    edges: EdgeSet


def random_precision(
    p: int,
    sparsity: float,
    off_diag_value: float = 0.3,
    seed: int = 0,
    diag_boost: float = 0.5,
    standardize: bool = True,
) -> GroundTruth:
    """Random-support precision matrix, positive definite by diagonal boost.

    floor(sparsity * p*(p-1)/2) unordered pairs get off_diag_value; the
    diagonal of the hollow matrix is set to |lambda_min| + diag_boost, so
    the smallest eigenvalue equals diag_boost. With standardize=True the
    implied covariance is rescaled to unit variances (the precision is
    congruence-scaled, which preserves its support exactly).
    """
    n_pairs = p * (p - 1) // 2
    m = int(np.floor(sparsity * n_pairs))
    if m < 1:
        raise ValueError("sparsity too small: no edge would be generated")
    if diag_boost <= 0.0:
        raise ValueError("diag_boost must be positive")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n_pairs, size=m, replace=False)
    iu = np.triu_indices(p, k=1)
    omega = np.zeros((p, p))
    rows, cols = iu[0][chosen], iu[1][chosen]
    omega[rows, cols] = off_diag_value
    omega[cols, rows] = off_diag_value
    lam_min = np.linalg.eigvalsh(omega)[0]
    omega[np.diag_indices(p)] = abs(lam_min) + diag_boost
    sigma = np.linalg.inv(omega)
    if standardize:
        d = np.sqrt(np.diag(sigma))
        sigma = sigma / np.outer(d, d)
        omega = omega * np.outer(d, d)
    sigma = (sigma + sigma.T) / 2.0
    omega = (omega + omega.T) / 2.0
    edges = EdgeSet(frozenset(zip(rows.tolist(), cols.tolist())), p)
    return GroundTruth(omega=omega, sigma=sigma, edges=edges)


def sample_gaussian(truth: GroundTruth, n: int, seed: int = 0) -> DataMatrix:
    """n draws from N(0, sigma) through the Cholesky factor."""
    L = np.linalg.cholesky(truth.sigma)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, truth.sigma.shape[0]))
    return DataMatrix(Z @ L.T)


def contaminate(data: DataMatrix, r: float, sd: float = 5.0, seed: int = 0) -> DataMatrix:
    """Replace floor(n*r) randomly chosen entries per column by N(0, sd^2) draws."""
    if not 0.0 <= r < 1.0:
        raise ValueError("r must be in [0, 1)")
    n = data.n
    k = int(np.floor(n * r))
    if k == 0:
        return DataMatrix(data.values.copy(), labels=data.labels)
    rng = np.random.default_rng(seed)
    values = data.values.copy()
    for j in range(data.p):
        rows = rng.choice(n, size=k, replace=False)
        values[rows, j] = rng.normal(0.0, sd, size=k)
    return DataMatrix(values, labels=data.labels)


def power_moment(gamma: float) -> float:
    """E|Z|^{2 gamma} for standard normal Z: 2^gamma Gamma(gamma + 1/2) / sqrt(pi)."""
    return float(np.exp(gamma * np.log(2.0) + gammaln(gamma + 0.5) - 0.5 * np.log(np.pi)))


def power_transform(data: DataMatrix, gamma: float) -> DataMatrix:
    """sign(z) |z|^gamma, scaled so a standard normal input keeps unit second moment."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    z = data.values
    scale = np.sqrt(power_moment(gamma))
    values = np.sign(z) * np.abs(z) ** gamma / scale
    return DataMatrix(values, labels=data.labels)


def _gaussian_copula_pair(latent_corr: np.ndarray, n: int, rng) -> tuple:
    """Two independent N(0, R) samples with standard-normal marginals."""
    L = np.linalg.cholesky(latent_corr)
    V = rng.standard_normal((n, latent_corr.shape[0])) @ L.T
    V2 = rng.standard_normal((n, latent_corr.shape[0])) @ L.T
    return V, V2


def sample_csn(latent_corr: np.ndarray, alpha: np.ndarray, n: int, seed: int = 0) -> DataMatrix:
    """Latent-copula skewed sampler: X = delta * |V'| + sqrt(1 - delta^2) * V.

    V and V' are independent draws from the same Gaussian copula with
    correlation latent_corr; delta_i = alpha_i / sqrt(1 + alpha_i^2).
    """
    latent_corr = np.asarray(latent_corr, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    rng = np.random.default_rng(seed)
    V, V2 = _gaussian_copula_pair(latent_corr, n, rng)
    delta = alpha / np.sqrt(1.0 + alpha**2)
    X = delta * np.abs(V2) + np.sqrt(1.0 - delta**2) * V
    return DataMatrix(X)


def sample_csn_bivariate(
    latent_corr: float, alpha, n: int, seed: int = 0
) -> DataMatrix:
    """Two-variable case of sample_csn."""
    if not -1.0 < latent_corr < 1.0:
        raise ValueError("latent_corr must lie in (-1, 1)")
    R = np.array([[1.0, latent_corr], [latent_corr, 1.0]])
    return sample_csn(R, np.asarray(alpha, dtype=np.float64), n, seed)


def generate_scenario(cfg: SimulationConfig) -> tuple:
    """Full generation pipeline: truth, Gaussian sample, contamination, power map.

    Seeds for the three random stages derive deterministically from
    cfg.seed. Returns (truth, data).
    """
    ss = np.random.SeedSequence(cfg.seed)
    s_truth, s_sample, s_contam = (int(c.generate_state(1)[0]) for c in ss.spawn(3))
    truth = random_precision(
        cfg.p,
        cfg.sparsity,
        cfg.off_diag_value,
        seed=s_truth,
        diag_boost=cfg.diag_boost,
        standardize=cfg.standardize,
    )
    data = sample_gaussian(truth, cfg.n, seed=s_sample)
    data = contaminate(data, cfg.contamination_r, cfg.contamination_sd, seed=s_contam)
    data = power_transform(data, cfg.power_gamma)
    return truth, data


def config_to_json(cfg: SimulationConfig) -> str:
    return json.dumps({"simulation_config": asdict(cfg)}, indent=2, sort_keys=True)


def config_from_json(text: str) -> SimulationConfig:
    payload = json.loads(text)
    return SimulationConfig(**payload["simulation_config"])


def truth_to_json(truth: GroundTruth, cfg: SimulationConfig | None = None) -> str:
    """Serialize ground truth (and optionally its config) for exact replay."""
    payload = {
        "p": truth.omega.shape[0],
        "omega": truth.omega.tolist(),
        "sigma": truth.sigma.tolist(),
        "edges": sorted([list(e) for e in truth.edges.edges]),
    }
    if cfg is not None:
        payload["simulation_config"] = asdict(cfg)
    return json.dumps(payload, indent=2, sort_keys=True)


def truth_from_json(text: str) -> GroundTruth:
    payload = json.loads(text)
    omega = np.asarray(payload["omega"], dtype=np.float64)
    sigma = np.asarray(payload["sigma"], dtype=np.float64)
    edges = EdgeSet(frozenset(tuple(e) for e in payload["edges"]), payload["p"])
    return GroundTruth(omega=omega, sigma=sigma, edges=edges)
