"""Regularization selection by stability under subsampling.

Edge selection frequencies are estimated over subsamples drawn without
replacement; per-pair instability 2*xi*(1-xi) is averaged, the curve is
monotonized from the sparse end, and the smallest lambda whose
monotonized instability stays within the threshold is selected (the
densest graph that is still stable).
"""

from dataclasses import dataclass, field

import numpy as np

from .rankcorr import DataMatrix


@dataclass(frozen=True)
class StarsConfig:
    lambda_grid: tuple
    num_subsamples: int = 20
    subsample_size: int | None = None  # None: floor(10 sqrt(n)), capped at n - 1
    beta_threshold: float = 0.05
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(x) for x in self.lambda_grid)
        if len(grid) == 0:
            raise ValueError("lambda_grid must be non-empty")
        if any(x <= 0 for x in grid):
            raise ValueError("lambda_grid entries must be positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ValueError("lambda_grid must be strictly decreasing")
        if not 0.0 < self.beta_threshold < 0.5:
            raise ValueError("beta_threshold must be in (0, 0.5)")
        if self.num_subsamples < 2:
            raise ValueError("num_subsamples must be >= 2")
        object.__setattr__(self, "lambda_grid", grid)

    def resolved_subsample_size(self, n: int) -> int:
        b = self.subsample_size
        if b is None:
            b = int(np.floor(10.0 * np.sqrt(n)))
            b = min(b, n - 1)
        if not 0 < b < n:
            raise ValueError(f"subsample_size must lie in (0, {n})")
        return b


@dataclass(frozen=True)
class StarsResult:
    lambda_star: float
    instability_curve: tuple  # (lambda, raw D, monotonized D) triples
    threshold_met: bool  # False: no grid value was stable enough


def subsample_indices(n: int, size: int, seed: int, job: int) -> np.ndarray:
    """Deterministic without-replacement draw; per-job seed is seed XOR job."""
    rng = np.random.default_rng(seed ^ job)
    return rng.choice(n, size=size, replace=False)


def stars_select(data: DataMatrix, pipeline, cfg: StarsConfig) -> StarsResult:
    """Pick lambda by graph stability.

    pipeline maps (DataMatrix, lambda) -> EdgeSet. If it also exposes an
    edge_path(DataMatrix, grid) -> list[EdgeSet] attribute, that is used
    instead so per-subsample work (rank statistics, warm starts) is
    shared across the grid.
    """
    n, p = data.n, data.p
    b = cfg.resolved_subsample_size(n)
    grid = cfg.lambda_grid
    n_pairs = p * (p - 1) // 2

    counts = np.zeros((len(grid), n_pairs))
    iu = np.triu_indices(p, k=1)
    flat = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(iu[0], iu[1]))}

    path_fn = getattr(pipeline, "edge_path", None)
    for job in range(cfg.num_subsamples):
        rows = subsample_indices(n, b, cfg.seed, job)
        sub = DataMatrix(data.values[rows], labels=data.labels)
        if path_fn is not None:
            edge_sets = path_fn(sub, grid)
        else:
            edge_sets = [pipeline(sub, lam) for lam in grid]
        for gi, es in enumerate(edge_sets):
            for e in es.edges:
                counts[gi, flat[e]] += 1.0

    xi = counts / cfg.num_subsamples
    raw = (2.0 * xi * (1.0 - xi)).mean(axis=1)
    # running sup from the sparse (large lambda) end
    monotone = np.maximum.accumulate(raw)

    stable = np.nonzero(monotone <= cfg.beta_threshold)[0]
    if stable.size:
        pick = stable[-1]  # grid is descending: last stable index = smallest lambda
        met = True
    else:
        pick = len(grid) - 1  # fall back to the smallest grid value
        met = False
    curve = tuple(
        (grid[i], float(raw[i]), float(monotone[i])) for i in range(len(grid))
    )
    return StarsResult(lambda_star=grid[pick], instability_curve=curve, threshold_met=met)


def lambda_grid_around(center: float, half_width: float, count: int) -> list:
    """count equally spaced values inside (center - hw, center + hw), descending."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if center - half_width <= 0.0:
        raise ValueError("lower endpoint of the lambda window must be positive")
    pts = np.linspace(center - half_width, center + half_width, count + 2)[1:-1]
    return [float(x) for x in pts[::-1]]
