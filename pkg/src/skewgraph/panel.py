"""Price panel ingestion and marginal normality testing.

Prices come in as a CSV with an ISO-8601 date column followed by one
adjusted-close column per ticker. Tickers with any missing or
non-positive price are dropped with a recorded reason; survivors are
turned into log-returns.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from .errors import IngestError
from .rankcorr import DataMatrix


@dataclass(frozen=True)
class ReturnsPanel:
    dates: tuple  # return dates (one fewer than price rows)
    tickers: tuple
    log_returns: DataMatrix
    dropped: tuple  # (ticker, reason) pairs


@dataclass(frozen=True)
class NormalityReport:
    tickers: tuple
    statistics: dict  # test name -> array of statistics
    p_values: dict  # test name -> array of p-values
    rejections: dict  # level -> {test name: count}
    skipped: tuple  # (ticker, reason)

    def tests(self):
        return tuple(self.p_values)


def ingest_prices(csv_path, date_column: str = "date") -> ReturnsPanel:
    """Read a price CSV and compute log-returns, dropping unusable tickers."""
    try:
        frame = pd.read_csv(csv_path)
    except Exception as exc:
        raise IngestError(f"could not parse {csv_path}: {exc}") from exc
    if date_column not in frame.columns:
        raise IngestError(f"missing required column {date_column!r}")
    try:
        dates = pd.to_datetime(frame[date_column], format="ISO8601")
    except (ValueError, TypeError) as exc:
        raise IngestError(f"unparseable dates: {exc}") from exc
    if len(dates) < 4:
        raise IngestError("need at least 4 price rows")
    if not dates.is_monotonic_increasing or dates.duplicated().any():
        raise IngestError("dates must be strictly increasing")

    tickers, columns, dropped = [], [], []
    for name in frame.columns:
        if name == date_column:
            continue
        col = pd.to_numeric(frame[name], errors="coerce")
        if col.isna().any():
            at = dates[col.isna()].iloc[0].date()
            dropped.append((name, f"missing value at {at}"))
            continue
        if (col <= 0).any():
            at = dates[col <= 0].iloc[0].date()
            dropped.append((name, f"non-positive price at {at}"))
            continue
        tickers.append(name)
        columns.append(np.log(col.to_numpy()))
    if len(tickers) < 2:
        raise IngestError("fewer than 2 tickers survived cleaning")

    prices = np.column_stack(columns)
    returns = np.diff(prices, axis=0)
    data = DataMatrix(returns, labels=tuple(tickers))
    return ReturnsPanel(
        dates=tuple(d.date().isoformat() for d in dates[1:]),
        tickers=tuple(tickers),
        log_returns=data,
        dropped=tuple(dropped),
    )


def _lilliefors_statistic(x: np.ndarray) -> float:
    """KS distance between the ECDF and the normal fitted by mean/sd."""
    n = x.size
    z = np.sort((x - x.mean()) / x.std(ddof=1))
    cdf = stats.norm.cdf(z)
    up = np.arange(1, n + 1) / n - cdf
    down = cdf - np.arange(0, n) / n
    return float(max(up.max(), down.max()))


def _lilliefors_null_table(n: int, replicates: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = np.empty(replicates)
    chunk = max(1, int(2e6) // n)
    done = 0
    while done < replicates:
        take = min(chunk, replicates - done)
        Z = rng.standard_normal((take, n))
        Zs = np.sort((Z - Z.mean(axis=1, keepdims=True)) / Z.std(axis=1, ddof=1, keepdims=True), axis=1)
        cdf = stats.norm.cdf(Zs)
        grid_hi = np.arange(1, n + 1) / n
        grid_lo = np.arange(0, n) / n
        stat = np.maximum((grid_hi - cdf).max(axis=1), (cdf - grid_lo).max(axis=1))
        out[done : done + take] = stat
        done += take
    return out


def lilliefors_test(x: np.ndarray, null_table: np.ndarray) -> tuple:
    """(statistic, Monte Carlo p-value) against the supplied null table."""
    stat = _lilliefors_statistic(x)
    b = null_table.size
    p = (1 + int((null_table >= stat).sum())) / (b + 1)
    return stat, p


def normality_tests(
    panel: ReturnsPanel,
    levels=(0.01, 0.05),
    mc_replicates: int = 10_000,
    seed: int = 0,
) -> NormalityReport:
    """Lilliefors (Monte Carlo p-values) and Jarque-Bera per ticker."""
    data = panel.log_returns
    usable, skipped = [], []
    for j, tk in enumerate(panel.tickers):
        if data.n < 20:
            skipped.append((tk, f"series too short (n={data.n} < 20)"))
        else:
            usable.append(j)
    if not usable:
        raise ValueError("no series long enough for normality testing")

    null_table = _lilliefors_null_table(data.n, mc_replicates, seed)
    tickers = tuple(panel.tickers[j] for j in usable)
    lf_stat = np.empty(len(usable))
    lf_p = np.empty(len(usable))
    jb_stat = np.empty(len(usable))
    jb_p = np.empty(len(usable))
    for k, j in enumerate(usable):
        x = data.values[:, j]
        lf_stat[k], lf_p[k] = lilliefors_test(x, null_table)
        jb = stats.jarque_bera(x)
        jb_stat[k], jb_p[k] = jb.statistic, jb.pvalue

    p_values = {"lilliefors": lf_p, "jarque_bera": jb_p}
    statistics = {"lilliefors": lf_stat, "jarque_bera": jb_stat}
    rejections = {
        float(level): {name: int((ps < level).sum()) for name, ps in p_values.items()}
        for level in levels
    }
    return NormalityReport(
        tickers=tickers,
        statistics=statistics,
        p_values=p_values,
        rejections=rejections,
        skipped=tuple(skipped),
    )
