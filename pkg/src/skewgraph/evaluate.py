"""Scoring of estimated graphs against ground truth: confusion counts,
FNR/FPR, ROC curves with trapezoidal AUC, and edge-set comparisons.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .precision import EdgeSet


@dataclass(frozen=True)
class RocPoint:
    lam: float
    fpr: float
    fnr: float
    tpr: float


@dataclass(frozen=True)
class RocResult:
    """Per-lambda operating points and the area under the (FPR, TPR) curve."""

    points: tuple
    auc: float
    trial_count: int = 1

    def paper_coordinates(self):
        """(FNR, 1 - FPR) pairs, the plotting convention used upstream."""
        return [(pt.fnr, 1.0 - pt.fpr) for pt in self.points]


def confusion(estimated: EdgeSet, truth: EdgeSet):
    """(fp, fn, tp, tn) over the p-choose-2 possible edges."""
    if estimated.p != truth.p:
        raise ValueError(f"node counts differ: {estimated.p} vs {truth.p}")
    est, tru = estimated.edges, truth.edges
    tp = len(est & tru)
    fp = len(est - tru)
    fn = len(tru - est)
    total = estimated.p * (estimated.p - 1) // 2
    tn = total - len(tru) - fp
    return fp, fn, tp, tn


def rates(fp: int, fn: int, truth: EdgeSet):
    """(fnr, fpr): missed fraction of true edges, spurious fraction of non-edges."""
    n_true = len(truth.edges)
    if n_true == 0:
        raise ValueError("rates undefined: ground truth has no edges")
    total = truth.p * (truth.p - 1) // 2
    fnr = fn / n_true
    fpr = fp / (total - n_true)
    return fnr, fpr


def auc_from_points(fprs, tprs) -> float:
    """Trapezoidal area of the (FPR, TPR) polyline, endpoints (0,0), (1,1) added.

    Points are sorted by FPR; ties in FPR contribute their mean TPR.
    """
    fprs = np.asarray(fprs, dtype=np.float64)
    tprs = np.asarray(tprs, dtype=np.float64)
    order = np.argsort(fprs, kind="stable")
    fprs, tprs = fprs[order], tprs[order]
    xs, ys = [], []
    i = 0
    while i < fprs.size:
        j = i
        while j < fprs.size and fprs[j] == fprs[i]:
            j += 1
        xs.append(fprs[i])
        ys.append(tprs[i:j].mean())
        i = j
    xs = np.concatenate([[0.0], xs, [1.0]])
    ys = np.concatenate([[0.0], ys, [1.0]])
    return float(np.trapezoid(ys, xs))


def roc_curve(grid, estimator, truth: EdgeSet) -> RocResult:
    """Evaluate an EdgeSet-valued estimator over a descending lambda grid."""
    grid = list(grid)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    points = []
    for lam in grid:
        edges = estimator(lam)
        fp, fn, _, _ = confusion(edges, truth)
        fnr, fpr = rates(fp, fn, truth)
        points.append(RocPoint(lam=float(lam), fpr=fpr, fnr=fnr, tpr=1.0 - fnr))
    auc = auc_from_points([p.fpr for p in points], [p.tpr for p in points])
    return RocResult(points=tuple(points), auc=auc)


def compare_edgesets(a: EdgeSet, b: EdgeSet):
    """(only_a, only_b, both) cardinalities."""
    if a.p != b.p:
        raise ValueError(f"node counts differ: {a.p} vs {b.p}")
    return len(a.edges - b.edges), len(b.edges - a.edges), len(a.edges & b.edges)


def mean_se(values) -> tuple:
    """Mean and standard error of the mean."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return float(v.mean()), 0.0
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(v.size))


def roc_rows_to_csv(path, rows) -> None:
    """Rows: dicts with scenario, estimator, lambda, fpr, fnr, tpr."""
    fields = ["scenario", "estimator", "lambda", "fpr", "fnr", "tpr"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in fields})


def summary_to_json(path, summary) -> None:
    """Summary: {scenario: {estimator: {metric: {mean_pct, se_pct}}}}."""
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
