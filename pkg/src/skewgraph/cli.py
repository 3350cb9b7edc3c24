"""Command-line surface.

Commands: simulate, campaign, fit, stars, roc, normality, export.
Every command is deterministic given --seed; without it a seed is drawn
from entropy and printed. A JSON config file can supply any flag value;
explicit flags win.
"""

import argparse
import csv
import json
import secrets
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .evaluate import mean_se, roc_curve, roc_rows_to_csv
from .panel import ReturnsPanel, ingest_prices, normality_tests
from .pipeline import (
    ESTIMATORS,
    SHRINKAGES,
    GraphPipeline,
    campaign,
    default_stars_grid,
    export_graph,
    run_pipeline,
    run_trial,
    scenario_label,
    _trial_seed,
)
from .precision import EdgeSet
from .rankcorr import DataMatrix
from .selection import StarsConfig, lambda_grid_around, stars_select
from .simulate import SimulationConfig, generate_scenario, truth_to_json


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    seed = secrets.randbits(32)
    print(f"seed drawn from entropy: {seed}")
    return seed


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise SystemExit("config file must hold a JSON object of flag values")
    return cfg


def _merge_config(args, parser_defaults):
    """Fill argparse values left at None from the config file."""
    cfg = _load_config(getattr(args, "config", None))
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None and attr in parser_defaults:
            setattr(args, attr, value)
    for attr, default in parser_defaults.items():
        if getattr(args, attr, None) is None:
            setattr(args, attr, default)
    return args


def _load_data(args) -> DataMatrix:
    if getattr(args, "prices", None):
        panel = ingest_prices(args.prices)
        return panel.log_returns
    if getattr(args, "data", None):
        frame = pd.read_csv(args.data)
        return DataMatrix(frame.to_numpy(dtype=float), labels=tuple(frame.columns))
    raise SystemExit("provide --data or --prices")


def _simulation_config(args, seed) -> SimulationConfig:
    return SimulationConfig(
        p=args.p,
        n=args.n,
        sparsity=args.sparsity,
        contamination_r=args.r,
        power_gamma=args.gamma,
        contamination_sd=args.sd,
        off_diag_value=args.off_diag,
        seed=seed,
    )


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    print(f"wrote {path}")


# ---------------------------------------------------------------- commands


def cmd_simulate(args):
    seed = _resolve_seed(args)
    cfg = _simulation_config(args, seed)
    truth, data = generate_scenario(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(data.values, columns=list(data.labels))
    frame.to_csv(out / "data.csv", index=False)
    _write(out / "truth.json", truth_to_json(truth, cfg))
    print(f"wrote {out/'data.csv'} ({cfg.n} x {cfg.p}, {len(truth.edges)} true edges)")


def _parse_scenarios(text):
    pairs = []
    for chunk in text.split(","):
        r, gamma = chunk.split(":")
        pairs.append((float(r), float(gamma)))
    return pairs


def cmd_campaign(args):
    seed = _resolve_seed(args)
    scenarios = [
        SimulationConfig(
            p=args.p,
            n=args.n,
            sparsity=args.sparsity,
            contamination_r=r,
            power_gamma=g,
            contamination_sd=args.sd,
            off_diag_value=args.off_diag,
        )
        for r, g in _parse_scenarios(args.scenarios)
    ]
    estimators = args.estimator.split(",")
    summary, rows = campaign(
        scenarios,
        estimators,
        trials=args.trials,
        seed=seed,
        selection_mode=args.selection_mode,
        alpha_method=args.alpha_method,
        jobs=args.jobs,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True))
    with open(out / "rows.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["scenario", "estimator", "trial", "auc", "fpr_at_center", "fnr_at_center",
             "lambda_center", "error"]
        )
        for r in rows:
            writer.writerow(
                [r.scenario, r.estimator, r.trial, repr(r.auc), repr(r.fpr_at_center),
                 repr(r.fnr_at_center), repr(r.lambda_center), r.error]
            )
    print(f"wrote {out/'rows.csv'}")
    print(render_summary_table(summary))


def render_summary_table(summary) -> str:
    """Percentages with one decimal, one row per scenario and estimator."""
    lines = [f"{'scenario':<22} {'estimator':<18} {'AUC':>6} {'FPR':>6} {'FNR':>6}"]
    for scenario in sorted(summary):
        for estimator in sorted(summary[scenario]):
            cell = summary[scenario][estimator]
            def pct(key):
                return f"{cell[key]['mean_pct']:.1f}" if key in cell else "-"
            lines.append(
                f"{scenario:<22} {estimator:<18} {pct('auc'):>6} {pct('fpr'):>6} {pct('fnr'):>6}"
            )
    return "\n".join(lines)


def cmd_fit(args):
    seed = _resolve_seed(args)
    data = _load_data(args)
    stars_cfg = None
    if args.grid:
        grid = _parse_grid(args.grid)
        stars_cfg = StarsConfig(lambda_grid=grid, seed=seed)
    result = run_pipeline(
        data,
        estimator=args.estimator,
        shrinkage=args.shrinkage,
        selection="fixed" if args.lam is not None else "stars",
        lam=args.lam,
        stars_cfg=stars_cfg,
        alpha_method=args.alpha_method,
        seed=seed,
    )
    payload = {
        "labels": list(data.labels),
        "estimator": args.estimator,
        "shrinkage": args.shrinkage,
        "lambda": result.lambda_used,
        "seed": seed,
        "correlation": result.correlation.matrix.tolist(),
        "correlation_flags": {
            "statistic": result.correlation.statistic,
            "transformed": result.correlation.transformed,
            "skew_corrected": result.correlation.skew_corrected,
            "psd_repaired": result.correlation.psd_repaired,
        },
        "omega": result.precision.omega.tolist(),
        "edges": sorted([list(e) for e in result.edges.edges]),
        "alphas": None if result.alphas is None else result.alphas.alpha.tolist(),
        "alpha_method": None if result.alphas is None else result.alphas.method,
        "stars": None
        if result.stars is None
        else {
            "lambda_star": result.stars.lambda_star,
            "threshold_met": result.stars.threshold_met,
            "instability_curve": [list(t) for t in result.stars.instability_curve],
        },
    }
    _write(args.out, json.dumps(payload, indent=2, sort_keys=True))
    print(f"estimator={args.estimator} lambda={result.lambda_used:.6g} "
          f"edges={len(result.edges)}")


def _parse_grid(text):
    """'hi:lo:count' -> descending tuple."""
    hi, lo, count = text.split(":")
    pts = np.linspace(float(hi), float(lo), int(count))
    pts = np.sort(pts)[::-1]
    return tuple(float(x) for x in pts)


def cmd_stars(args):
    seed = _resolve_seed(args)
    data = _load_data(args)
    pipe = GraphPipeline(
        estimator=args.estimator, shrinkage=args.shrinkage,
        alpha_method=args.alpha_method,
    )
    if args.grid:
        grid = _parse_grid(args.grid)
    else:
        corr, _ = pipe.correlation(data)
        grid = default_stars_grid(corr)
    cfg = StarsConfig(
        lambda_grid=grid,
        num_subsamples=args.subsamples,
        beta_threshold=args.beta,
        seed=seed,
    )
    result = stars_select(data, pipe, cfg)
    rows = [
        {"lambda": lam, "instability": raw, "monotonized": mono}
        for lam, raw, mono in result.instability_curve
    ]
    payload = {
        "lambda_star": result.lambda_star,
        "threshold_met": result.threshold_met,
        "curve": rows,
        "seed": seed,
    }
    _write(args.out, json.dumps(payload, indent=2, sort_keys=True))
    print(f"lambda_star={result.lambda_star:.6g} threshold_met={result.threshold_met}")


def cmd_roc(args):
    seed = _resolve_seed(args)
    estimators = args.estimator.split(",")
    rows_out = []
    aucs = {e: [] for e in estimators}
    for t in range(args.trials):
        cfg = _simulation_config(args, _trial_seed(seed, 0, t))
        label = scenario_label(cfg)
        truth, data = generate_scenario(cfg)
        outcomes = run_trial(
            cfg,
            estimators,
            alpha_method=args.alpha_method,
            stars_seed=_trial_seed(seed, 0, 10**6 + t),
            scenario=label,
            trial=t,
        )
        for o in outcomes:
            if not o.error:
                aucs[o.estimator].append(o.auc)
        # per-lambda curve rows for plotting
        pipe_grid = None
        for estimator in estimators:
            pipe = GraphPipeline(estimator=estimator, alpha_method=args.alpha_method)
            corr, _ = pipe.correlation(data)
            if pipe_grid is None:
                center = max(
                    [o.lambda_center for o in outcomes if not o.error] or [0.3]
                )
                pipe_grid = lambda_grid_around(max(center, 0.101), 0.1, 30)
            edge_sets = pipe.corr_edge_path(corr, pipe_grid)
            by_lam = dict(zip(pipe_grid, edge_sets))
            roc = roc_curve(pipe_grid, lambda lam: by_lam[lam], truth.edges)
            for pt in roc.points:
                rows_out.append(
                    {"scenario": label, "estimator": estimator, "lambda": repr(pt.lam),
                     "fpr": repr(pt.fpr), "fnr": repr(pt.fnr), "tpr": repr(pt.tpr)}
                )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    roc_rows_to_csv(args.out, rows_out)
    print(f"wrote {args.out}")
    for e in estimators:
        if aucs[e]:
            m, s = mean_se(aucs[e])
            print(f"{e}: mean AUC {100*m:.1f}% (se {100*s:.1f}) over {len(aucs[e])} trials")


def cmd_normality(args):
    seed = _resolve_seed(args)
    if args.prices:
        panel = ingest_prices(args.prices)
    else:
        data = _load_data(args)
        panel = ReturnsPanel(
            dates=tuple(str(i) for i in range(data.n)),
            tickers=data.labels,
            log_returns=data,
            dropped=(),
        )
    levels = tuple(float(x) for x in args.levels.split(","))
    report = normality_tests(panel, levels=levels, seed=seed)
    payload = {
        "tickers": list(report.tickers),
        "p_values": {k: v.tolist() for k, v in report.p_values.items()},
        "statistics": {k: v.tolist() for k, v in report.statistics.items()},
        "rejections": {str(k): v for k, v in report.rejections.items()},
        "skipped": [list(s) for s in report.skipped],
        "seed": seed,
    }
    _write(args.out, json.dumps(payload, indent=2, sort_keys=True))
    for level, counts in sorted(report.rejections.items()):
        desc = ", ".join(f"{t}: {c}/{len(report.tickers)}" for t, c in sorted(counts.items()))
        print(f"rejections at {level:g}: {desc}")


def cmd_export(args):
    with open(args.fit) as fh:
        payload = json.load(fh)
    labels = payload["labels"]
    p = len(labels)
    edges = EdgeSet(frozenset(tuple(e) for e in payload["edges"]), p)
    omega = np.asarray(payload["omega"], dtype=float)
    sectors = None
    if args.sectors:
        table = pd.read_csv(args.sectors)
        mapping = dict(zip(table.iloc[:, 0], table.iloc[:, 1]))
        sectors = [mapping.get(lab, "") for lab in labels]
    text = export_graph(edges, omega, labels, fmt=args.format, sectors=sectors)
    _write(args.out, text)


# ---------------------------------------------------------------- parser


def _add_common(sp, *, sim=False, data=False):
    sp.add_argument("--seed", type=int, default=None, help="RNG seed (default: entropy)")
    sp.add_argument("--config", default=None, help="JSON file of default flag values")
    if sim:
        sp.add_argument("--p", type=int, default=None)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--sparsity", type=float, default=None)
        sp.add_argument("--r", type=float, default=None, help="contamination level")
        sp.add_argument("--gamma", type=float, default=None, help="power transform exponent")
        sp.add_argument("--sd", type=float, default=None, help="contamination sd")
        sp.add_argument("--off-diag", type=float, default=None, dest="off_diag")
    if data:
        sp.add_argument("--data", default=None, help="numeric CSV with header labels")
        sp.add_argument("--prices", default=None, help="price CSV (date + tickers)")


_SIM_DEFAULTS = dict(p=100, n=200, sparsity=0.02, r=0.05, gamma=1.5, sd=5.0, off_diag=0.3)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="skewgraph",
        description="Skew-robust rank correlation and sparse graph estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="generate one synthetic dataset + ground truth")
    _add_common(sp, sim=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_simulate, defaults={**_SIM_DEFAULTS, "out": "simulated"})

    sp = sub.add_parser("campaign", help="scenario grid x estimators over trials")
    _add_common(sp, sim=True)
    sp.add_argument("--scenarios", default=None, help="comma list of r:gamma pairs")
    sp.add_argument("--estimator", default=None, help="comma list of estimators")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--selection-mode", default=None, dest="selection_mode",
                    choices=["per-trial", "global"])
    sp.add_argument("--alpha-method", default=None, dest="alpha_method")
    sp.set_defaults(
        func=cmd_campaign,
        defaults={
            **_SIM_DEFAULTS,
            "scenarios": "0.05:1.5,0.05:2.5,0.05:3,0.1:1.5,0.1:2.5,0.1:3,0.2:1.5,0.2:2.5,0.2:3",
            "estimator": "skeptic_rho,skeptic_tau,skew_skeptic_rho,skew_skeptic_tau,skew_keptic,pearson",
            "trials": 50,
            "jobs": 1,
            "selection_mode": "per-trial",
            "alpha_method": None,
            "out": "campaign_out",
        },
    )
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("fit", help="estimate a graph from data")
    _add_common(sp, data=True)
    sp.add_argument("--estimator", default=None, choices=list(ESTIMATORS))
    sp.add_argument("--shrinkage", default=None, choices=list(SHRINKAGES))
    sp.add_argument("--lambda", type=float, default=None, dest="lam",
                    help="fixed penalty; omit to select by stability")
    sp.add_argument("--grid", default=None, help="stability grid as hi:lo:count")
    sp.add_argument("--alpha-method", default=None, dest="alpha_method")
    sp.add_argument("--out", default=None)
    sp.set_defaults(
        func=cmd_fit,
        defaults={"estimator": "skeptic_tau", "shrinkage": "glasso", "lam": None,
                  "grid": None, "alpha_method": None, "out": "fit.json"},
    )

    sp = sub.add_parser("stars", help="stability selection of the penalty")
    _add_common(sp, data=True)
    sp.add_argument("--estimator", default=None, choices=list(ESTIMATORS))
    sp.add_argument("--shrinkage", default=None, choices=list(SHRINKAGES))
    sp.add_argument("--grid", default=None, help="hi:lo:count")
    sp.add_argument("--subsamples", type=int, default=None)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--alpha-method", default=None, dest="alpha_method")
    sp.add_argument("--out", default=None)
    sp.set_defaults(
        func=cmd_stars,
        defaults={"estimator": "skeptic_tau", "shrinkage": "glasso", "grid": None,
                  "subsamples": 20, "beta": 0.05, "alpha_method": None,
                  "out": "stars.json"},
    )

    sp = sub.add_parser("roc", help="ROC curves on a simulated scenario")
    _add_common(sp, sim=True)
    sp.add_argument("--estimator", default=None, help="comma list")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--alpha-method", default=None, dest="alpha_method")
    sp.add_argument("--out", default=None)
    sp.set_defaults(
        func=cmd_roc,
        defaults={**_SIM_DEFAULTS, "estimator": "skeptic_tau,pearson", "trials": 3,
                  "alpha_method": None, "out": "roc.csv"},
    )

    sp = sub.add_parser("normality", help="marginal normality tests")
    _add_common(sp, data=True)
    sp.add_argument("--levels", default=None, help="comma list of significance levels")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_normality,
                    defaults={"levels": "0.01,0.05", "out": "normality.json"})

    sp = sub.add_parser("export", help="export a fitted graph as JSON or DOT")
    sp.add_argument("--fit", required=True, help="artifact written by `fit`")
    sp.add_argument("--format", default=None, choices=["json", "dot"])
    sp.add_argument("--sectors", default=None, help="CSV mapping ticker -> sector")
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_export, defaults={"format": "json", "out": "graph.json"})

    args = parser.parse_args(argv)
    args = _merge_config(args, args.defaults)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
