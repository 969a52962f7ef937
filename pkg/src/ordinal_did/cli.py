"""Command-line interface.

Subcommands mirror the library layers: ``fit`` (effect estimation with
optional cluster-bootstrap intervals), ``equivtest`` (the pre-trend
equivalence test on two pre-treatment periods), ``bounds`` (weak / strict
benefit-proportion bounds), and ``simulate`` (the Monte Carlo harness).

Every subcommand emits a single JSON document with ``schema_version`` 1
and the fully resolved configuration embedded, so a run can be reproduced
from its own output.  Serialization is deterministic: rerunning the same
command on the same input yields byte-identical output.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np
import pandas as pd

from . import __version__
from .bootstrap import BootstrapSpec, block_bootstrap
from .bounds import eta_bounds, tau_bounds
from .effects import estimate_effects, estimate_pipeline
from .equivalence import (default_delta, default_grid, equivalence_test,
                          pointwise_bands, t_grid)
from .errors import (ConfigError, ConvergenceError, DataError, DomainError,
                     OrdinalDidError)
from .panel import ColumnMap, load_csv
from .probit import Cutoffs, fit_joint, fit_pretreatment
from .simulate import dgp_from_dict, run_equivalence_mc, run_estimator_mc

EXIT_OK = 0
EXIT_DATA = 2
EXIT_CONVERGENCE = 3
EXIT_CONFIG = 4

SCHEMA_VERSION = 1


# ----------------------------------------------------------------------
# serialization helpers
# ----------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return None if np.isnan(f) else f
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit(document: dict, output: str | None):
    text = json.dumps(_jsonable(document), sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# shared argument handling
# ----------------------------------------------------------------------

def _add_data_args(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True, help="long-format panel CSV")
    p.add_argument("--unit", default="unit", help="unit-id column")
    p.add_argument("--time", default="period", help="period column")
    p.add_argument("--outcome", default="outcome",
                   help="ordinal outcome column")
    p.add_argument("--treat", default="treat", help="treatment column (0/1)")
    p.add_argument("--cluster", default=None,
                   help="cluster column (default: units)")
    p.add_argument("--filter", action="append", default=[],
                   metavar="COL=VAL",
                   help="keep only rows where COL equals VAL (repeatable)")
    p.add_argument("--cut", default="0,1", metavar="K1,K2",
                   help="the two fixed cutoffs (default 0,1)")


def _add_boot_args(p: argparse.ArgumentParser):
    p.add_argument("--boot", type=int, default=0, metavar="R",
                   help="cluster-bootstrap replications (0 = none)")
    p.add_argument("--alpha", type=float, action="append", default=None,
                   help="interval level(s); repeatable (default 0.05)")
    p.add_argument("--seed", type=int, default=0, help="bootstrap seed")
    p.add_argument("--workers", type=int, default=1,
                   help="bootstrap worker threads")


def _parse_pair(text: str, label: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--{label} expects two comma-separated values, "
                          f"got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"--{label}: {exc}") from exc


def _load_panel(args):
    schema = ColumnMap(unit=args.unit, period=args.time,
                       outcome=args.outcome, treat=args.treat,
                       cluster=args.cluster)
    source = args.input
    if args.filter:
        df = pd.read_csv(args.input, dtype=str, keep_default_na=False)
        for spec in args.filter:
            if "=" not in spec:
                raise ConfigError(f"--filter expects COL=VAL, got {spec!r}")
            col, val = spec.split("=", 1)
            if col not in df.columns:
                raise DataError(f"filter column {col!r} not in {args.input}")
            df = df[df[col] == val]
        source = io.StringIO(df.to_csv(index=False))
    data = load_csv(source, schema)
    k1, k2 = _parse_pair(args.cut, "cut")
    if k1 >= k2:
        raise ConfigError("--cut values must be strictly increasing")
    return data, Cutoffs.request(data.n_categories, k1, k2)


def _resolved_data_config(args, data):
    return {
        "input": args.input,
        "columns": {"unit": args.unit, "time": args.time,
                    "outcome": args.outcome, "treat": args.treat,
                    "cluster": args.cluster},
        "filter": list(args.filter),
        "fixed_cutoffs": list(_parse_pair(args.cut, "cut")),
        "n_records": data.n_records,
        "n_units": data.n_units,
        "n_categories": data.n_categories,
        "n_dropped": data.n_dropped,
        "category_labels": list(data.category_labels),
    }


def _alphas(args) -> tuple[float, ...]:
    return tuple(args.alpha) if args.alpha else (0.05,)


def _interval_doc(iv, names):
    doc = {
        "se": dict(zip(names, iv.se)),
        "intervals": {f"{a:g}": {n: [lo[i], hi[i]]
                                 for i, n in enumerate(names)}
                      for a, (lo, hi) in iv.intervals.items()},
        "n_reps": iv.n_reps,
        "n_failures": iv.n_failures,
        "unreliable": iv.unreliable,
    }
    if iv.unreliable:
        doc["warning"] = ("more than 10% of bootstrap replicates failed; "
                          "intervals may be unreliable")
    return doc


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_fit(args) -> dict:
    data, cutoffs = _load_panel(args)
    work = data
    if args.pre != 0 or args.post != 1:
        keep = (data.periods == args.pre) | (data.periods == args.post)
        work = data.filter_rows(keep).subset_pretreatment(
            (args.pre, args.post))
    fit = fit_joint(work, cutoffs)
    est = estimate_effects(fit, work.cell_counts(1, 1))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "fit",
        "config": {**_resolved_data_config(args, data),
                   "pre": args.pre, "post": args.post,
                   "boot": args.boot, "alpha": list(_alphas(args)),
                   "seed": args.seed},
        "cells": {f"{d}{t}": {"mu": fit.params(d, t).mu,
                              "sigma": fit.params(d, t).sigma}
                  for (d, t) in fit.cells},
        "counterfactual": {"mu": est.theta11.mu, "sigma": est.theta11.sigma,
                           "probs": est.counterfactual},
        "cutoffs": list(fit.cutoffs.kappa),
        "observed_treated": est.observed_treated,
        "zeta": est.zeta,
        "delta": est.delta,
    }
    if args.boot > 0:
        J = data.n_categories

        def statistic(ds):
            e = estimate_pipeline(ds, cutoffs, pre_period=args.pre,
                                  post_period=args.post)
            return np.concatenate([e.zeta, e.delta])

        iv = block_bootstrap(data, statistic, BootstrapSpec(
            n_reps=args.boot, seed=args.seed, alpha_levels=_alphas(args),
            workers=args.workers))
        names = [f"zeta_{j}" for j in range(J)] + \
                [f"delta_{j}" for j in range(1, J)]
        doc["bootstrap"] = _interval_doc(iv, names)
    return doc


def _cmd_equivtest(args) -> dict:
    data, cutoffs = _load_panel(args)
    p0, p1 = (int(v) for v in _parse_pair(args.periods, "periods"))
    pre = data.subset_pretreatment((p0, p1))
    fit = fit_pretreatment(pre, cutoffs)

    if args.grid:
        parts = args.grid.split(":")
        if len(parts) != 3:
            raise ConfigError("--grid expects START:STOP:STEP")
        grid = default_grid(float(parts[0]), float(parts[1]),
                            float(parts[2]))
    else:
        grid = default_grid()

    res = t_grid(fit, grid)
    n = pre.n_records
    omega = fit.omega_blockdiag(n)
    res = pointwise_bands(res, omega, n, args.alpha, fit=fit)

    if args.delta == "auto":
        treated_units = np.unique(pre.unit_ids[pre.treated == 1]).size
        control_units = pre.n_units - treated_units
        delta = default_delta(treated_units, control_units)
        delta_source = "auto"
    else:
        try:
            delta = float(args.delta)
        except ValueError as exc:
            raise ConfigError(f"--delta must be a number or 'auto': "
                              f"{args.delta!r}") from exc
        delta_source = "user"
    res = equivalence_test(res, delta)

    if args.plot_csv:
        band = pd.DataFrame({"v": res.grid, "t_hat": res.t_hat,
                             "lower": res.lower, "upper": res.upper})
        band.to_csv(args.plot_csv, index=False, float_format="%.10g")

    return {
        "schema_version": SCHEMA_VERSION,
        "command": "equivtest",
        "config": {**_resolved_data_config(args, data),
                   "periods": [p0, p1], "alpha": args.alpha,
                   "delta": delta, "delta_source": delta_source,
                   "grid": [float(res.grid[0]), float(res.grid[-1]),
                            len(res.grid)],
                   "plot_csv": args.plot_csv},
        "cells": {f"{d}{t}": {"mu": fit.params(d, t).mu,
                              "sigma": fit.params(d, t).sigma}
                  for (d, t) in fit.cells},
        "t_max": res.t_max,
        "u_max": res.u_max,
        "l_min": res.l_min,
        "reject_nonequivalence": res.reject,
        "p_value": res.p_value,
    }


def _cmd_bounds(args) -> dict:
    data, cutoffs = _load_panel(args)
    est = estimate_pipeline(data, cutoffs, pre_period=args.pre,
                            post_period=args.post)
    eta = eta_bounds(est.counterfactual, delta_hat=est.delta)
    tau = tau_bounds(est.counterfactual, delta_hat=est.delta)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "bounds",
        "config": {**_resolved_data_config(args, data),
                   "pre": args.pre, "post": args.post,
                   "boot": args.boot, "alpha": list(_alphas(args)),
                   "seed": args.seed},
        "delta": est.delta,
        "eta": {"lower": eta.lower, "upper": eta.upper,
                "clamped": eta.clamped},
        "tau": {"lower": tau.lower, "upper": tau.upper,
                "clamped": tau.clamped},
    }
    if args.boot > 0:
        def statistic(ds):
            e = estimate_pipeline(ds, cutoffs, pre_period=args.pre,
                                  post_period=args.post)
            b_eta = eta_bounds(e.counterfactual, delta_hat=e.delta)
            b_tau = tau_bounds(e.counterfactual, delta_hat=e.delta)
            return np.array([b_eta.lower, b_eta.upper,
                             b_tau.lower, b_tau.upper])

        iv = block_bootstrap(data, statistic, BootstrapSpec(
            n_reps=args.boot, seed=args.seed, alpha_levels=_alphas(args),
            workers=args.workers))
        doc["bootstrap"] = _interval_doc(
            iv, ["eta_lower", "eta_upper", "tau_lower", "tau_upper"])
    return doc


def _cmd_simulate(args) -> dict:
    with open(args.config) as fh:
        cfg = json.load(fh)
    if args.seed is not None:
        cfg["seed"] = args.seed
    spec = dgp_from_dict(cfg)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "mode": args.mode,
        "config": {**cfg, "reps": args.reps, "boot": args.boot,
                   "alpha": args.alpha, "seed": spec.seed,
                   "deltas": args.deltas},
    }
    if args.mode == "estimator":
        boot = (BootstrapSpec(n_reps=args.boot, workers=args.workers)
                if args.boot > 0 else None)
        rep = run_estimator_mc(spec, args.reps, alpha=args.alpha,
                               bootstrap=boot)
        doc["report"] = {
            "abs_bias": rep.abs_bias, "rmse": rep.rmse,
            "coverage": rep.coverage,
            "per_estimand": rep.per_estimand,
            "n_reps": rep.n_reps, "n_failures": rep.n_failures,
        }
    else:
        if not args.deltas:
            raise ConfigError("--deltas is required in equivalence mode")
        deltas = [float(d) for d in args.deltas.split(",")]
        doc["report"] = run_equivalence_mc(spec, args.reps, deltas,
                                           alpha=args.alpha)
    return doc


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordinal-did",
        description="Difference-in-differences for ordinal outcomes via a "
                    "latent location-scale ordered-probit model.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="estimate distributional and "
                                       "cumulative treatment effects")
    _add_data_args(p_fit)
    p_fit.add_argument("--pre", type=int, default=0, help="pre period")
    p_fit.add_argument("--post", type=int, default=1, help="post period")
    _add_boot_args(p_fit)
    p_fit.add_argument("--output", default=None, help="write JSON here "
                                                      "(default stdout)")
    p_fit.set_defaults(func=_cmd_fit)

    p_eq = sub.add_parser("equivtest", help="equivalence-based pre-trend "
                                            "test on two pre-periods")
    _add_data_args(p_eq)
    p_eq.add_argument("--periods", default="0,1", metavar="T0,T1",
                      help="the two pre-treatment periods (default 0,1)")
    p_eq.add_argument("--alpha", type=float, default=0.05,
                      help="test level (default 0.05)")
    p_eq.add_argument("--delta", default="auto",
                      help="equivalence threshold, or 'auto' for the "
                           "sample-size-adaptive default")
    p_eq.add_argument("--grid", default=None, metavar="START:STOP:STEP",
                      help="quantile grid (default 0.001:0.999:0.01)")
    p_eq.add_argument("--plot-csv", default=None,
                      help="write the (v, t_hat, lower, upper) band here")
    p_eq.add_argument("--output", default=None)
    p_eq.set_defaults(func=_cmd_equivtest)

    p_b = sub.add_parser("bounds", help="bounds on the weak / strict "
                                        "benefit proportions")
    _add_data_args(p_b)
    p_b.add_argument("--pre", type=int, default=0)
    p_b.add_argument("--post", type=int, default=1)
    _add_boot_args(p_b)
    p_b.add_argument("--output", default=None)
    p_b.set_defaults(func=_cmd_bounds)

    p_s = sub.add_parser("simulate", help="Monte Carlo studies")
    p_s.add_argument("--config", required=True,
                     help="JSON file with DGP parameters")
    p_s.add_argument("--mode", choices=["estimator", "equivalence"],
                     default="estimator")
    p_s.add_argument("--reps", type=int, default=200)
    p_s.add_argument("--boot", type=int, default=0,
                     help="bootstrap reps per MC draw (estimator mode)")
    p_s.add_argument("--alpha", type=float, default=0.05)
    p_s.add_argument("--deltas", default=None,
                     help="comma-separated thresholds (equivalence mode)")
    p_s.add_argument("--seed", type=int, default=None,
                     help="override the config seed")
    p_s.add_argument("--workers", type=int, default=1)
    p_s.add_argument("--output", default=None)
    p_s.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the config code
        if exc.code not in (0, None):
            return EXIT_CONFIG
        return 0
    try:
        document = args.func(args)
        _emit(document, args.output)
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (OrdinalDidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
