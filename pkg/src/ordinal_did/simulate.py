"""Data-generating processes and the Monte Carlo harness.

Latent utilities are drawn from per-cell normals and thresholded by the
cutoffs.  Two study designs are covered: estimator performance
(bias / RMSE / coverage of the cumulative effects) and the equivalence
test (type I error and power across thresholds), plus the dichotomization
counterexample showing that binary-outcome parallel trends depend on the
chosen threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bootstrap import BootstrapSpec, block_bootstrap
from .effects import counterfactual_params, estimate_pipeline
from .equivalence import (QuantileShift, default_grid, equivalence_test,
                          pointwise_bands, qtilde, t_grid)
from .errors import DomainError
from .panel import PanelDataset
from .probit import CellParams, Cutoffs, cell_probs, fit_pretreatment

__all__ = ["DgpSpec", "McReport", "simulate_cell", "simulate_panel",
           "simulate_pretreatment_panel", "true_delta", "true_tmax",
           "run_estimator_mc", "run_equivalence_mc", "pt_gap",
           "dgp_from_dict"]

DEFAULT_CUTOFFS = {
    3: (0.0, 1.0),
    5: (-0.5, 0.0, 0.5, 1.0),
    7: (-0.5, -0.2, 0.1, 0.4, 0.7, 1.0),
}


@dataclass(frozen=True)
class DgpSpec:
    """One simulation design.

    ``theta11`` left as None derives the counterfactual via the
    identification transform (the trend assumption then holds exactly by
    construction); an explicit value may violate it on purpose.
    ``treated_params`` generates the treated arm's post-period outcome.
    """
    theta00: CellParams
    theta01: CellParams
    theta10: CellParams
    treated_params: CellParams
    cutoffs: Cutoffs
    theta11: CellParams | None = None
    n_per_cell: int = 1000
    seed: int = 0
    latent_corr: float = 0.0   # within-unit copula correlation across periods

    def __post_init__(self):
        if not -1.0 < self.latent_corr < 1.0:
            raise DomainError("latent_corr must lie in (-1, 1)")
        if not self.cutoffs.is_complete:
            raise DomainError("simulation cutoffs must be fully specified")

    def resolved_theta11(self) -> CellParams:
        if self.theta11 is not None:
            return self.theta11
        cf = counterfactual_params(self.theta00, self.theta01, self.theta10)
        return cf.as_cell()


@dataclass(frozen=True)
class McReport:
    abs_bias: float
    rmse: float
    coverage: float | None
    per_estimand: dict
    n_reps: int
    n_failures: int
    config: dict = field(default_factory=dict)


def simulate_cell(params: CellParams, cutoffs: Cutoffs, n: int,
                  rng) -> np.ndarray:
    """Outcome codes from latent normal draws thresholded by the cutoffs."""
    latent = params.mu + params.sigma * rng.standard_normal(n)
    return np.searchsorted(np.asarray(cutoffs.kappa), latent, side="right")


def _categorize(latent, cutoffs: Cutoffs) -> np.ndarray:
    return np.searchsorted(np.asarray(cutoffs.kappa), latent, side="right")


def _two_period_group(theta_t0, theta_t1, cutoffs, n, corr, rng):
    z0 = rng.standard_normal(n)
    if corr != 0.0:
        z1 = corr * z0 + np.sqrt(1 - corr ** 2) * rng.standard_normal(n)
    else:
        z1 = rng.standard_normal(n)
    y0 = _categorize(theta_t0.mu + theta_t0.sigma * z0, cutoffs)
    y1 = _categorize(theta_t1.mu + theta_t1.sigma * z1, cutoffs)
    return y0, y1


def _assemble_panel(y_ctrl, y_trt, J) -> PanelDataset:
    n0, n1 = len(y_ctrl[0]), len(y_trt[0])
    units = np.concatenate([np.arange(n0), n0 + np.arange(n1),
                            np.arange(n0), n0 + np.arange(n1)])
    periods = np.concatenate([np.zeros(n0 + n1, dtype=int),
                              np.ones(n0 + n1, dtype=int)])
    outcomes = np.concatenate([y_ctrl[0], y_trt[0], y_ctrl[1], y_trt[1]])
    treated = np.concatenate([np.zeros(n0, dtype=int),
                              np.ones(n1, dtype=int)] * 2)
    return PanelDataset(unit_ids=units, periods=periods, outcomes=outcomes,
                        treated=treated, cluster_ids=units,
                        n_categories=J, validate=False)


def simulate_panel(spec: DgpSpec, rng=None) -> PanelDataset:
    """Observed two-period panel: control group follows (theta00, theta01),
    treated group follows (theta10, treated_params).  Each unit is its own
    cluster.  Deterministic for a fixed spec seed."""
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.n_per_cell
    y_ctrl = _two_period_group(spec.theta00, spec.theta01, spec.cutoffs, n,
                               spec.latent_corr, rng)
    y_trt = _two_period_group(spec.theta10, spec.treated_params,
                              spec.cutoffs, n, spec.latent_corr, rng)
    return _assemble_panel(y_ctrl, y_trt, spec.cutoffs.n_categories)


def simulate_pretreatment_panel(spec: DgpSpec, rng=None) -> PanelDataset:
    """Two pre-treatment periods: nobody is treated yet, so the treated
    group's second period follows theta11 (explicit or derived)."""
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.n_per_cell
    y_ctrl = _two_period_group(spec.theta00, spec.theta01, spec.cutoffs, n,
                               spec.latent_corr, rng)
    y_trt = _two_period_group(spec.theta10, spec.resolved_theta11(),
                              spec.cutoffs, n, spec.latent_corr, rng)
    return _assemble_panel(y_ctrl, y_trt, spec.cutoffs.n_categories)


def true_delta(spec: DgpSpec) -> np.ndarray:
    """Analytic cumulative effects: treated arm vs the derived
    counterfactual, for j = 1..J-1."""
    p1 = cell_probs(spec.treated_params, spec.cutoffs)
    p0 = cell_probs(spec.resolved_theta11(), spec.cutoffs)
    zeta = p1 - p0
    return np.cumsum(zeta[::-1])[::-1][1:]


def true_tmax(spec: DgpSpec, n_grid: int = 200001) -> float:
    """Dense-grid oracle for the true maximum deviation of the two
    quantile-shift functions under the spec's latent parameters."""
    v = np.linspace(1e-7, 1 - 1e-7, n_grid)
    q1 = qtilde(QuantileShift(1, spec.theta10, spec.resolved_theta11()), v)
    q0 = qtilde(QuantileShift(0, spec.theta00, spec.theta01), v)
    return float(np.max(np.abs(q1 - q0)))


def run_estimator_mc(spec: DgpSpec, n_reps: int, *, alpha: float = 0.10,
                     bootstrap: BootstrapSpec | None = None,
                     fit_cutoffs: Cutoffs | None = None) -> McReport:
    """Bias / RMSE / coverage of the cumulative-effect estimates over
    repeated draws from the DGP.

    Metrics average the loss over the J-1 estimands.  Coverage (against
    the analytic truth) is reported only when a bootstrap spec is given;
    ``alpha`` is the two-sided level of the interval used for coverage.
    """
    if n_reps < 2:
        raise DomainError("need at least 2 Monte Carlo repetitions")
    J = spec.cutoffs.n_categories
    truth = true_delta(spec)
    if fit_cutoffs is None:
        fit_cutoffs = Cutoffs.request(J)

    def statistic(ds):
        return estimate_pipeline(ds, fit_cutoffs).delta

    estimates = np.full((n_reps, J - 1), np.nan)
    covered = np.zeros((n_reps, J - 1), dtype=bool)
    failures = 0
    for s in range(n_reps):
        rng = np.random.default_rng([spec.seed, s])
        data = simulate_panel(spec, rng)
        try:
            if bootstrap is not None:
                bspec = BootstrapSpec(
                    n_reps=bootstrap.n_reps,
                    seed=int(np.random.default_rng(
                        [spec.seed, s, 1]).integers(2 ** 62)),
                    alpha_levels=(alpha,), workers=bootstrap.workers)
                iv = block_bootstrap(data, statistic, bspec)
                estimates[s] = iv.point
                lo, hi = iv.intervals[alpha]
                covered[s] = (lo <= truth) & (truth <= hi)
            else:
                estimates[s] = statistic(data)
        except Exception:
            failures += 1
    ok = ~np.isnan(estimates).any(axis=1)
    est = estimates[ok]
    bias_j = np.abs(est.mean(axis=0) - truth)
    rmse_j = np.sqrt(((est - truth) ** 2).mean(axis=0))
    per = {"abs_bias": bias_j, "rmse": rmse_j, "truth": truth}
    coverage = None
    if bootstrap is not None:
        cov_j = covered[ok].mean(axis=0)
        per["coverage"] = cov_j
        coverage = float(cov_j.mean())
    return McReport(abs_bias=float(bias_j.mean()),
                    rmse=float(rmse_j.mean()), coverage=coverage,
                    per_estimand=per, n_reps=int(ok.sum()),
                    n_failures=failures,
                    config={"n_per_cell": spec.n_per_cell, "J": J,
                            "seed": spec.seed, "alpha": alpha,
                            "cutoffs": list(spec.cutoffs.kappa)})


def run_equivalence_mc(spec: DgpSpec, n_reps: int, deltas, *,
                       alpha: float = 0.05,
                       fit_cutoffs: Cutoffs | None = None,
                       grid=None) -> dict:
    """Rejection rate of the equivalence test per threshold delta.

    The panel holds two pre-treatment periods; the treated group's second
    period follows the spec's (possibly assumption-violating) theta11.
    Returns {"tmax": oracle value, "rejection_rates": {delta: rate}, ...}.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas):
        raise DomainError("equivalence thresholds must be positive")
    J = spec.cutoffs.n_categories
    if fit_cutoffs is None:
        fit_cutoffs = Cutoffs.request(J)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    rejections = {d: 0 for d in deltas}
    failures = 0
    for s in range(n_reps):
        rng = np.random.default_rng([spec.seed, s])
        data = simulate_pretreatment_panel(spec, rng)
        try:
            fit = fit_pretreatment(data, fit_cutoffs)
            res = t_grid(fit, grid)
            n_total = data.n_records
            omega = fit.omega_blockdiag(n_total)
            res = pointwise_bands(res, omega, n_total, alpha, fit=fit)
            for d in deltas:
                if equivalence_test(res, d).reject:
                    rejections[d] += 1
        except Exception:
            failures += 1
    n_ok = n_reps - failures
    return {
        "tmax": true_tmax(spec),
        "rejection_rates": {d: rejections[d] / max(n_ok, 1) for d in deltas},
        "n_reps": n_ok,
        "n_failures": failures,
        "alpha": alpha,
        "config": {"n_per_cell": spec.n_per_cell, "J": J, "seed": spec.seed},
    }


def pt_gap(pi_treated_t0, pi_treated_t1, pi_control_t0, pi_control_t1,
           threshold: int) -> float:
    """Parallel-trends gap of the outcome dichotomized at ``threshold``.

    Each argument is the control-potential-outcome distribution of one
    group-period; the gap is the treated-minus-control difference of the
    over-time changes in P(Y >= threshold).  A nonzero gap at one
    threshold can coexist with a zero gap at another, which is the
    dichotomization pitfall.
    """
    vecs = [np.asarray(p, dtype=float) for p in
            (pi_treated_t0, pi_treated_t1, pi_control_t0, pi_control_t1)]
    J = len(vecs[0])
    for p in vecs:
        if len(p) != J or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
            raise DomainError("each argument must be a probability vector")
    if not 1 <= threshold <= J - 1:
        raise DomainError(f"threshold must be in 1..{J - 1}")
    t10, t11, t00, t01 = [p[threshold:].sum() for p in vecs]
    return float((t11 - t10) - (t01 - t00))


def dgp_from_dict(cfg: dict) -> DgpSpec:
    """Build a DgpSpec from plain config keys (the simulate CLI format)."""
    def cell(key):
        if key not in cfg or cfg[key] is None:
            return None
        mu, sigma = cfg[key]
        return CellParams(mu=float(mu), sigma=float(sigma))

    J = int(cfg.get("n_categories", 3))
    kappa = cfg.get("cutoffs")
    if kappa is None:
        if J not in DEFAULT_CUTOFFS:
            raise DomainError(f"no default cutoffs for J={J}; supply them")
        kappa = DEFAULT_CUTOFFS[J]
    cutoffs = Cutoffs(kappa=tuple(float(k) for k in kappa))
    if cutoffs.n_categories != J:
        raise DomainError("cutoffs length must be J-1")
    required = ["theta00", "theta01", "theta10", "treated_params"]
    for key in required:
        if key not in cfg:
            raise DomainError(f"missing DGP key {key!r}")
    return DgpSpec(
        theta00=cell("theta00"), theta01=cell("theta01"),
        theta10=cell("theta10"), treated_params=cell("treated_params"),
        theta11=cell("theta11"), cutoffs=cutoffs,
        n_per_cell=int(cfg.get("n_per_cell", 1000)),
        seed=int(cfg.get("seed", 0)),
        latent_corr=float(cfg.get("latent_corr", 0.0)))
