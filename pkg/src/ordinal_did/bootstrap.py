"""Cluster (block) bootstrap for any dataset -> vector pipeline statistic.

Whole clusters are resampled with replacement to the original cluster
count; every record of a drawn cluster enters the replicate, duplicated
per draw.  Replicate r's random stream depends only on (seed, r), so
results are identical regardless of scheduling or worker count.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConvergenceError, DataError, DomainError,
                     EmptyCellError, NonIdentifiedError, OrdinalDidError)
from .panel import PanelDataset

__all__ = ["BootstrapSpec", "IntervalSet", "block_bootstrap"]

# A replicate can fail for data reasons (empty or degenerate cells) or
# numeric ones (optimizer stalls, singular covariances, arithmetic in a
# user-supplied statistic); any of these should be contained and counted
# rather than abort the remaining replicates.
_STATISTIC_ERRORS = (EmptyCellError, NonIdentifiedError, ConvergenceError,
                     DomainError, ValueError, ArithmeticError,
                     np.linalg.LinAlgError)


@dataclass(frozen=True)
class BootstrapSpec:
    n_reps: int = 2000
    seed: int = 0
    alpha_levels: tuple[float, ...] = (0.05, 0.10)
    workers: int = 1

    def __post_init__(self):
        if self.n_reps < 1:
            raise DomainError("n_reps must be >= 1")
        if any(not 0 < a < 1 for a in self.alpha_levels):
            raise DomainError("alpha levels must lie in (0, 1)")


@dataclass(frozen=True)
class IntervalSet:
    """Point estimates with percentile intervals and bootstrap SEs."""
    point: np.ndarray
    se: np.ndarray
    intervals: dict           # alpha -> (lower, upper) arrays
    replicates: np.ndarray    # (n_reps, k); failed rows are NaN
    n_failures: int
    failure_messages: tuple = ()
    unreliable: bool = False  # > 10% of replicates failed

    @property
    def n_reps(self) -> int:
        return self.replicates.shape[0]


class _ClusterResampler:
    """Precomputed record layout for fast whole-cluster resampling."""

    def __init__(self, data: PanelDataset):
        # Without an explicit cluster column, cluster at the unit level:
        # a unit's periods are resampled together either way.
        cluster_ids = data.cluster_ids
        if cluster_ids is None:
            cluster_ids = data.unit_ids
        codes, uniq = self._factorize(cluster_ids)
        self.n_clusters = len(uniq)
        if self.n_clusters < 2:
            raise DataError(
                f"need >= 2 distinct clusters, got {self.n_clusters}")
        order = np.argsort(codes, kind="stable")
        sorted_codes = codes[order]
        starts = np.searchsorted(sorted_codes, np.arange(self.n_clusters))
        sizes = np.diff(np.append(starts, len(codes)))
        self.order, self.starts, self.sizes = order, starts, sizes
        self.data = data
        ucodes, _ = self._factorize(data.unit_ids)
        self.unit_codes = ucodes
        self.n_units = int(ucodes.max()) + 1

    @staticmethod
    def _factorize(values):
        uniq, codes = np.unique(values, return_inverse=True)
        return codes, uniq

    def replicate(self, rng) -> PanelDataset:
        draws = rng.integers(0, self.n_clusters, self.n_clusters)
        counts = self.sizes[draws]
        total = int(counts.sum())
        cum = np.cumsum(counts) - counts
        pos = np.arange(total) - np.repeat(cum, counts)
        rec = self.order[np.repeat(self.starts[draws], counts) + pos]
        copy = np.repeat(np.arange(self.n_clusters), counts)
        d = self.data
        return PanelDataset(
            unit_ids=self.unit_codes[rec] + self.n_units * copy,
            periods=d.periods[rec],
            outcomes=d.outcomes[rec],
            treated=d.treated[rec],
            cluster_ids=None,
            covariates=None if d.covariates is None else d.covariates[rec],
            covariate_names=d.covariate_names,
            n_categories=d.n_categories,
            category_labels=d.category_labels,
            validate=False)


def block_bootstrap(data: PanelDataset, statistic, spec: BootstrapSpec
                    ) -> IntervalSet:
    """Cluster bootstrap of ``statistic`` (dataset -> 1-D vector).

    Failed replicates (empty cells, non-identified fits, ...) are recorded
    and excluded from the interval computation; if more than 10% fail, the
    result is flagged unreliable and a warning is emitted.
    """
    resampler = _ClusterResampler(data)
    point = np.atleast_1d(np.asarray(statistic(data), dtype=float))
    k = len(point)
    reps = np.full((spec.n_reps, k), np.nan)
    failures: list[str] = []

    def run_one(r):
        rng = np.random.default_rng([spec.seed, r])
        sample = resampler.replicate(rng)
        return np.atleast_1d(np.asarray(statistic(sample), dtype=float))

    def safe_run(r):
        try:
            return r, run_one(r), None
        except _STATISTIC_ERRORS as exc:
            return r, None, f"rep {r}: {type(exc).__name__}: {exc}"

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(safe_run, range(spec.n_reps)))
    else:
        results = [safe_run(r) for r in range(spec.n_reps)]
    for r, value, err in results:       # assembled by replicate index
        if err is None:
            reps[r] = value
        else:
            failures.append(err)

    ok = ~np.isnan(reps).any(axis=1)
    n_fail = int((~ok).sum())
    good = reps[ok]
    if len(good) == 0:
        raise OrdinalDidError("every bootstrap replicate failed")
    se = good.std(axis=0, ddof=1) if len(good) > 1 else np.zeros(k)
    intervals = {}
    for alpha in spec.alpha_levels:
        lo = np.percentile(good, 100 * alpha / 2, axis=0)
        hi = np.percentile(good, 100 * (1 - alpha / 2), axis=0)
        intervals[alpha] = (lo, hi)
    unreliable = n_fail > 0.10 * spec.n_reps
    if unreliable:
        warnings.warn(
            f"{n_fail}/{spec.n_reps} bootstrap replicates failed; "
            "intervals may be unreliable", RuntimeWarning, stacklevel=2)
    return IntervalSet(point=point, se=se, intervals=intervals,
                       replicates=reps, n_failures=n_fail,
                       failure_messages=tuple(failures[:20]),
                       unreliable=unreliable)
