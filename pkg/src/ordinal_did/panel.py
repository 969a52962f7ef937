"""Long-format panel ingestion, validation, and group-time cell partitioning."""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field

import numpy as np
import pandas as pd

from .errors import DataError, DomainError, EmptyCellError

__all__ = ["PanelDataset", "CellCounts", "ColumnMap", "load_csv", "write_csv"]

_MISSING_TOKENS = {"", "NA"}


@dataclass(frozen=True)
class ColumnMap:
    """Maps logical roles to CSV column names."""
    unit: str = "unit"
    period: str = "period"
    outcome: str = "outcome"
    treat: str = "treat"
    cluster: str | None = None
    covariates: tuple[str, ...] = ()


@dataclass(frozen=True)
class CellCounts:
    """Outcome counts of one (group d, period t) cell."""
    d: int
    t: int
    counts: np.ndarray  # length J, nonnegative ints

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.counts.sum()


@dataclass(frozen=True)
class PanelDataset:
    """Validated long-format panel of unit x period ordinal outcomes.

    Outcomes are re-indexed to contiguous ``0..J-1`` preserving the numeric
    order of the input coding.  Datasets are immutable after construction;
    arrays are aligned per record.
    """
    unit_ids: np.ndarray          # opaque tokens (str)
    periods: np.ndarray           # int period index per record
    outcomes: np.ndarray          # int in 0..J-1
    treated: np.ndarray           # 0/1 per record, constant within unit
    cluster_ids: np.ndarray | None = None
    covariates: np.ndarray | None = None   # (n_records, p) floats
    covariate_names: tuple[str, ...] = ()
    n_categories: int = 0
    category_labels: tuple = ()   # original codes, index = new category
    n_dropped: int = 0            # rows dropped at load (missing values)
    _cluster_index: dict = field(default_factory=dict, repr=False,
                                 compare=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        uids = np.asarray(self.unit_ids)
        per = np.asarray(self.periods, dtype=int)
        out = np.asarray(self.outcomes, dtype=int)
        trt = np.asarray(self.treated, dtype=int)
        if not validate:
            # caller guarantees structure (e.g. bootstrap replicates built
            # from an already-validated dataset)
            object.__setattr__(self, "unit_ids", uids)
            object.__setattr__(self, "periods", per)
            object.__setattr__(self, "outcomes", out)
            object.__setattr__(self, "treated", trt)
            if not self.category_labels:
                object.__setattr__(self, "category_labels",
                                   tuple(range(self.n_categories)))
            return
        n = len(uids)
        if not (len(per) == len(out) == len(trt) == n):
            raise DataError("record arrays must have equal length")
        J = self.n_categories or (int(out.max()) + 1 if n else 0)
        if J < 3:
            raise DataError(f"need at least 3 outcome categories, got J={J}")
        if n and (out.min() < 0 or out.max() >= J):
            raise DataError("outcome codes must lie in 0..J-1")
        if not np.all((trt == 0) | (trt == 1)):
            raise DataError("treatment flag must be 0/1")
        # one record per unit-period
        pairs = pd.MultiIndex.from_arrays([uids, per])
        if pairs.has_duplicates:
            dup = pairs[pairs.duplicated()][0]
            raise DataError(
                f"unit {dup[0]!r} appears more than once in period {dup[1]}")
        # treatment constant within unit
        df = pd.DataFrame({"u": uids, "d": trt})
        if (df.groupby("u", sort=False)["d"].nunique() > 1).any():
            bad = df.groupby("u", sort=False)["d"].nunique()
            raise DataError(
                "treatment group varies within unit "
                f"{bad[bad > 1].index[0]!r}")
        object.__setattr__(self, "unit_ids", uids)
        object.__setattr__(self, "periods", per)
        object.__setattr__(self, "outcomes", out)
        object.__setattr__(self, "treated", trt)
        object.__setattr__(self, "n_categories", J)
        if not self.category_labels:
            object.__setattr__(self, "category_labels", tuple(range(J)))

    # -- basic views ------------------------------------------------------
    @property
    def n_records(self) -> int:
        return len(self.unit_ids)

    @property
    def period_list(self) -> list[int]:
        return sorted(np.unique(self.periods).tolist())

    @property
    def n_units(self) -> int:
        return len(np.unique(self.unit_ids))

    def cluster_labels(self) -> np.ndarray:
        if self.cluster_ids is None:
            raise DataError("dataset has no cluster column")
        return np.unique(self.cluster_ids)

    def cluster_record_index(self) -> dict:
        """Cluster label -> array of record indices (cached)."""
        if not self._cluster_index:
            labels = self.cluster_ids
            order = np.argsort(labels, kind="stable")
            sorted_labels = labels[order]
            uniq, starts = np.unique(sorted_labels, return_index=True)
            bounds = np.append(starts, len(labels))
            self._cluster_index.update(
                {lab: order[bounds[i]:bounds[i + 1]]
                 for i, lab in enumerate(uniq)})
        return self._cluster_index

    # -- operations -------------------------------------------------------
    def cell_counts(self, d: int, t: int) -> CellCounts:
        """Outcome counts in cell (d, t); raises on an empty cell."""
        mask = (self.treated == d) & (self.periods == t)
        if not mask.any():
            raise EmptyCellError(f"cell (d={d}, t={t}) has no records")
        counts = np.bincount(self.outcomes[mask],
                             minlength=self.n_categories)
        return CellCounts(d=d, t=t, counts=counts)

    def subset_pretreatment(self, pre_periods: tuple[int, int]) -> "PanelDataset":
        """Restrict to two pre-treatment periods, relabeled to (0, 1)."""
        p0, p1 = pre_periods
        if p0 == p1:
            raise DomainError("pre-treatment periods must differ")
        avail = set(self.period_list)
        for p in (p0, p1):
            if p not in avail:
                raise DomainError(f"period {p} not present in the data")
        mask = (self.periods == p0) | (self.periods == p1)
        new_periods = np.where(self.periods[mask] == p0, 0, 1)
        return PanelDataset(
            unit_ids=self.unit_ids[mask],
            periods=new_periods,
            outcomes=self.outcomes[mask],
            treated=self.treated[mask],
            cluster_ids=None if self.cluster_ids is None
            else self.cluster_ids[mask],
            covariates=None if self.covariates is None
            else self.covariates[mask],
            covariate_names=self.covariate_names,
            n_categories=self.n_categories,
            category_labels=self.category_labels)

    def filter_rows(self, mask: np.ndarray) -> "PanelDataset":
        """Dataset restricted to records where ``mask`` is True."""
        return PanelDataset(
            unit_ids=self.unit_ids[mask],
            periods=self.periods[mask],
            outcomes=self.outcomes[mask],
            treated=self.treated[mask],
            cluster_ids=None if self.cluster_ids is None
            else self.cluster_ids[mask],
            covariates=None if self.covariates is None
            else self.covariates[mask],
            covariate_names=self.covariate_names,
            n_categories=self.n_categories,
            category_labels=self.category_labels)


def load_csv(path, schema: ColumnMap | None = None,
             n_categories: int | None = None) -> PanelDataset:
    """Load and validate a long-format panel CSV.

    Rows with a missing outcome (empty string or "NA") are dropped and
    counted in ``n_dropped``.  Outcome codes are re-indexed to contiguous
    ``0..J-1`` preserving numeric order; the original codes are kept in
    ``category_labels``.
    """
    schema = schema or ColumnMap()
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    needed = [schema.unit, schema.period, schema.outcome, schema.treat]
    if schema.cluster:
        needed.append(schema.cluster)
    needed += list(schema.covariates)
    for col in needed:
        if col not in df.columns:
            raise DataError(f"missing column {col!r} in {path}")

    missing = df[schema.outcome].isin(_MISSING_TOKENS)
    for col in needed:
        missing |= df[col].isin(_MISSING_TOKENS)
    n_dropped = int(missing.sum())
    df = df[~missing]

    try:
        raw_outcome = df[schema.outcome].astype(int).to_numpy()
    except ValueError as exc:
        raise DataError(f"non-integer outcome value: {exc}") from exc
    codes = np.unique(raw_outcome)
    J = n_categories if n_categories is not None else len(codes)
    if len(codes) > J:
        raise DataError(
            f"found {len(codes)} outcome codes but n_categories={J}")
    if n_categories is not None:
        # codes interpreted as already 0-based when J is pinned explicitly
        if raw_outcome.min() < 0 or raw_outcome.max() >= J:
            raise DataError("outcome codes outside 0..J-1")
        outcomes = raw_outcome
        labels = tuple(range(J))
    else:
        outcomes = np.searchsorted(codes, raw_outcome)
        labels = tuple(codes.tolist())
    if J < 3:
        raise DataError(f"need at least 3 outcome categories, got J={J}")

    try:
        periods = df[schema.period].astype(int).to_numpy()
        treated = df[schema.treat].astype(int).to_numpy()
    except ValueError as exc:
        raise DataError(f"non-integer period/treat value: {exc}") from exc

    covariates = None
    if schema.covariates:
        try:
            covariates = df[list(schema.covariates)].astype(float).to_numpy()
        except ValueError as exc:
            raise DataError(f"non-numeric covariate value: {exc}") from exc

    return PanelDataset(
        unit_ids=df[schema.unit].to_numpy(),
        periods=periods,
        outcomes=outcomes,
        treated=treated,
        cluster_ids=df[schema.cluster].to_numpy() if schema.cluster else None,
        covariates=covariates,
        covariate_names=tuple(schema.covariates),
        n_categories=J,
        category_labels=labels,
        n_dropped=n_dropped)


def write_csv(data: PanelDataset, path, schema: ColumnMap | None = None):
    """Write a dataset back to CSV with outcomes in original coding."""
    schema = schema or ColumnMap()
    labels = np.asarray(data.category_labels)
    cols = {
        schema.unit: data.unit_ids,
        schema.period: data.periods,
        schema.outcome: labels[data.outcomes],
        schema.treat: data.treated,
    }
    if data.cluster_ids is not None:
        cols[schema.cluster or "cluster"] = data.cluster_ids
    if data.covariates is not None:
        for k, name in enumerate(data.covariate_names):
            cols[name] = data.covariates[:, k]
    pd.DataFrame(cols).to_csv(path, index=False)
