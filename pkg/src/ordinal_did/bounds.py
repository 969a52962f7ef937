"""Partial-identification bounds for the proportion benefiting from
treatment.

The weak-benefit proportion P(Y(1) >= Y(0) | treated) and its strict
variant P(Y(1) > Y(0) | treated) depend on the joint distribution of the
two potential outcomes and are only set-identified; Frechet-style bounds
follow from the identified marginals alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .probit import Cutoffs, cell_probs

__all__ = ["BenefitBounds", "eta_bounds", "tau_bounds",
           "bounds_from_marginals"]


@dataclass(frozen=True)
class BenefitBounds:
    lower: float
    upper: float
    estimand: str            # "weak" (>=) or "strict" (>)
    clamped: bool = False    # plug-in value fell outside [0, 1]

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise DomainError(
                f"invalid bounds [{self.lower}, {self.upper}]")


def _delta_from_marginals(p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    """Cumulative effects Delta_j = P(Y1 >= j) - P(Y0 >= j), with
    Delta_0 = 0 prepended (index set 0..J-1)."""
    tail1 = np.cumsum(p1[::-1])[::-1]
    tail0 = np.cumsum(p0[::-1])[::-1]
    delta = tail1 - tail0
    delta[0] = 0.0
    return delta


def _weak_bounds(p0: np.ndarray, delta: np.ndarray) -> tuple[float, float,
                                                             bool]:
    lower = float(np.max(p0 + delta))
    upper = float(1.0 + np.min(delta))
    clamped = not (0.0 <= lower and upper <= 1.0 and lower <= upper)
    lower = min(max(lower, 0.0), 1.0)
    upper = min(max(upper, 0.0), 1.0)
    return (min(lower, upper), upper, clamped)


def eta_bounds(counterfactual_probs, cutoffs: Cutoffs | None = None,
               delta_hat=None, treated_probs=None) -> BenefitBounds:
    """Bounds on the weak-benefit proportion P(Y(1) >= Y(0) | treated):
    lower = max_j { p0_j + Delta_j }, upper = 1 + min_j Delta_j,
    where p0 is the counterfactual distribution and Delta_0 = 0.

    ``counterfactual_probs`` may be a probability vector or CellParams
    (evaluated through ``cutoffs``).  Supply either ``delta_hat`` (length
    J-1, for j = 1..J-1) or ``treated_probs``.
    """
    p0 = _as_probs(counterfactual_probs, cutoffs)
    delta = _resolve_delta(p0, delta_hat, treated_probs)
    lower, upper, clamped = _weak_bounds(p0, delta)
    return BenefitBounds(lower=lower, upper=upper, estimand="weak",
                         clamped=clamped)


def tau_bounds(counterfactual_probs, cutoffs: Cutoffs | None = None,
               delta_hat=None, treated_probs=None) -> BenefitBounds:
    """Bounds on the strict-benefit proportion P(Y(1) > Y(0) | treated).

    By the complement identity P(Y1 > Y0) = 1 - P(Y0 >= Y1), the strict
    bounds follow from the weak formula with the two marginals swapped:
    lower = max(0, max_j Delta_j), upper = 1 + min_j { Delta_j - p1_j }.
    """
    p0 = _as_probs(counterfactual_probs, cutoffs)
    delta = _resolve_delta(p0, delta_hat, treated_probs)
    p1 = _treated_from_delta(p0, delta)
    swapped_lower, swapped_upper, clamped = _weak_bounds(p1, -delta)
    return BenefitBounds(lower=1.0 - swapped_upper, upper=1.0 - swapped_lower,
                         estimand="strict", clamped=clamped)


def bounds_from_marginals(counterfactual_probs, treated_probs
                          ) -> tuple[BenefitBounds, BenefitBounds]:
    """(weak, strict) bounds straight from two J-category marginals."""
    return (eta_bounds(counterfactual_probs, treated_probs=treated_probs),
            tau_bounds(counterfactual_probs, treated_probs=treated_probs))


def _as_probs(value, cutoffs):
    if hasattr(value, "mu"):  # CellParams
        if cutoffs is None:
            raise DomainError("cutoffs required with CellParams input")
        return cell_probs(value, cutoffs)
    p = np.asarray(value, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-8:
        raise DomainError("probabilities must be a point on the simplex")
    return p


def _resolve_delta(p0, delta_hat, treated_probs):
    J = len(p0)
    if (delta_hat is None) == (treated_probs is None):
        raise DomainError("supply exactly one of delta_hat / treated_probs")
    if treated_probs is not None:
        p1 = np.asarray(treated_probs, dtype=float)
        if len(p1) != J:
            raise DomainError("marginals must have equal length")
        return _delta_from_marginals(p0, p1)
    d = np.asarray(delta_hat, dtype=float)
    if len(d) != J - 1:
        raise DomainError(
            f"delta vector must have length J-1={J - 1}, got {len(d)}")
    return np.concatenate(([0.0], d))


def _treated_from_delta(p0, delta):
    tail0 = np.cumsum(p0[::-1])[::-1]
    tail1 = tail0 + delta
    p1 = tail1 - np.append(tail1[1:], 0.0)
    return p1
