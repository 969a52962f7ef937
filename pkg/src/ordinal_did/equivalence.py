"""Pre-treatment equivalence diagnostic for the distributional trend
assumption.

With two pre-treatment periods both groups' quantile-shift functions are
estimable.  The test statistic is their pointwise difference t(v) on a
probability grid; two one-sided tests against an equivalence threshold
delta decide whether the maximal deviation is small enough to support the
identification assumption.  Rejecting the null of NON-equivalence is the
favorable outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import stats
from .errors import CovarianceError, DomainError
from .probit import CellParams, FitResult

__all__ = ["QuantileShift", "EquivalenceResult", "qtilde", "t_grid",
           "t_gradient", "pointwise_bands", "equivalence_test",
           "default_delta", "default_grid", "THETA_ORDER"]

# stacked parameter order for the 8-vector: (mu, sigma) per cell, cells in
# (group, pre-period) order 00, 01, 10, 11
THETA_ORDER = ((0, 0), (0, 1), (1, 0), (1, 1))

_SQRT_PI = np.sqrt(np.pi)
_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class QuantileShift:
    """One group's distribution shift between the two pre-periods, on the
    quantile scale."""
    group: int
    params_t0: CellParams
    params_t1: CellParams


@dataclass(frozen=True)
class EquivalenceResult:
    grid: np.ndarray
    t_hat: np.ndarray
    se: np.ndarray | None = None
    upper: np.ndarray | None = None
    lower: np.ndarray | None = None
    alpha: float | None = None
    n: int | None = None
    delta: float | None = None
    reject: bool | None = None
    p_value: float | None = None

    @property
    def t_max(self) -> float:
        return float(np.max(np.abs(self.t_hat)))

    @property
    def u_max(self) -> float:
        if self.upper is None:
            raise DomainError("bands not computed yet")
        return float(np.max(self.upper))

    @property
    def l_min(self) -> float:
        if self.lower is None:
            raise DomainError("bands not computed yet")
        return float(np.min(self.lower))


def default_grid(start: float = 0.001, stop: float = 0.999,
                 step: float = 0.01) -> np.ndarray:
    """Evaluation grid on the unit interval (defaults: 0.001 to 0.999,
    spacing 0.01)."""
    return np.arange(start, stop + 1e-12, step)


def qtilde(shift: QuantileShift, v) -> np.ndarray:
    """Quantile-shift function Phi((mu1 + sigma1*qnorm(v) - mu0)/sigma0).

    Boundary v is clamped per the kernel policy; monotone increasing in v.
    """
    v = np.asarray(v, dtype=float)
    vv, _ = stats.clamp_probability(v)
    p0, p1 = shift.params_t0, shift.params_t1
    z = stats.norm_quantile(vv)
    return stats.norm_cdf((p1.mu + p1.sigma * z - p0.mu) / p0.sigma)


def t_grid(fit: FitResult, grid=None) -> EquivalenceResult:
    """Pointwise difference of the two groups' quantile-shift functions,
    evaluated from a four-cell pre-period fit."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    q1 = qtilde(QuantileShift(1, fit.params(1, 0), fit.params(1, 1)), grid)
    q0 = qtilde(QuantileShift(0, fit.params(0, 0), fit.params(0, 1)), grid)
    return EquivalenceResult(grid=grid, t_hat=q1 - q0)


def t_gradient(theta, v) -> np.ndarray:
    """Closed-form gradient of t(v) with respect to the 8 pre-period
    parameters in THETA_ORDER stacking.

    For group d with pre-period parameters (mu_d0, sigma_d0, mu_d1,
    sigma_d1), let z_d = (mu_d1 - mu_d0)/(sigma_d0*sqrt(2))
    + erfinv(2v-1)*sigma_d1/sigma_d0.  Returns shape (8,) for scalar v or
    (len(v), 8) for a vector.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (8,):
        raise DomainError("theta must be the stacked 8-vector")
    v = np.asarray(v, dtype=float)
    scalar = v.ndim == 0
    v = np.atleast_1d(v)
    if np.any((v <= 0) | (v >= 1)):
        raise DomainError("v must lie in (0, 1)")
    mu00, s00, mu01, s01, mu10, s10, mu11, s11 = theta
    ei = stats.erf_inv(2.0 * v - 1.0)
    out = np.empty((len(v), 8))
    for d, (mu0, sg0, mu1, sg1, off, sign) in enumerate(
            [(mu00, s00, mu01, s01, 0, +1.0),
             (mu10, s10, mu11, s11, 4, -1.0)]):
        z = (mu1 - mu0) / (sg0 * np.sqrt(2.0)) + ei * (sg1 / sg0)
        e = np.exp(-z * z)
        # sign: t = q1 - q0, so group-0 entries carry +d(-q0)... the
        # group-0 block of dt/dtheta is -dq0/dtheta, group-1 is +dq1/dtheta
        out[:, off + 0] = sign * e / (_SQRT_2PI * sg0)
        out[:, off + 1] = sign * e * z / (_SQRT_PI * sg0)
        out[:, off + 2] = -sign * e / (_SQRT_2PI * sg0)
        out[:, off + 3] = -sign * e * ei / (_SQRT_PI * sg0)
    return out[0] if scalar else out


def pointwise_bands(result: EquivalenceResult, omega, n: int,
                    alpha: float = 0.05, *,
                    theta=None, fit: FitResult | None = None
                    ) -> EquivalenceResult:
    """Delta-method pointwise (1 - alpha) bands:
    t_hat(v) +/- qnorm(1-alpha) * sqrt(grad' Omega grad / n).

    ``omega`` is the asymptotic covariance of sqrt(n)(theta_hat - theta)
    over the 8 stacked pre-period parameters (block-diagonal under
    independence).  Provide the parameter vector via ``theta`` or ``fit``.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (8, 8):
        raise DomainError("omega must be 8x8")
    if not np.allclose(omega, omega.T, atol=1e-10):
        raise CovarianceError("omega is not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (omega + omega.T))
    if eig.min() < -1e-8 * max(1.0, abs(eig.max())):
        raise CovarianceError("omega is not positive semi-definite")
    if theta is None:
        if fit is None:
            raise DomainError("supply theta or fit")
        theta = fit.theta_vector(order=THETA_ORDER)
    grads = t_gradient(theta, result.grid)           # (m, 8)
    var = np.einsum("ij,jk,ik->i", grads, omega, grads)
    var = np.maximum(var, 0.0)
    se = np.sqrt(var / n)
    zq = stats.norm_quantile(1.0 - alpha)
    return replace(result, se=se, upper=result.t_hat + zq * se,
                   lower=result.t_hat - zq * se, alpha=alpha, n=n)


def equivalence_test(result: EquivalenceResult,
                     delta: float) -> EquivalenceResult:
    """Two one-sided tests at threshold delta.

    Reject the null of non-equivalence iff max upper band < delta and
    min lower band > -delta.  The p-value is the largest pointwise
    one-sided p across the grid.
    """
    if delta <= 0:
        raise DomainError("delta must be positive")
    if result.upper is None or result.se is None:
        raise DomainError("compute pointwise bands before testing")
    reject = bool(result.u_max < delta and result.l_min > -delta)
    with np.errstate(divide="ignore"):
        z1 = np.where(result.se > 0, (delta - result.t_hat) /
                      np.where(result.se > 0, result.se, 1.0),
                      np.where(delta > result.t_hat, np.inf, -np.inf))
        z2 = np.where(result.se > 0, (delta + result.t_hat) /
                      np.where(result.se > 0, result.se, 1.0),
                      np.where(delta > -result.t_hat, np.inf, -np.inf))
    p1 = 1.0 - stats.norm_cdf(np.clip(z1, -40, 40))
    p2 = 1.0 - stats.norm_cdf(np.clip(z2, -40, 40))
    p_value = float(np.max(np.maximum(p1, p2)))
    return replace(result, delta=float(delta), reject=reject,
                   p_value=p_value)


def default_delta(n1: int, n0: int, *, rounded: bool = False) -> float:
    """Sample-size-adaptive equivalence threshold
    min{ c * sqrt((n1+n0)/(n1*n0)), 1 } with c = sqrt(-log(0.05)/2)
    (about 1.2239; ``rounded=True`` uses the literal 1.2)."""
    if n1 < 1 or n0 < 1:
        raise DomainError("group sizes must be >= 1")
    c = 1.2 if rounded else np.sqrt(-np.log(0.05) / 2.0)
    return float(min(c * np.sqrt((n1 + n0) / (n1 * n0)), 1.0))
