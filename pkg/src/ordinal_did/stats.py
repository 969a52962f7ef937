"""Numeric kernel: standard-normal distribution functions and the optimizer.

Every downstream formula in the package is a composition of the normal CDF
and its inverse, so this module is the accuracy floor for the whole
pipeline.  The implementations delegate to scipy.special (double-precision
erf/erfinv), wrapped behind the contracts the rest of the package relies on.
"""

from __future__ import annotations

import numpy as np
import scipy.optimize
import scipy.special

from .errors import ConvergenceError, DomainError

__all__ = [
    "norm_pdf",
    "norm_cdf",
    "norm_quantile",
    "erf",
    "erf_inv",
    "clamp_probability",
    "minimize",
    "PROB_CLAMP",
]

# Quantile evaluation saturates outside this range; bootstrap replicates can
# push probabilities arbitrarily close to 0 or 1.
PROB_CLAMP = 1e-9

_SQRT2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _require_finite(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return arr


def norm_pdf(x):
    """Standard normal density."""
    x = _require_finite(x, "x")
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def norm_cdf(x):
    """Standard normal CDF, accurate to ~1e-15 via erfc."""
    x = _require_finite(x, "x")
    return 0.5 * scipy.special.erfc(-x / _SQRT2)


def erf(x):
    x = _require_finite(x, "x")
    return scipy.special.erf(x)


def erf_inv(y):
    """Inverse error function on (-1, 1)."""
    y = _require_finite(y, "y")
    if np.any(np.abs(y) >= 1.0):
        raise DomainError("erf_inv requires |y| < 1")
    return scipy.special.erfinv(y)


def clamp_probability(v, clamp: float = PROB_CLAMP):
    """Clamp probabilities into [clamp, 1-clamp].

    Returns ``(clamped, saturated)`` where ``saturated`` flags entries that
    were moved onto the boundary.
    """
    v = np.asarray(v, dtype=float)
    saturated = (v < clamp) | (v > 1.0 - clamp)
    return np.clip(v, clamp, 1.0 - clamp), saturated


def norm_quantile(v, *, clamp: bool = False):
    """Standard normal quantile.

    With ``clamp=False`` (default) values outside (0, 1) raise
    :class:`DomainError`; with ``clamp=True`` values are saturated into
    ``[PROB_CLAMP, 1 - PROB_CLAMP]`` first.
    """
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError("norm_quantile requires finite input")
    if clamp:
        v, _ = clamp_probability(v)
    elif np.any((v <= 0.0) | (v >= 1.0)):
        raise DomainError("norm_quantile requires v in (0, 1)")
    return _SQRT2 * scipy.special.erfinv(2.0 * v - 1.0)


def minimize(objective, init, *, jac=None, tol: float = 1e-8,
             max_iter: int = 500):
    """Minimize a smooth multivariate function.

    Quasi-Newton (BFGS) with numeric gradients when ``jac`` is omitted.
    Deterministic for fixed inputs.  Returns the optimal parameter vector.

    Raises
    ------
    DomainError
        If ``tol <= 0``.
    ConvergenceError
        If the objective is non-finite at ``init`` or the iteration budget
        is exhausted before the gradient-norm / step-size criterion is met.
        The error carries the best iterate and diagnostics.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    x0 = np.atleast_1d(np.asarray(init, dtype=float))
    f0 = objective(x0)
    if not np.isfinite(f0):
        raise ConvergenceError(
            "objective is non-finite at the initial point",
            best_x=x0, diagnostics={"f0": float(f0)})

    res = scipy.optimize.minimize(
        objective, x0, jac=jac, method="BFGS",
        options={"gtol": tol, "maxiter": max_iter})
    gnorm = float(np.max(np.abs(res.jac))) if res.jac is not None else np.inf
    if res.success or gnorm <= 1e-6:
        return np.atleast_1d(res.x)

    # BFGS can stall on nearly flat regions (precision loss) while already
    # at the optimum; accept if a tiny trust step cannot improve.
    polish = scipy.optimize.minimize(
        objective, res.x, jac=jac, method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 200 * len(x0)})
    if polish.fun <= res.fun and np.max(np.abs(polish.x - res.x)) <= 1e-8:
        return np.atleast_1d(polish.x)
    raise ConvergenceError(
        f"optimizer failed to converge: {res.message}",
        best_x=res.x,
        diagnostics={"iterations": int(res.nit), "grad_norm": gnorm,
                     "fun": float(res.fun), "message": str(res.message)})
