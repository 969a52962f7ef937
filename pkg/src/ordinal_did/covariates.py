"""Ordered probit with covariate-indexed location and log-scale.

The latent mean is Z'gamma0 and the latent scale exp(Z'gamma1) with design
row Z = (1, D, t, D*t, X').  This is a different identification strategy
than the counterfactual transform of the base pipeline (it does not impose
the distributional trend assumption and fits the treated post cell);
estimates from the two routes only coincide in special cases.  Treat the
covariate model as a parametric robustness check, not a replacement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import stats
from .errors import (CollinearityError, ConvergenceError, DomainError,
                     EmptyCellError, NonIdentifiedError)
from .panel import PanelDataset
from .probit import Cutoffs

__all__ = ["CovariateDesign", "GammaParams", "build_design",
           "fit_covariate_model", "covariate_effects", "predicted_probs"]


@dataclass(frozen=True)
class CovariateDesign:
    rows: np.ndarray            # (n_records, 4 + p)
    p: int
    names: tuple[str, ...]


@dataclass(frozen=True)
class GammaParams:
    gamma0: np.ndarray          # mean coefficients, length 4 + p
    gamma1: np.ndarray          # log-scale coefficients, length 4 + p
    cov: np.ndarray | None = None   # covariance of (gamma0, gamma1)
    loglik: float = np.nan

    def location(self, design_rows) -> np.ndarray:
        return design_rows @ self.gamma0

    def scale(self, design_rows) -> np.ndarray:
        return np.exp(design_rows @ self.gamma1)


def build_design(data: PanelDataset) -> CovariateDesign:
    """Design rows (1, D, t, D*t, X') per record."""
    n = data.n_records
    base = np.column_stack([
        np.ones(n), data.treated, data.periods,
        data.treated * data.periods])
    if data.covariates is not None and data.covariates.shape[1] > 0:
        rows = np.hstack([base, data.covariates])
        p = data.covariates.shape[1]
    else:
        rows, p = base, 0
    names = ("const", "treat", "time", "treat_x_time") + data.covariate_names
    return CovariateDesign(rows=rows, p=p, names=names)


def _prob_matrix(z_rows, gamma0, gamma1, kappa):
    """Per-record category probabilities (n, J)."""
    mu = z_rows @ gamma0
    sigma = np.exp(np.clip(z_rows @ gamma1, -30, 30))
    a = (kappa[None, :] - mu[:, None]) / sigma[:, None]
    cdf = np.empty((len(mu), len(kappa) + 2))
    cdf[:, 0], cdf[:, -1] = 0.0, 1.0
    cdf[:, 1:-1] = stats.norm_cdf(a)
    return np.diff(cdf, axis=1)


def _nll_grad(params, z, y, kappa, dim):
    gamma0, gamma1 = params[:dim], params[dim:]
    mu = z @ gamma0
    ls = np.clip(z @ gamma1, -30, 30)
    sigma = np.exp(ls)
    # edges of the observed category per record
    edges = np.concatenate(([-np.inf], kappa, [np.inf]))
    a_hi = (edges[y + 1] - mu) / sigma
    a_lo = (edges[y] - mu) / sigma
    p = stats.norm_cdf(np.clip(a_hi, -40, 40)) - \
        stats.norm_cdf(np.clip(a_lo, -40, 40))
    if np.any(p <= 0):
        return np.inf, np.full_like(params, np.nan)
    nll = -float(np.log(p).sum())
    phi_hi = np.where(np.isfinite(a_hi), stats.norm_pdf(
        np.where(np.isfinite(a_hi), a_hi, 0.0)), 0.0)
    phi_lo = np.where(np.isfinite(a_lo), stats.norm_pdf(
        np.where(np.isfinite(a_lo), a_lo, 0.0)), 0.0)
    w = 1.0 / p
    # d p / d mu = -(phi_hi - phi_lo)/sigma ; d p / d logsigma = -(a*phi diff)
    g_mu = w * (phi_hi - phi_lo) / sigma
    ah = np.where(np.isfinite(a_hi), a_hi, 0.0)
    al = np.where(np.isfinite(a_lo), a_lo, 0.0)
    g_ls = w * (ah * phi_hi - al * phi_lo)
    grad = np.concatenate((z.T @ g_mu, z.T @ g_ls))
    return nll, grad


def fit_covariate_model(data: PanelDataset, cutoffs: Cutoffs, *,
                        compute_cov: bool = True) -> GammaParams:
    """MLE of (gamma0, gamma1) over all records and both periods.

    Covariates are standardized internally for optimization; coefficients
    are reported on the original scale.  All cutoffs must be fixed
    (complete) here.
    """
    if not cutoffs.is_complete:
        raise DomainError("covariate model requires fully fixed cutoffs")
    if cutoffs.n_categories != data.n_categories:
        raise DomainError("cutoff vector does not match J")
    design = build_design(data)
    z = design.rows
    rank = np.linalg.matrix_rank(z)
    if rank < z.shape[1]:
        raise CollinearityError(
            f"design matrix rank {rank} < {z.shape[1]} columns")
    counts = np.bincount(data.outcomes, minlength=data.n_categories)
    if (counts > 0).sum() < 2:
        raise NonIdentifiedError("outcome takes a single value")

    # standardize covariate columns (not the four structural ones)
    z_std = z.copy()
    centers = np.zeros(z.shape[1])
    scales = np.ones(z.shape[1])
    for k in range(4, z.shape[1]):
        centers[k] = z[:, k].mean()
        sd = z[:, k].std()
        scales[k] = sd if sd > 0 else 1.0
        z_std[:, k] = (z[:, k] - centers[k]) / scales[k]

    kappa = np.asarray(cutoffs.kappa, dtype=float)
    y = data.outcomes
    dim = z.shape[1]
    x0 = np.zeros(2 * dim)
    x0[0] = (kappa[0] + kappa[-1]) / 2.0
    x0[dim] = np.log(max((kappa[-1] - kappa[0]), 1.0))
    res = scipy.optimize.minimize(
        _nll_grad, x0, args=(z_std, y, kappa, dim), jac=True,
        method="BFGS",
        options={"gtol": 1e-8 * max(1.0, len(y)), "maxiter": 1000})
    gnorm = float(np.max(np.abs(res.jac)))
    if not res.success and gnorm > 1e-5 * max(1.0, len(y)):
        raise ConvergenceError(
            f"covariate model failed to converge: {res.message}",
            best_x=res.x, diagnostics={"grad_norm": gnorm})

    # un-standardize: mu = z_std'b = z'g with g_k = b_k/scale_k (k >= 4) and
    # intercept absorbing the centers
    def unstd(b):
        g = b.copy()
        for k in range(4, dim):
            g[k] = b[k] / scales[k]
            g[0] -= b[k] * centers[k] / scales[k]
        return g

    gamma0 = unstd(res.x[:dim])
    gamma1 = unstd(res.x[dim:])
    cov = None
    if compute_cov:
        cov = _gamma_cov(np.concatenate((gamma0, gamma1)), z, y, kappa, dim)
    return GammaParams(gamma0=gamma0, gamma1=gamma1, cov=cov,
                       loglik=-res.fun)


def _gamma_cov(params, z, y, kappa, dim):
    def score(p):
        _, g = _nll_grad(p, z, y, kappa, dim)
        return -g
    m = len(params)
    info = np.empty((m, m))
    for k in range(m):
        step = 1e-5 * max(1.0, abs(params[k]))
        pp, pm = params.copy(), params.copy()
        pp[k] += step
        pm[k] -= step
        info[:, k] = -(score(pp) - score(pm)) / (2 * step)
    info = 0.5 * (info + info.T)
    return np.linalg.pinv(info)


def predicted_probs(gamma: GammaParams, design_rows,
                    cutoffs: Cutoffs) -> np.ndarray:
    """Per-row predicted category probabilities (rows sum to 1)."""
    kappa = np.asarray(cutoffs.kappa, dtype=float)
    return _prob_matrix(np.atleast_2d(design_rows), gamma.gamma0,
                        gamma.gamma1, kappa)


def covariate_effects(gamma: GammaParams, data: PanelDataset,
                      cutoffs: Cutoffs) -> np.ndarray:
    """Covariate-averaged cumulative effects for j = 1..J-1.

    Averages, over treated units' post-period covariate rows, the gap in
    predicted tail probabilities between the treatment-by-time interaction
    switched on and off.  Group membership (the D main effect) is kept in
    both arms, so the off arm is the model's untreated counterfactual for
    the treated group.
    """
    mask = (data.treated == 1) & (data.periods == 1)
    if not mask.any():
        raise EmptyCellError("no treated post-period records")
    n1 = int(mask.sum())
    x_rows = (data.covariates[mask]
              if data.covariates is not None else np.zeros((n1, 0)))
    ones = np.ones(n1)
    z_treat = np.column_stack([ones, ones, ones, ones, x_rows])
    z_ctrl = np.column_stack([ones, ones, ones, 0 * ones, x_rows])
    p_treat = predicted_probs(gamma, z_treat, cutoffs)
    p_ctrl = predicted_probs(gamma, z_ctrl, cutoffs)
    tail_t = np.cumsum(p_treat[:, ::-1], axis=1)[:, ::-1]
    tail_c = np.cumsum(p_ctrl[:, ::-1], axis=1)[:, ::-1]
    return (tail_t - tail_c).mean(axis=0)[1:]
