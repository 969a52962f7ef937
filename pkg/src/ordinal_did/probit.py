"""Latent location-scale ordered-probit fitting per group-time cell.

Each cell (group d, period t) has its own location/scale pair; two interior
cutoffs are held fixed, which makes the scale estimable.  For J = 3 the
model is saturated and the MLE has a closed form (used as the independent
oracle and as the optimizer's starting point); for J > 3 the remaining
cutoffs are estimated jointly, shared across cells, with monotonicity
enforced through a positive-increment parameterization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import stats
from .errors import (ConvergenceError, CovarianceError, DomainError,
                     EmptyCellError, NonIdentifiedError)
from .panel import CellCounts, PanelDataset

__all__ = ["CellParams", "Cutoffs", "CellFit", "FitResult",
           "cell_probs", "invert_cell_j3", "fit_cell", "fit_joint",
           "fit_pretreatment"]


@dataclass(frozen=True)
class CellParams:
    """Location/scale of one group-time latent normal distribution."""
    mu: float
    sigma: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma)):
            raise DomainError("cell parameters must be finite")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def as_array(self) -> np.ndarray:
        return np.array([self.mu, self.sigma])


@dataclass(frozen=True)
class Cutoffs:
    """Interior cutoffs kappa_1..kappa_{J-1}; two of them are held fixed.

    Free entries may be NaN in a fitting *request*; they are estimated
    jointly and returned filled in.  ``kappa_0 = -inf`` and
    ``kappa_J = +inf`` are implicit.
    """
    kappa: tuple
    fixed_pair: tuple[int, int] = (0, 1)

    def __post_init__(self):
        k = np.asarray(self.kappa, dtype=float)
        if len(k) < 2:
            raise DomainError("need at least two interior cutoffs (J >= 3)")
        i, j = self.fixed_pair
        if not (0 <= i < j < len(k)):
            raise DomainError(f"invalid fixed pair {self.fixed_pair}")
        if not (np.isfinite(k[i]) and np.isfinite(k[j])):
            raise DomainError("fixed cutoffs must be finite")
        known = k[np.isfinite(k)]
        if np.any(np.diff(known) <= 0):
            raise DomainError(f"cutoffs must be strictly increasing: {k}")
        object.__setattr__(self, "kappa", tuple(k.tolist()))

    @classmethod
    def request(cls, n_categories: int, k1: float = 0.0,
                k2: float = 1.0) -> "Cutoffs":
        """A fitting request: first two cutoffs fixed, the rest free."""
        kappa = [k1, k2] + [np.nan] * (n_categories - 3)
        return cls(kappa=tuple(kappa), fixed_pair=(0, 1))

    @property
    def n_categories(self) -> int:
        return len(self.kappa) + 1

    @property
    def is_complete(self) -> bool:
        return bool(np.all(np.isfinite(self.kappa)))

    def edges(self) -> np.ndarray:
        """Complete threshold vector [-inf, kappa..., +inf] of length J+1."""
        if not self.is_complete:
            raise DomainError("cutoffs contain unestimated (NaN) entries")
        return np.concatenate(([-np.inf], self.kappa, [np.inf]))


@dataclass(frozen=True)
class CellFit:
    """MLE of one cell: parameters, log-likelihood, asymptotic covariance."""
    params: CellParams
    loglik: float
    cov: np.ndarray  # 2x2 covariance of (mu_hat, sigma_hat), or NaN if skipped
    converged: bool = True


@dataclass(frozen=True)
class FitResult:
    """Joint fit of the observed cells plus derived counterfactual cell."""
    cells: dict          # (d, t) -> CellFit
    cutoffs: Cutoffs     # complete, with estimated free entries filled in
    loglik: float
    theta11: CellParams | None = None
    cutoff_cov: np.ndarray | None = field(default=None, compare=False)

    def params(self, d: int, t: int) -> CellParams:
        return self.cells[(d, t)].params

    def theta_vector(self, order=((0, 0), (0, 1), (1, 0), (1, 1))) -> np.ndarray:
        """Stacked (mu, sigma) blocks in the given cell order."""
        return np.concatenate([self.cells[c].params.as_array()
                               for c in order])

    def omega_blockdiag(self, n: int,
                        order=((0, 0), (0, 1), (1, 0), (1, 1))) -> np.ndarray:
        """Asymptotic covariance of sqrt(n)(theta_hat - theta), assembled
        block-diagonally across cells under independence."""
        dim = 2 * len(order)
        omega = np.zeros((dim, dim))
        for i, c in enumerate(order):
            omega[2 * i:2 * i + 2, 2 * i:2 * i + 2] = n * self.cells[c].cov
        return omega


# ----------------------------------------------------------------------
# probabilities and the closed-form J=3 inversion
# ----------------------------------------------------------------------

def cell_probs(params: CellParams, cutoffs: Cutoffs) -> np.ndarray:
    """Category probabilities implied by (mu, sigma) and the cutoffs."""
    if params.sigma <= 0:
        raise DomainError("sigma must be positive")
    edges = cutoffs.edges()
    cdf = np.empty(len(edges))
    cdf[0], cdf[-1] = 0.0, 1.0
    cdf[1:-1] = stats.norm_cdf((np.asarray(cutoffs.kappa) - params.mu)
                               / params.sigma)
    return np.diff(cdf)


def invert_cell_j3(probs, cutoffs: Cutoffs) -> CellParams:
    """Closed-form inversion of a 3-category distribution to (mu, sigma).

    With cutoffs (k1, k2):  sigma = (k2-k1) / (q(p0+p1) - q(p0)) and
    mu = k1 - sigma*q(p0), where q is the standard normal quantile.
    """
    p = np.asarray(probs, dtype=float)
    if len(p) != 3:
        raise DomainError("invert_cell_j3 requires exactly 3 probabilities")
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise NonIdentifiedError(
            f"inversion undefined at boundary probabilities {p}")
    if abs(p.sum() - 1.0) > 1e-8:
        raise DomainError("probabilities must sum to 1")
    k1, k2 = cutoffs.kappa[0], cutoffs.kappa[1]
    z1 = stats.norm_quantile(p[0])
    z2 = stats.norm_quantile(p[0] + p[1])
    sigma = (k2 - k1) / (z2 - z1)
    mu = k1 - sigma * z1
    return CellParams(mu=mu, sigma=sigma)


# ----------------------------------------------------------------------
# likelihood machinery
# ----------------------------------------------------------------------

def _nll_grad_cell(mu, sigma, counts, edges):
    """Negative log-likelihood and its gradient wrt (mu, log sigma)."""
    a = (edges - mu) / sigma
    cdf = np.empty_like(a)
    cdf[0], cdf[-1] = 0.0, 1.0
    cdf[1:-1] = stats.norm_cdf(a[1:-1])
    p = np.diff(cdf)
    if np.any(p[counts > 0] <= 0.0):
        return np.inf, np.full(2, np.nan), p
    active = counts > 0
    nll = -float(np.dot(counts[active], np.log(p[active])))

    pdf = np.zeros_like(a)
    pdf[1:-1] = stats.norm_pdf(a[1:-1])
    apdf = np.zeros_like(a)
    apdf[1:-1] = a[1:-1] * pdf[1:-1]
    w = np.where(p > 0, counts / np.where(p > 0, p, 1.0), 0.0)
    # d p_j / d mu = -(pdf[j+1]-pdf[j])/sigma ; d p_j / d log sigma = -(apdf diff)
    g_mu = np.dot(w, np.diff(pdf)) / sigma
    g_ls = np.dot(w, np.diff(apdf))
    return nll, np.array([g_mu, g_ls]), p


def _init_from_3bin(counts, cutoffs: Cutoffs) -> tuple[float, float]:
    """Start values by collapsing counts to 3 bins at the fixed cutoffs."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    i, j = cutoffs.fixed_pair
    cum = np.cumsum(counts) / n
    # cumulative probability strictly below cutoff kappa_{m+1} is cum[m]
    lo = min(max(cum[i], 0.5 / n), 1.0 - 0.5 / n)
    hi = min(max(cum[j], 0.5 / n), 1.0 - 0.5 / n)
    if hi <= lo:
        hi = min(lo + 0.5 / n, 1.0 - 0.25 / n)
    k1, k2 = cutoffs.kappa[i], cutoffs.kappa[j]
    z1, z2 = stats.norm_quantile(lo), stats.norm_quantile(hi)
    sigma = (k2 - k1) / max(z2 - z1, 1e-8)
    mu = k1 - sigma * z1
    return mu, sigma


def _check_identified(counts, cutoffs: Cutoffs):
    counts = np.asarray(counts)
    if counts.sum() <= 0:
        raise EmptyCellError("cell has no observations")
    if (counts > 0).sum() < 2:
        raise NonIdentifiedError(
            f"all mass in one category: counts={counts.tolist()}")
    if cutoffs.is_complete:
        cum = np.cumsum(counts)[:-1] / counts.sum()
        interior = cum[(cum > 0) & (cum < 1)]
        if len(np.unique(interior)) < 2:
            raise NonIdentifiedError(
                "fewer than two interior cut probabilities; (mu, sigma) "
                f"not identified from counts={counts.tolist()}")


def fit_cell(counts: CellCounts | np.ndarray, cutoffs: Cutoffs, *,
             compute_cov: bool = True) -> CellFit:
    """Maximum likelihood fit of one cell with fully fixed cutoffs.

    Damped Newton on (mu, log sigma) with the analytic score, started from
    the closed-form 3-bin inversion; falls back to the generic optimizer on
    stall.  The covariance is the inverse observed information, obtained by
    central finite differences of the analytic score in the natural
    (mu, sigma) parameterization.
    """
    c = counts.counts if isinstance(counts, CellCounts) else np.asarray(counts)
    c = np.asarray(c, dtype=float)
    if len(c) != cutoffs.n_categories:
        raise DomainError(
            f"counts length {len(c)} != J={cutoffs.n_categories}")
    _check_identified(c, cutoffs)
    edges = cutoffs.edges()

    mu0, sigma0 = _init_from_3bin(c, cutoffs)
    x = np.array([mu0, np.log(sigma0)])
    nll, g, _ = _nll_grad_cell(x[0], np.exp(x[1]), c, edges)
    gtol = 1e-10 * max(1.0, c.sum())
    converged = False
    for _ in range(80):
        if np.max(np.abs(g)) < gtol:
            converged = True
            break
        # Hessian by central differences of the analytic gradient
        h = np.empty((2, 2))
        for k in range(2):
            step = 1e-6 * max(1.0, abs(x[k]))
            xp, xm = x.copy(), x.copy()
            xp[k] += step
            xm[k] -= step
            _, gp, _ = _nll_grad_cell(xp[0], np.exp(xp[1]), c, edges)
            _, gm, _ = _nll_grad_cell(xm[0], np.exp(xm[1]), c, edges)
            h[:, k] = (gp - gm) / (2 * step)
        h = 0.5 * (h + h.T)
        try:
            delta = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            delta = -g
        if not np.all(np.isfinite(delta)):
            delta = -g
        # damping: backtrack until the objective does not increase
        scale = 1.0
        for _bt in range(40):
            x_new = x + scale * delta
            nll_new, g_new, _ = _nll_grad_cell(
                x_new[0], np.exp(x_new[1]), c, edges)
            if np.isfinite(nll_new) and nll_new <= nll + 1e-14:
                break
            scale *= 0.5
        else:
            break
        if np.max(np.abs(x_new - x)) < 1e-14:
            x, nll, g = x_new, nll_new, g_new
            converged = np.max(np.abs(g)) < 1e-6 * max(1.0, c.sum())
            break
        x, nll, g = x_new, nll_new, g_new

    if not converged and np.max(np.abs(g)) >= 1e-6 * max(1.0, c.sum()):
        converged = False
    else:
        converged = True
    if not converged:
        def obj(z):
            val, grad, _ = _nll_grad_cell(z[0], np.exp(z[1]), c, edges)
            return val
        try:
            x = stats.minimize(obj, x, tol=1e-10)
            nll, g, _ = _nll_grad_cell(x[0], np.exp(x[1]), c, edges)
            converged = True
        except ConvergenceError as exc:
            raise ConvergenceError(
                "cell fit failed to converge", best_x=x,
                diagnostics={"grad_norm": float(np.max(np.abs(g)))}) from exc

    params = CellParams(mu=float(x[0]), sigma=float(np.exp(x[1])))
    cov = _observed_cov_cell(params, c, edges) if compute_cov \
        else np.full((2, 2), np.nan)
    return CellFit(params=params, loglik=-nll, cov=cov, converged=True)


def _score_natural_cell(mu, sigma, counts, edges):
    """Score of the log-likelihood wrt the natural (mu, sigma) parameters."""
    _, g, _ = _nll_grad_cell(mu, sigma, counts, edges)
    # gradient above is of the NLL wrt (mu, log sigma)
    return -np.array([g[0], g[1] / sigma])


def _observed_cov_cell(params: CellParams, counts, edges) -> np.ndarray:
    """Inverse observed information of (mu, sigma) by FD of the score."""
    theta = params.as_array()
    info = np.empty((2, 2))
    for k in range(2):
        step = 1e-5 * max(1.0, abs(theta[k]))
        tp, tm = theta.copy(), theta.copy()
        tp[k] += step
        tm[k] -= step
        sp = _score_natural_cell(tp[0], tp[1], counts, edges)
        sm = _score_natural_cell(tm[0], tm[1], counts, edges)
        info[:, k] = -(sp - sm) / (2 * step)
    info = 0.5 * (info + info.T)
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise CovarianceError("observed information is singular") from exc
    return 0.5 * (cov + cov.T)


# ----------------------------------------------------------------------
# joint fit across cells with shared free cutoffs
# ----------------------------------------------------------------------

def _joint_unpack(x, n_cells, kappa_fixed):
    """Parameter vector -> per-cell (mu, sigma) and complete kappa."""
    mus = x[0:2 * n_cells:2]
    sigmas = np.exp(x[1:2 * n_cells:2])
    u = x[2 * n_cells:]
    kappa = np.concatenate((kappa_fixed,
                            kappa_fixed[-1] + np.cumsum(np.exp(u))))
    return mus, sigmas, kappa


def _joint_nll_grad(x, counts_mat, n_cells, kappa_fixed):
    """Joint NLL and gradient over stacked cell params + cutoff increments."""
    mus, sigmas, kappa = _joint_unpack(x, n_cells, kappa_fixed)
    n_free = len(x) - 2 * n_cells
    edges = np.concatenate(([-np.inf], kappa, [np.inf]))
    nll = 0.0
    grad = np.zeros_like(x)
    for c in range(n_cells):
        a = (edges - mus[c]) / sigmas[c]
        cdf = np.empty_like(a)
        cdf[0], cdf[-1] = 0.0, 1.0
        cdf[1:-1] = stats.norm_cdf(a[1:-1])
        p = np.diff(cdf)
        cnt = counts_mat[c]
        if np.any(p[cnt > 0] <= 0.0):
            return np.inf, np.full_like(x, np.nan)
        active = cnt > 0
        nll -= float(np.dot(cnt[active], np.log(p[active])))
        pdf = np.zeros_like(a)
        pdf[1:-1] = stats.norm_pdf(a[1:-1])
        apdf = np.zeros_like(a)
        apdf[1:-1] = a[1:-1] * pdf[1:-1]
        w = np.where(p > 0, cnt / np.where(p > 0, p, 1.0), 0.0)
        grad[2 * c] = np.dot(w, np.diff(pdf)) / sigmas[c]
        grad[2 * c + 1] = np.dot(w, np.diff(apdf))
        if n_free:
            # dNLL/d kappa_m = -(w_{m-1} - w_m) * pdf_m / sigma, kappa_m is
            # the upper edge of category m-1 and lower edge of category m
            dk = -(w[:-1] - w[1:]) * pdf[1:-1] / sigmas[c]
            n_fixed = len(kappa_fixed)
            grad[2 * n_cells:] += [
                np.sum(dk[n_fixed + l:]) for l in range(n_free)]
    if n_free:
        u = x[2 * n_cells:]
        grad[2 * n_cells:] *= np.exp(u)  # chain rule through increments
    return nll, grad


def _fit_cells_joint(counts_list, cutoffs: Cutoffs, *, compute_cov=True,
                     x0=None):
    """Fit several cells jointly with shared free cutoffs (J > 3)."""
    J = cutoffs.n_categories
    n_cells = len(counts_list)
    counts_mat = np.vstack([np.asarray(c, dtype=float) for c in counts_list])
    for c in counts_mat:
        if (c > 0).sum() < 2:
            raise NonIdentifiedError(
                f"all mass in one category: counts={c.tolist()}")
    if cutoffs.fixed_pair != (0, 1):
        raise DomainError("joint fitting fixes the first two cutoffs")
    kappa_fixed = np.asarray(cutoffs.kappa[:2], dtype=float)
    n_free = J - 3

    if x0 is None:
        x0 = np.empty(2 * n_cells + n_free)
        pooled = counts_mat.sum(axis=0)
        fixed_like = Cutoffs(
            kappa=tuple(list(kappa_fixed) + [np.nan] * n_free))
        mu_p, sg_p = _init_from_3bin(pooled, fixed_like)
        for c in range(n_cells):
            mu_c, sg_c = _init_from_3bin(counts_mat[c], fixed_like)
            x0[2 * c], x0[2 * c + 1] = mu_c, np.log(sg_c)
        # free cutoffs from the pooled empirical CDF through the pooled fit
        cum = np.cumsum(pooled)[:-1] / pooled.sum()
        cum = np.clip(cum, 1e-6, 1 - 1e-6)
        kap_init = mu_p + sg_p * stats.norm_quantile(cum)
        prev = kappa_fixed[-1]
        for l in range(n_free):
            inc = max(kap_init[2 + l] - prev, 0.05)
            x0[2 * n_cells + l] = np.log(inc)
            prev = prev + inc

    scale = max(1.0, counts_mat.sum())
    res = scipy.optimize.minimize(
        _joint_nll_grad, x0, args=(counts_mat, n_cells, kappa_fixed),
        jac=True, method="BFGS",
        options={"gtol": 1e-10 * scale, "maxiter": 600})
    gnorm = float(np.max(np.abs(res.jac)))
    if not res.success and gnorm > 1e-6 * scale:
        raise ConvergenceError(
            f"joint fit failed: {res.message}", best_x=res.x,
            diagnostics={"grad_norm": gnorm, "iterations": int(res.nit)})
    x = res.x
    mus, sigmas, kappa = _joint_unpack(x, n_cells, kappa_fixed)
    full_cutoffs = Cutoffs(kappa=tuple(kappa.tolist()),
                           fixed_pair=cutoffs.fixed_pair)
    edges = full_cutoffs.edges()

    covs = [np.full((2, 2), np.nan)] * n_cells
    kcov = None
    if compute_cov:
        covs, kcov = _joint_observed_cov(mus, sigmas, kappa, counts_mat,
                                         n_cells)
    fits = []
    for c in range(n_cells):
        params = CellParams(mu=float(mus[c]), sigma=float(sigmas[c]))
        nll_c, _, _ = _nll_grad_cell(params.mu, params.sigma,
                                     counts_mat[c], edges)
        fits.append(CellFit(params=params, loglik=-nll_c, cov=covs[c]))
    return fits, full_cutoffs, -res.fun, kcov


def _joint_observed_cov(mus, sigmas, kappa, counts_mat, n_cells):
    """Per-cell 2x2 covariance blocks from the full observed information
    in natural parameters (mu_c, sigma_c, free kappas)."""
    n_free = len(kappa) - 2
    dim = 2 * n_cells + n_free
    theta = np.empty(dim)
    theta[0:2 * n_cells:2] = mus
    theta[1:2 * n_cells:2] = sigmas
    theta[2 * n_cells:] = kappa[2:]

    def score(th):
        m = th[0:2 * n_cells:2]
        s = th[1:2 * n_cells:2]
        kap = np.concatenate((kappa[:2], th[2 * n_cells:]))
        # natural-parameter score assembled from the log-sigma gradient
        x = np.empty(2 * n_cells + n_free)
        x[0:2 * n_cells:2] = m
        x[1:2 * n_cells:2] = np.log(s)
        if n_free:
            inc = np.diff(np.concatenate(([kap[1]], kap[2:])))
            x[2 * n_cells:] = np.log(np.maximum(inc, 1e-12))
        _, g = _joint_nll_grad(x, counts_mat, n_cells, kappa[:2])
        out = -g.copy()
        out[1:2 * n_cells:2] /= s              # d/d sigma from d/d log sigma
        if n_free:
            # map increment-score back to kappa-score: u_l = log(inc_l),
            # dL/dkappa_m = sum over l>=m of chain pieces; invert triangular
            inc = np.diff(np.concatenate(([kap[1]], kap[2:])))
            gu = -g[2 * n_cells:]
            dk = np.empty(n_free)
            # gu_l = sum_{m>=l} dL/dkappa_m * inc_l  =>  recover dL/dkappa
            acc = gu / np.maximum(inc, 1e-300)
            dk[-1] = acc[-1]
            for l in range(n_free - 2, -1, -1):
                dk[l] = acc[l] - acc[l + 1]
            out[2 * n_cells:] = dk
        return out

    info = np.empty((dim, dim))
    for k in range(dim):
        step = 1e-5 * max(1.0, abs(theta[k]))
        tp, tm = theta.copy(), theta.copy()
        tp[k] += step
        tm[k] -= step
        info[:, k] = -(score(tp) - score(tm)) / (2 * step)
    info = 0.5 * (info + info.T)
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise CovarianceError("joint observed information singular") from exc
    covs = [cov[2 * c:2 * c + 2, 2 * c:2 * c + 2] for c in range(n_cells)]
    kcov = cov[2 * n_cells:, 2 * n_cells:] if n_free else None
    return covs, kcov


def _fit_cells(data: PanelDataset, cell_keys, cutoffs: Cutoffs, *,
               compute_cov=True):
    """Fit the listed (d, t) cells; independent fits when cutoffs are
    complete (J=3 or all fixed), joint otherwise."""
    counts = [data.cell_counts(d, t).counts for (d, t) in cell_keys]
    if cutoffs.is_complete and cutoffs.n_categories == 3:
        fits = [fit_cell(c, cutoffs, compute_cov=compute_cov)
                for c in counts]
        total = sum(f.loglik for f in fits)
        return fits, cutoffs, total, None
    if cutoffs.is_complete:
        # all cutoffs supplied: still independent per-cell fits
        fits = [fit_cell(c, cutoffs, compute_cov=compute_cov)
                for c in counts]
        total = sum(f.loglik for f in fits)
        return fits, cutoffs, total, None
    return _fit_cells_joint(counts, cutoffs, compute_cov=compute_cov)


def fit_joint(data: PanelDataset, cutoffs: Cutoffs | None = None, *,
              compute_cov: bool = True,
              derive_counterfactual: bool = True) -> FitResult:
    """Fit cells (0,0), (0,1), (1,0) — the treated post cell is never
    modeled — and derive the counterfactual (1,1) parameters.

    ``cutoffs`` may be a complete vector (all fixed) or a request with NaN
    free entries (J > 3), in which case the free cutoffs are estimated
    jointly, shared across cells.
    """
    if cutoffs is None:
        cutoffs = Cutoffs.request(data.n_categories)
    if cutoffs.n_categories != data.n_categories:
        raise DomainError(
            f"cutoff vector implies J={cutoffs.n_categories} but data has "
            f"J={data.n_categories}")
    keys = [(0, 0), (0, 1), (1, 0)]
    fits, full_cutoffs, loglik, kcov = _fit_cells(
        data, keys, cutoffs, compute_cov=compute_cov)
    cells = dict(zip(keys, fits))
    theta11 = None
    if derive_counterfactual:
        from .effects import counterfactual_params
        cf = counterfactual_params(cells[(0, 0)].params,
                                   cells[(0, 1)].params,
                                   cells[(1, 0)].params)
        theta11 = CellParams(mu=cf.mu11, sigma=cf.sigma11)
    return FitResult(cells=cells, cutoffs=full_cutoffs, loglik=loglik,
                     theta11=theta11, cutoff_cov=kcov)


def fit_pretreatment(data: PanelDataset, cutoffs: Cutoffs | None = None, *,
                     compute_cov: bool = True) -> FitResult:
    """Fit all four cells of a two-period pre-treatment dataset.

    Before treatment the observed outcome equals the untreated potential
    outcome in both groups, so the (1,1) cell is observed and fitted.
    """
    if cutoffs is None:
        cutoffs = Cutoffs.request(data.n_categories)
    if sorted(data.period_list) != [0, 1]:
        raise DomainError(
            "pre-treatment fit expects a two-period dataset with periods "
            f"(0, 1); got {data.period_list} "
            "(use subset_pretreatment first)")
    keys = [(0, 0), (0, 1), (1, 0), (1, 1)]
    fits, full_cutoffs, loglik, kcov = _fit_cells(
        data, keys, cutoffs, compute_cov=compute_cov)
    return FitResult(cells=dict(zip(keys, fits)), cutoffs=full_cutoffs,
                     loglik=loglik, theta11=None, cutoff_cov=kcov)
