import numpy as np
import pytest
import scipy.stats

from ordinal_did import (CellParams, Cutoffs, DomainError, EmptyCellError,
                         NonIdentifiedError, cell_probs, fit_cell, fit_joint,
                         invert_cell_j3, simulate_panel)
from ordinal_did.simulate import DgpSpec


def test_cell_probs_match_scipy():
    params = CellParams(0.3, 1.7)
    cutoffs = Cutoffs((-0.5, 0.2, 1.1))
    p = cell_probs(params, cutoffs)
    edges = np.array([-np.inf, -0.5, 0.2, 1.1, np.inf])
    expected = np.diff(scipy.stats.norm.cdf((edges - 0.3) / 1.7))
    assert np.allclose(p, expected, atol=1e-14)
    assert np.isclose(p.sum(), 1.0)


def test_inversion_exact_on_model_probs():
    cutoffs = Cutoffs((0.0, 1.0))
    for mu, sigma in [(-0.5, 1.5), (1.0, 1.0), (-1.5, 2.0), (0.0, 0.3)]:
        p = cell_probs(CellParams(mu, sigma), cutoffs)
        rec = invert_cell_j3(p, cutoffs)
        assert rec.mu == pytest.approx(mu, abs=1e-12)
        assert rec.sigma == pytest.approx(sigma, abs=1e-12)


def test_inversion_rejects_boundary():
    cutoffs = Cutoffs((0.0, 1.0))
    with pytest.raises(NonIdentifiedError):
        invert_cell_j3(np.array([0.0, 0.5, 0.5]), cutoffs)


def test_fit_cell_matches_inversion_j3():
    cutoffs = Cutoffs((0.0, 1.0))
    counts = np.array([120, 340, 540])
    fit = fit_cell(counts, cutoffs)
    inv = invert_cell_j3(counts / counts.sum(), cutoffs)
    assert fit.params.mu == pytest.approx(inv.mu, abs=1e-8)
    assert fit.params.sigma == pytest.approx(inv.sigma, abs=1e-8)


def test_fit_cell_recovers_truth_at_large_n():
    cutoffs = Cutoffs((-0.5, 0.0, 0.5, 1.0))
    truth = CellParams(0.4, 1.3)
    n = 2_000_000
    counts = np.round(cell_probs(truth, cutoffs) * n)
    fit = fit_cell(counts, cutoffs)
    assert fit.params.mu == pytest.approx(truth.mu, abs=1e-4)
    assert fit.params.sigma == pytest.approx(truth.sigma, abs=1e-4)


def test_fit_cell_covariance_matches_fisher_information():
    # inverse observed information should match the analytic multinomial
    # Fisher information at the MLE
    cutoffs = Cutoffs((0.0, 1.0))
    truth = CellParams(0.2, 1.1)
    n = 100_000
    counts = cell_probs(truth, cutoffs) * n
    fit = fit_cell(counts, cutoffs)
    mu, sigma = fit.params.mu, fit.params.sigma
    edges = np.array([0.0, 1.0])
    a = (edges - mu) / sigma
    phi = scipy.stats.norm.pdf(a)
    # derivative of each cell probability wrt (mu, sigma)
    dp = np.zeros((3, 2))
    dp[0] = [-phi[0] / sigma, -a[0] * phi[0] / sigma]
    dp[1] = [(phi[0] - phi[1]) / sigma, (a[0] * phi[0] - a[1] * phi[1]) / sigma]
    dp[2] = [phi[1] / sigma, a[1] * phi[1] / sigma]
    p = cell_probs(fit.params, cutoffs)
    info = n * sum(np.outer(dp[j], dp[j]) / p[j] for j in range(3))
    expected = np.linalg.inv(info)
    assert np.allclose(fit.cov, expected, rtol=1e-3)


def test_empty_cell_raises():
    with pytest.raises(EmptyCellError):
        fit_cell(np.zeros(3), Cutoffs((0.0, 1.0)))


def test_degenerate_cell_raises():
    with pytest.raises(NonIdentifiedError):
        fit_cell(np.array([0, 1000, 0]), Cutoffs((0.0, 1.0)))


def test_joint_fit_recovers_free_cutoffs():
    kappa = (-0.5, -0.2, 0.1, 0.4, 0.7, 1.0)
    spec = DgpSpec(theta00=CellParams(-0.5, 1.5), theta01=CellParams(1.0, 1.0),
                   theta10=CellParams(-1.5, 2.0),
                   treated_params=CellParams(1.5, 1.5),
                   cutoffs=Cutoffs(kappa), n_per_cell=50_000, seed=11)
    data = simulate_panel(spec)
    fit = fit_joint(data, Cutoffs.request(7, -0.5, -0.2), compute_cov=False)
    assert np.allclose(fit.cutoffs.kappa, kappa, atol=0.05)
    assert fit.params(0, 0).mu == pytest.approx(-0.5, abs=0.05)
    assert fit.params(0, 0).sigma == pytest.approx(1.5, abs=0.05)


def test_joint_fit_requires_matching_j(base_dgp):
    data = simulate_panel(base_dgp)
    with pytest.raises(DomainError):
        fit_joint(data, Cutoffs.request(5))


def test_cutoffs_must_increase():
    with pytest.raises(DomainError):
        Cutoffs((1.0, 0.0))
    with pytest.raises(DomainError):
        CellParams(0.0, -1.0)
