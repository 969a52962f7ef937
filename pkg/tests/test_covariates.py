import numpy as np
import pytest

from ordinal_did import (CellParams, CollinearityError, Cutoffs, DgpSpec,
                         build_design, covariate_effects, estimate_pipeline,
                         fit_covariate_model, fit_joint, predicted_probs,
                         simulate_panel)
from ordinal_did.panel import PanelDataset
from ordinal_did.stats import norm_cdf


def simulate_with_covariate(n, seed, beta_mu=0.5, beta_ls=0.2):
    """Two-period panel whose latent location and log-scale both move with
    one standard-normal covariate."""
    rng = np.random.default_rng(seed)
    gamma0 = np.array([-0.2, 0.3, 0.6, 0.8, beta_mu])
    gamma1 = np.array([0.1, -0.1, 0.05, 0.15, beta_ls])
    x_unit = rng.standard_normal(n)
    d_unit = (np.arange(n) % 2).astype(int)
    rows = {k: [] for k in
            ("unit", "period", "outcome", "treated", "x")}
    kappa = np.array([0.0, 1.0])
    for t in (0, 1):
        z = np.column_stack([np.ones(n), d_unit, np.full(n, t),
                             d_unit * t, x_unit])
        mu = z @ gamma0
        sigma = np.exp(z @ gamma1)
        latent = mu + sigma * rng.standard_normal(n)
        y = np.searchsorted(kappa, latent, side="right")
        rows["unit"].append(np.arange(n))
        rows["period"].append(np.full(n, t))
        rows["outcome"].append(y)
        rows["treated"].append(d_unit)
        rows["x"].append(x_unit)
    data = PanelDataset(
        unit_ids=np.concatenate(rows["unit"]),
        periods=np.concatenate(rows["period"]),
        outcomes=np.concatenate(rows["outcome"]),
        treated=np.concatenate(rows["treated"]),
        covariates=np.concatenate(rows["x"]).reshape(-1, 1),
        covariate_names=("x",), n_categories=3)
    return data, gamma0, gamma1


def test_design_layout(base_dgp):
    data = simulate_panel(base_dgp)
    design = build_design(data)
    assert design.p == 0
    assert design.names[:4] == ("const", "treat", "time", "treat_x_time")
    assert design.rows.shape == (data.n_records, 4)


def test_recovers_coefficients():
    data, gamma0, gamma1 = simulate_with_covariate(20_000, seed=5)
    fit = fit_covariate_model(data, Cutoffs((0.0, 1.0)), compute_cov=False)
    assert np.allclose(fit.gamma0, gamma0, atol=0.06)
    assert np.allclose(fit.gamma1, gamma1, atol=0.06)


def test_predicted_probs_rows_sum_to_one():
    data, _, _ = simulate_with_covariate(2000, seed=6)
    fit = fit_covariate_model(data, Cutoffs((0.0, 1.0)), compute_cov=False)
    p = predicted_probs(fit, build_design(data).rows, Cutoffs((0.0, 1.0)))
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-10)
    assert np.all(p >= 0)


def test_p0_model_is_saturated_cell_model(base_dgp):
    # without covariates the model has one (mu, log sigma) pair per cell,
    # so its fitted cell parameters match the cell-wise MLE
    data = simulate_panel(base_dgp)
    cutoffs = Cutoffs((0.0, 1.0))
    gam = fit_covariate_model(data, cutoffs, compute_cov=False)
    cells = fit_joint(data, cutoffs, compute_cov=False)
    for d, t in [(0, 0), (0, 1), (1, 0)]:
        z = np.array([1.0, d, t, d * t])
        assert gam.location(z) == pytest.approx(cells.params(d, t).mu,
                                                abs=1e-4)
        assert gam.scale(z) == pytest.approx(cells.params(d, t).sigma,
                                             abs=1e-4)


def test_collinear_covariate_rejected(base_dgp):
    from dataclasses import replace
    data = simulate_panel(base_dgp)
    dup = replace(data, covariates=np.column_stack([data.treated,
                                                    data.treated]),
                  covariate_names=("a", "b"), validate=True)
    with pytest.raises(CollinearityError):
        fit_covariate_model(dup, Cutoffs((0.0, 1.0)))


def test_covariate_effects_shape_and_range():
    data, _, _ = simulate_with_covariate(5000, seed=9)
    fit = fit_covariate_model(data, Cutoffs((0.0, 1.0)), compute_cov=False)
    delta = covariate_effects(fit, data, Cutoffs((0.0, 1.0)))
    assert delta.shape == (2,)
    assert np.all(np.abs(delta) <= 1.0)
