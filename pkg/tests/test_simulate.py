import numpy as np
import pytest

from ordinal_did import (CellParams, Cutoffs, DgpSpec, DomainError, pt_gap,
                         simulate_cell, simulate_panel,
                         simulate_pretreatment_panel, true_delta, true_tmax)
from ordinal_did.simulate import dgp_from_dict


def test_cell_frequencies_match_normal_probabilities():
    rng = np.random.default_rng(0)
    y = simulate_cell(CellParams(0.0, 1.0), Cutoffs((0.0, 1.0)), 1_000_000,
                      rng)
    freq = np.bincount(y, minlength=3) / len(y)
    assert np.allclose(freq, [0.5, 0.3413, 0.1587], atol=0.002)


def test_same_seed_identical_datasets(base_dgp):
    a = simulate_panel(base_dgp)
    b = simulate_panel(base_dgp)
    assert np.array_equal(a.outcomes, b.outcomes)
    assert np.array_equal(a.unit_ids, b.unit_ids)


def test_sigma_zero_rejected():
    with pytest.raises(DomainError):
        CellParams(0.0, 0.0)


def test_latent_correlation_validated(base_dgp):
    from dataclasses import replace
    with pytest.raises(DomainError):
        replace(base_dgp, latent_corr=1.0)


def test_true_tmax_zero_when_derived(base_dgp):
    assert true_tmax(base_dgp) < 1e-12


def test_true_tmax_positive_when_assumption_violated(nonparallel_dgp):
    t = true_tmax(nonparallel_dgp)
    assert 0.0 < t < 1.0


def test_true_delta_signs(base_dgp):
    # treated arm (1.5, 1.5) stochastically dominates the counterfactual
    # (0.5, 4/3), so cumulative effects are positive
    delta = true_delta(base_dgp)
    assert delta.shape == (2,)
    assert np.all(delta > 0)


def test_pretreatment_panel_uses_theta11(nonparallel_dgp):
    from ordinal_did import cell_probs
    from dataclasses import replace
    spec = replace(nonparallel_dgp, n_per_cell=200_000)
    data = simulate_pretreatment_panel(spec)
    freq = data.cell_counts(1, 1).frequencies
    expect = cell_probs(spec.theta11, spec.cutoffs)
    assert np.allclose(freq, expect, atol=0.005)


def test_pt_gap_counterexample():
    args = ([0.3, 0.5, 0.2], [0.2, 0.5, 0.3],
            [0.2, 0.5, 0.3], [0.2, 0.4, 0.4])
    assert pt_gap(*args, threshold=2) == pytest.approx(0.0, abs=1e-12)
    assert pt_gap(*args, threshold=1) == pytest.approx(0.1, abs=1e-12)


def test_pt_gap_zero_when_static():
    p = [0.2, 0.5, 0.3]
    for j in (1, 2):
        assert pt_gap(p, p, p, p, threshold=j) == 0.0


def test_pt_gap_validation():
    p = [0.2, 0.5, 0.3]
    with pytest.raises(DomainError):
        pt_gap([0.5, 0.6, 0.2], p, p, p, threshold=1)
    with pytest.raises(DomainError):
        pt_gap(p, p, p, p, threshold=3)


def test_dgp_from_dict_roundtrip():
    cfg = {"theta00": [-0.5, 1.5], "theta01": [1.0, 1.0],
           "theta10": [-1.5, 2.0], "treated_params": [1.5, 1.5],
           "n_per_cell": 123, "seed": 9}
    spec = dgp_from_dict(cfg)
    assert spec.cutoffs.kappa == (0.0, 1.0)
    assert spec.n_per_cell == 123
    assert spec.resolved_theta11().mu == pytest.approx(0.5)


def test_dgp_from_dict_j5_defaults():
    cfg = {"theta00": [-0.5, 1.5], "theta01": [1.0, 1.0],
           "theta10": [-1.5, 2.0], "treated_params": [1.5, 1.5],
           "n_categories": 5}
    assert dgp_from_dict(cfg).cutoffs.kappa == (-0.5, 0.0, 0.5, 1.0)
