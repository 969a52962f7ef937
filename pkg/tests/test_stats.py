import numpy as np
import pytest
import scipy.stats

from ordinal_did import DomainError
from ordinal_did.stats import (PROB_CLAMP, clamp_probability, erf, erf_inv,
                               minimize, norm_cdf, norm_pdf, norm_quantile)


def test_norm_cdf_matches_scipy():
    x = np.linspace(-8, 8, 401)
    assert np.allclose(norm_cdf(x), scipy.stats.norm.cdf(x), atol=1e-14)


def test_norm_pdf_matches_scipy():
    x = np.linspace(-8, 8, 401)
    assert np.allclose(norm_pdf(x), scipy.stats.norm.pdf(x), atol=1e-14)


def test_known_cdf_values():
    assert norm_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert norm_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-12)
    assert norm_cdf(-1.0) == pytest.approx(0.15865525393145705, abs=1e-12)


def test_erf_inv_roundtrip():
    y = np.linspace(-0.9999, 0.9999, 201)
    assert np.allclose(erf(erf_inv(y)), y, atol=1e-10)


def test_quantile_inverts_cdf():
    v = np.linspace(0.001, 0.999, 199)
    assert np.allclose(norm_cdf(norm_quantile(v)), v, atol=1e-12)


def test_quantile_rejects_boundary_without_clamp():
    with pytest.raises(DomainError):
        norm_quantile(0.0)
    with pytest.raises(DomainError):
        norm_quantile(1.0)


def test_quantile_clamp_is_finite_at_boundary():
    lo = norm_quantile(0.0, clamp=True)
    hi = norm_quantile(1.0, clamp=True)
    assert np.isfinite(lo) and np.isfinite(hi) and lo < 0 < hi


def test_clamp_probability_reports_saturation():
    v, saturated = clamp_probability(np.array([0.0, 0.5, 1.0]))
    assert saturated.tolist() == [True, False, True]
    assert v[0] == PROB_CLAMP and v[2] == 1.0 - PROB_CLAMP
    _, saturated = clamp_probability(np.array([0.2, 0.8]))
    assert not saturated.any()


def test_minimize_quadratic():
    target = np.array([1.5, -2.0])

    def f(x):
        return float(np.sum((x - target) ** 2))

    x = minimize(f, np.zeros(2))
    assert np.allclose(x, target, atol=1e-5)
