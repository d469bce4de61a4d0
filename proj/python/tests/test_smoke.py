import math

import numpy as np
import pytest
from scipy.integrate import quad

import svev


def test_special_functions():
    assert svev.ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert svev.lower_inc_gamma(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-14)
    assert svev.laguerre_poly(1, 0.5, 1.0) == pytest.approx(0.5)


def test_densities_are_normalized():
    m = svev.Model("laguerre", 3, 0.5)
    for f in (m.rho_sv, m.rho_ev):
        mass, _ = quad(lambda x: float(f(np.array([x]))[0]), 0.0, np.inf, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-8)
    assert m.rho_sv(np.array([[0.6, 2.2]])).shape == (1, 2)


def test_cov_matches_reference():
    m = svev.Model("laguerre", 3, 0.5)
    assert m.cov(0.6, 1.4) == pytest.approx(0.00030181996823406697, rel=1e-8)
    g = m.cov_grid([0.6, 2.2], [1.4, 1.1])
    assert g.shape == (2, 2)
    assert g[0, 0] == pytest.approx(m.cov(0.6, 1.4), rel=1e-12)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        svev.Model("laguerre", 2).cov(1.0, 0.5)
    with pytest.raises(ValueError):
        svev.Model("hermite", 3)
    with pytest.raises(ValueError):
        svev.conditional_density(0.9, [0.5, 1.0, 1.0])


def test_conditional_density():
    a = [0.5, 1.0, 2.0]
    assert svev.conditional_density(0.7, a, analytic=True) == pytest.approx(1.0226109491415614, rel=1e-10)
    assert svev.conditional_cdf(2.5, a) == pytest.approx(1.0, abs=1e-13)


def test_sampler_is_seeded():
    sv1, ev1 = svev.sample_spectra("ginibre", 3, 200, seed=9)
    sv2, _ = svev.sample_spectra("ginibre", 3, 200, seed=9)
    assert sv1.shape == (200, 3)
    assert np.array_equal(sv1, sv2)
    # |det X|^2 two ways
    assert np.allclose(np.prod(sv1, axis=1), np.prod(ev1, axis=1), rtol=1e-8)
