import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xlag import SpanFunction, XFamily
from xlag.cauchy import (
    PotentialSpec,
    g_function,
    gprime,
    gprime_F,
    hypothesis_certificate,
    max_principle_verify,
    nonnegativity_check,
    pde_residual_product,
    positivity_certify,
    r_radial,
    triangle_recheck,
    v_certificate,
    v_closed_forms,
    v_conditions,
)
from xlag.exceptions import InvalidDomain, InvalidParams


def test_radial_potential_simple_families():
    assert r_radial(XFamily.bessel(1.0), 2.0) == 0.0
    assert r_radial(XFamily.classical(1.0), 2.0) == 4.0
    with pytest.raises(InvalidDomain):
        r_radial(XFamily.classical(1.0), 0.0)


def test_radial_potential_two_forms():
    x = np.linspace(0.1, 6, 40)
    fam = XFamily.type_i(1, 3.0)
    y = x**2
    direct = y + 4 * (2 + y) / (y + 3) + 8 * y / (y + 3) ** 2
    np.testing.assert_allclose(r_radial(fam, x), direct, rtol=1e-13)
    np.testing.assert_allclose(r_radial(fam, x), g_function(1, 3.0, y) - 4, rtol=1e-10)


@pytest.mark.parametrize("m,alpha", [(2, 3.0), (5, 16.0)])
def test_gprime_matches_difference_quotient(m, alpha):
    y = np.linspace(0.5, 20, 11)
    h = 1e-5
    fd = (g_function(m, alpha, y + h) - g_function(m, alpha, y - h)) / (2 * h)
    np.testing.assert_allclose(gprime(m, alpha, y), fd, atol=1e-7)


def test_expanded_expression_m1_and_limit():
    y = np.linspace(0, 5, 6)
    a = 3.0
    np.testing.assert_allclose(gprime_F(1, a, y), 1 + 4 * (2 * a - 9) / (y + a) ** 2 - 8 * a / (y + a) ** 2
                               + 16 * a / (y + a) ** 3, rtol=1e-14)
    assert gprime(3, 5.0, 1e8) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("m,alpha", [(1, 3.0), (2, 25.0), (5, 16.0), (6, 19.0)])
def test_positivity_certificates(m, alpha):
    cert = positivity_certify(m, alpha)
    assert cert.passed and cert.margin > 0


def test_positivity_fails_for_small_alpha():
    cert = positivity_certify(1, 0.1)
    assert not cert.passed and cert.margin < 0


def test_positivity_validation():
    with pytest.raises(InvalidParams):
        positivity_certify(1, 0.0)
    with pytest.raises(InvalidParams):
        positivity_certify(1, 3.0, condition="other")


def test_triangle_recheck_positive():
    value, (x, t) = triangle_recheck(XFamily.type_i(1, 3.0))
    assert value > 0 and t < x


def test_potential_spec():
    spec = PotentialSpec(XFamily.classical(1.0))
    assert spec.r(3.0, 1.0) == pytest.approx(8.0)
    assert spec.q(1.0) == 3.0


def test_v_identities_alpha0():
    direct = v_conditions(0.0, 2.0, 1.0)
    assert direct["edge_plus"][0] == pytest.approx(3.0, abs=1e-14)
    cert = v_certificate(0.0)
    assert not cert.passed and cert.margin == 0.0


@pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0])
def test_v_certificate(alpha):
    cert = v_certificate(alpha)
    assert cert.passed
    assert max(cert.details["identity_error"].values()) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0.01, 10), x=st.floats(0.1, 20), frac=st.floats(0.01, 0.99))
def test_v_closed_forms_property(alpha, x, frac):
    t = frac * x
    direct = v_conditions(alpha, x, t)
    closed = v_closed_forms(alpha, x, t)
    for name, value in closed.items():
        assert abs(direct[name][0] - value) <= 1e-10 * direct[name][1]


def test_pde_residuals():
    fam = XFamily.type_i(1, 3.0)
    assert abs(pde_residual_product(fam, 4, 3.0, 1.0)) < 1e-7
    assert abs(pde_residual_product(fam, 4, 3.0, 1.0, path="substituted")) < 1e-14
    g = np.linspace(0.5, 10, 20)
    X, T = np.meshgrid(g, g)
    assert np.max(np.abs(pde_residual_product(XFamily.bessel(1.0), 3, X, T))) < 1e-8
    with pytest.raises(InvalidDomain):
        pde_residual_product(fam, 1, 0.0, 1.0)


def test_hypothesis_certificates():
    assert hypothesis_certificate(XFamily.bessel(1.0)).passed
    assert hypothesis_certificate(XFamily.type_ii(2.0)).passed


@pytest.mark.parametrize("fam", [XFamily.type_i(1, 3.0), XFamily.classical(1.0), XFamily.bessel(1.0)])
def test_max_principle_random(fam):
    rng = np.random.default_rng(11)
    for _ in range(3):
        sf = SpanFunction(fam, rng.standard_normal(int(rng.integers(1, 8))))
        cert = max_principle_verify(sf)
        assert cert.passed
        assert cert.details["symmetry_error"] < 1e-12


def test_bessel_nonnegative_data_stays_nonnegative():
    fam = XFamily.bessel(0.5, lambdas=[0.0, 1.0])
    sf = SpanFunction(fam, [1.0, 1.0])  # 1 + sin x / x >= 0
    axis_min, quad_min, _ = nonnegativity_check(sf, radius=15.0)
    assert axis_min >= 0 and quad_min >= -1e-12
