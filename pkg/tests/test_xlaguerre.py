import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from xlag import XFamily
from xlag.certificates import GridSpec
from xlag.exceptions import GridTooShort, InvalidDomain, InvalidParams, UnsupportedFamily
from xlag.xlaguerre import (
    basis_matrix,
    closed_normalizer,
    denominator_S,
    denominator_S_product,
    eigen_residual,
    eigenfunction_u,
    evaluate_u,
    evaluate_z,
    gram_matrix,
    normalized_orthogonality,
    ode_residual,
    polynomial_jet,
    ratio_jet,
    ratio_monotone_check,
    sonin_certify,
    sonin_criterion_typeII,
    supnorm_profile,
    tail_bound,
    u_jet,
    xlaguerre_I,
    xlaguerre_I_poly,
    xlaguerre_II_m1,
)


# -- construction ---------------------------------------------------------------


def test_parameter_validation():
    with pytest.raises(InvalidParams):
        XFamily.type_i(0, 3.0)
    with pytest.raises(InvalidParams):
        XFamily.type_i(1, 0.0)
    with pytest.raises(InvalidParams):
        XFamily.type_ii(0.5)
    with pytest.raises(UnsupportedFamily):
        XFamily.type_ii(2.0, m=2)
    with pytest.raises(InvalidParams):
        XFamily.classical(-1.0)
    with pytest.raises(InvalidParams):
        XFamily.bessel(1.0, lambdas=[-1.0])


def test_from_spec_round_trip():
    fam = XFamily.from_spec("I", 3.0, 2)
    assert fam == XFamily.type_i(2, 3.0)
    assert fam.describe()["kind"] == "I"


# -- denominators ---------------------------------------------------------------


def test_type_i_m1_denominator():
    fam = XFamily.type_i(1, 3.0)
    y = np.linspace(0, 5, 7)
    np.testing.assert_allclose(denominator_S(fam, y), y + 3.0)


def test_type_ii_m1_denominator():
    y = np.linspace(0, 5, 7)
    np.testing.assert_allclose(denominator_S(XFamily.type_ii(2.0), y), -y - 2.0)


def test_type_i_S0_binomial():
    assert denominator_S(XFamily.type_i(2, 3.0), 0.0) == pytest.approx(6.0, rel=1e-14)


@pytest.mark.parametrize("m,alpha", [(1, 3.0), (3, 1.5), (6, 19.0)])
def test_denominator_product_form(m, alpha):
    fam = XFamily.type_i(m, alpha)
    y = np.linspace(0, 30, 31)
    np.testing.assert_allclose(denominator_S_product(fam, y), denominator_S(fam, y), rtol=1e-12)


def test_denominator_kinds():
    with pytest.raises(UnsupportedFamily):
        denominator_S(XFamily.classical(1.0), 1.0)
    with pytest.raises(UnsupportedFamily):
        denominator_S_product(XFamily.type_ii(2.0), 1.0)


# -- exceptional polynomials ------------------------------------------------------


def test_ratio_m1_n0():
    y = np.linspace(0, 10, 11)
    np.testing.assert_allclose(xlaguerre_I(1, 0, 3.0, y), 1 + 1 / (y + 3.0), rtol=1e-15)
    np.testing.assert_allclose(xlaguerre_I_poly(1, 0, 3.0, y), y + 4.0, rtol=1e-15)


@pytest.mark.parametrize("m,n,alpha", [(1, 0, 3.0), (2, 0, 3.0), (3, 5, 1.5)])
def test_ratio_value_at_zero(m, n, alpha):
    expected = special.binom(n + alpha, n) + special.binom(m - 1 + alpha, m - 1) / special.binom(
        m + alpha - 1, m) * special.binom(n + alpha - 1, n)
    assert xlaguerre_I(m, n, alpha, 0.0) == pytest.approx(expected, rel=1e-13)


def test_ratio_times_S_is_polynomial():
    y = np.linspace(0, 20, 41)
    fam = XFamily.type_i(2, 3.0)
    np.testing.assert_allclose(xlaguerre_I(2, 3, 3.0, y) * denominator_S(fam, y),
                               xlaguerre_I_poly(2, 3, 3.0, y), rtol=1e-11, atol=1e-11)


def test_type_i_alpha_guard():
    with pytest.raises(InvalidParams):
        xlaguerre_I(1, 2, -0.5, 1.0)
    with pytest.raises(InvalidParams):
        xlaguerre_II_m1(2, 0.5, 1.0)


def test_type_ii_examples():
    assert xlaguerre_II_m1(0, 2.0, 0.0) == pytest.approx(3.0, abs=1e-15)
    assert abs(xlaguerre_II_m1(4, 2.0, 400.0)) < 1e-60


def test_type_ii_polynomial_relation():
    fam = XFamily.type_ii(2.5)
    y = np.linspace(0.1, 15, 25)
    weighted = xlaguerre_II_m1(3, 2.5, y)
    np.testing.assert_allclose(weighted, ratio_jet(fam, 3, y)[0] * np.exp(-y / 2), rtol=1e-12)


# -- normalized eigenfunctions ---------------------------------------------------------


@pytest.mark.parametrize("fam", [XFamily.type_i(2, 3.0), XFamily.type_ii(2.0), XFamily.classical(1.0),
                                 XFamily.bessel(1.0)])
def test_normalized_at_zero(fam):
    for n in range(6):
        assert evaluate_u(eigenfunction_u(fam, n), 0.0) == pytest.approx(1.0, abs=1e-15)


def test_classical_normalizer():
    alpha = 1.5
    for n in range(8):
        c = math.factorial(n) * math.gamma(alpha + 1) / math.gamma(n + alpha + 1)
        assert eigenfunction_u(XFamily.classical(alpha), n).c == pytest.approx(c, rel=1e-13)


def test_type_i_m1_first_function():
    ef = eigenfunction_u(XFamily.type_i(1, 3.0), 0)
    assert ef.c == pytest.approx(0.75, rel=1e-15)
    x = np.linspace(0, 4, 9)
    expected = 0.75 * (x**2 + 4) / (x**2 + 3) * np.exp(-x**2 / 2)
    np.testing.assert_allclose(evaluate_u(ef, x), expected, rtol=1e-14)


def test_closed_normalizer_matches_value_at_zero():
    fam = XFamily.type_i(2, 3.0)
    for n in range(1, 6):
        assert xlaguerre_I_poly(2, n, 3.0, 0.0) / closed_normalizer(2, n, 3.0) == pytest.approx(
            denominator_S(fam, 0.0), rel=1e-12)
    with pytest.raises(InvalidParams):
        closed_normalizer(2, 0, 3.0)


def test_radial_and_poly_variables_agree():
    ef = eigenfunction_u(XFamily.type_i(2, 1.0), 4)
    x = np.linspace(0, 5, 11)
    np.testing.assert_allclose(evaluate_u(ef, x), evaluate_z(ef, x**2), rtol=1e-15)


def test_domain_errors():
    ef = eigenfunction_u(XFamily.type_i(1, 3.0), 1)
    with pytest.raises(InvalidDomain):
        evaluate_u(ef, -0.1)
    with pytest.raises(InvalidDomain):
        evaluate_z(ef, -1.0)
    with pytest.raises(UnsupportedFamily):
        evaluate_z(eigenfunction_u(XFamily.bessel(1.0), 0), 1.0)


def test_bessel_index_bound():
    with pytest.raises(InvalidParams):
        eigenfunction_u(XFamily.bessel(1.0, count=3), 3)


def test_u_jet_finite_differences():
    ef = eigenfunction_u(XFamily.type_i(3, 1.0), 5)
    x = np.linspace(0.2, 4, 7)
    _, d1, d2 = u_jet(ef, x)
    h = 1e-5
    f = lambda s: evaluate_u(ef, s)
    np.testing.assert_allclose(d1, (f(x + h) - f(x - h)) / (2 * h), atol=1e-8)
    np.testing.assert_allclose(d2, (f(x + h) - 2 * f(x) + f(x - h)) / h**2, atol=1e-4)


# -- orthogonality and equations --------------------------------------------------------


@pytest.mark.parametrize("m,alpha", [(1, 1.0), (2, 3.0), (3, 10.0)])
def test_orthogonality(m, alpha):
    value, _ = normalized_orthogonality(XFamily.type_i(m, alpha), 12)
    assert value < 1e-8


def test_gram_diagonal_is_sigma2():
    fam = XFamily.type_ii(2.5)
    gram, _ = gram_matrix(fam, 5)
    sigma2 = [eigenfunction_u(fam, k).sigma2 for k in range(6)]
    np.testing.assert_allclose(np.diag(gram), sigma2, rtol=1e-12)


def test_inner_products_unsupported_for_bessel():
    with pytest.raises(UnsupportedFamily):
        gram_matrix(XFamily.bessel(1.0), 3)


def test_ode_residual_first_type_i():
    # x*0 + (a+1-x-2x/(x+a))*1 + (1 - 2a/(x+a))(x+a+1) vanishes identically
    y = np.linspace(0.1, 30, 200)
    assert np.max(np.abs(ode_residual(XFamily.type_i(1, 3.0), 0, y))) < 1e-13


@pytest.mark.parametrize("fam", [XFamily.type_i(2, 3.0), XFamily.type_ii(2.5), XFamily.type_i(3, 10.0)])
def test_ode_residual_families(fam):
    y = np.linspace(0.1, 30, 200)
    for n in range(9):
        assert np.max(np.abs(ode_residual(fam, n, y))) < 1e-9


def test_ode_residual_classical():
    y = np.linspace(0.1, 30, 200)
    assert np.max(np.abs(ode_residual(XFamily.classical(1.0), 7, y))) < 1e-11


def test_polynomial_value_passes_ode_check():
    fam = XFamily.type_i(2, 3.0)
    assert polynomial_jet(fam, 3, 1.5)[0] == pytest.approx(xlaguerre_I_poly(2, 3, 3.0, 1.5), rel=1e-14)
    assert abs(ode_residual(fam, 3, 1.5)) < 1e-9


@pytest.mark.parametrize("fam", [XFamily.type_i(1, 3.0), XFamily.type_ii(2.0), XFamily.classical(0.5),
                                 XFamily.bessel(1.0)])
def test_eigen_equation(fam):
    x = np.linspace(0.2, 5, 50)
    for n in range(6):
        assert np.max(np.abs(eigen_residual(fam, n, x))) < 1e-10


def test_eigenvalue_formula():
    fam = XFamily.type_i(2, 3.0)
    assert fam.eigenvalue(4) == -4 * (4 + 2 + 2.0)


# -- sup norm ---------------------------------------------------------------------------


@pytest.mark.parametrize("fam", [XFamily.type_i(1, 3.0), XFamily.type_ii(2.0)])
def test_sup_at_zero(fam):
    for n in range(13):
        prof = supnorm_profile(fam, n)
        assert prof.max_value == pytest.approx(1.0, abs=1e-10)
        assert prof.argmax == 0.0
        assert prof.tail_bound < prof.max_value


def test_first_function_decreasing():
    y = np.linspace(0, 30, 3001)
    assert np.all(np.diff(evaluate_z(eigenfunction_u(XFamily.type_i(1, 3.0), 0), y)) < 0)


def test_tail_bound_needs_long_grid():
    fam = XFamily.type_i(1, 3.0)
    with pytest.raises(GridTooShort):
        tail_bound(fam, 5, 5.0)
    with pytest.raises(GridTooShort):
        supnorm_profile(fam, 6, GridSpec(x_max=14.0, step=0.1))


def test_envelope_dominates():
    fam = XFamily.type_i(2, 1.0)
    ef = eigenfunction_u(fam, 4)
    y = np.linspace(10, 60, 26)
    bound = np.array([tail_bound(fam, 4, v) for v in y])
    assert np.all(np.abs(evaluate_z(ef, y)) <= bound)


@pytest.mark.parametrize("m,alpha", [(1, 3.0), (4, 2.0), (3, 0.5)])
def test_ratio_monotone(m, alpha):
    assert ratio_monotone_check(m, alpha).passed


def test_sonin_derived_criterion():
    for n in (3, 4, 6):
        assert sonin_certify(n, 2.0).passed


def test_sonin_expanded_expression_small_x():
    # limit x -> 0 at n = 3, a = 1 of the expanded closed form
    expected = 3 * 3 + 1 - 2.5 - 0.5 - 2 * 3 / 1 + 1 * 9 / 1
    assert sonin_criterion_typeII(3, 1.0, 1e-12) == pytest.approx(expected, abs=1e-9)


def test_basis_matrix_shape():
    fam = XFamily.type_i(1, 3.0)
    assert basis_matrix(fam, 4, np.linspace(0, 1, 7)).shape == (5, 7)
    with pytest.raises(InvalidParams):
        basis_matrix(fam, 2, np.ones(3), variable="theta")


@settings(max_examples=30, deadline=None)
@given(m=st.integers(1, 4), n=st.integers(0, 10), alpha=st.floats(0.3, 12), y=st.floats(0, 40))
def test_product_identity(m, n, alpha, y):
    fam = XFamily.type_i(m, alpha)
    lhs = ratio_jet(fam, n, y)[0] * denominator_S(fam, y)
    rhs = xlaguerre_I_poly(m, n, alpha, y)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs), abs(denominator_S(fam, y)) * abs(ratio_jet(fam, n, y)[0]))
