import numpy as np
import pytest

from xlag import SpanFunction, XFamily
from xlag.exceptions import InvalidParams, NoConvergence, UnsupportedFamily
from xlag.nikolskii import (
    arestov_residual,
    christoffel_D2,
    christoffel_kernel,
    point_constant,
    sup_constant,
    vanishing_basis,
)
from xlag.xlaguerre import eigenfunction_u


def test_christoffel_at_zero_closed_form(type_i):
    sigma2 = np.array([eigenfunction_u(type_i, k).sigma2 for k in range(7)])
    assert christoffel_D2(type_i, 6, 0.0) == pytest.approx(np.sqrt(np.sum(1 / sigma2)), rel=1e-14)


@pytest.mark.parametrize("n", [0, 3, 8])
def test_q2_optimizer_matches_closed_form(type_i, n):
    res = point_constant(type_i, n, 2.0)
    assert res.constant == pytest.approx(christoffel_D2(type_i, n, 0.0), rel=1e-8)


def test_q2_at_interior_point(type_i):
    res = point_constant(type_i, 4, 2.0, point=3.0)
    assert res.constant == pytest.approx(christoffel_D2(type_i, 4, 3.0), rel=1e-8)


def test_kernel_is_extremal_for_q2(type_i):
    assert arestov_residual(type_i, christoffel_kernel(type_i, 6), 2.0) < 1e-8


def test_random_span_is_not_extremal(type_i):
    sf = SpanFunction(type_i, np.random.default_rng(0).standard_normal(5))
    assert arestov_residual(type_i, sf, 1.5) > 1e-3


def test_vanishing_basis(type_i):
    for p in vanishing_basis(type_i, 4, point=2.0):
        assert abs(p.evaluate_poly(2.0)) < 1e-14


@pytest.mark.parametrize("q", [1.5, 3.0, 4.0])
def test_extremal_properties(type_i, q):
    res = point_constant(type_i, 5, q)
    assert res.ortho_residual < 1e-6
    assert res.argmax_point == 0.0
    assert res.details["sup"] == pytest.approx(res.constant, rel=1e-8)


@pytest.mark.parametrize("q", [1.5, 4.0])
def test_uniqueness_from_random_starts(type_i, q):
    a = point_constant(type_i, 4, q, start="random", seed=1).coeffs
    b = point_constant(type_i, 4, q, start="random", seed=2).coeffs
    assert min(np.max(np.abs(a - b)), np.max(np.abs(a + b))) < 1e-6


def test_monotone_in_degree(type_i):
    values = [point_constant(type_i, n, 1.5).constant for n in range(6)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_q1_linear_program(type_i):
    res = point_constant(type_i, 3, 1.0)
    assert 0 < res.constant <= point_constant(type_i, 3, 1.5).constant * 10
    assert res.argmax_point == 0.0


@pytest.mark.parametrize("q", [2.0, 4.0])
def test_sup_constant_at_zero(type_i, q):
    M, arg = sup_constant(type_i, 5, q)
    assert arg == 0.0
    assert M == pytest.approx(point_constant(type_i, 5, q).constant, abs=1e-4)


def test_sup_constant_n0(type_i):
    M, arg = sup_constant(type_i, 0, 1.5)
    assert arg == 0.0


def test_validation(type_i):
    with pytest.raises(InvalidParams):
        point_constant(type_i, 3, 0.5)
    with pytest.raises(InvalidParams):
        point_constant(type_i, 3, 2.0, point=-1.0)
    with pytest.raises(InvalidParams):
        point_constant(type_i, 3, 2.0, start="warm")
    with pytest.raises(UnsupportedFamily):
        point_constant(XFamily.bessel(1.0), 3, 2.0)


def test_iteration_cap_reports_best(type_i, monkeypatch):
    import xlag.nikolskii as nk

    monkeypatch.setattr(nk, "ITERATION_CAP", 2)
    with pytest.raises(NoConvergence) as info:
        point_constant(type_i, 5, 1.5)
    assert info.value.best is not None
    assert info.value.best.constant > 0
