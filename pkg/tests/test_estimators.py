import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.linear_model import LinearRegression

from xlag.estimators import NikolskiiExtremal, SpanRegressor, XLaguerreBasis
from xlag.exceptions import InvalidDomain, InvalidParams
from xlag.nikolskii import christoffel_D2
from xlag import XFamily


def test_basis_transform_shape_and_params():
    est = XLaguerreBasis(degree=4)
    assert est.get_params()["degree"] == 4
    out = est.fit().transform(np.linspace(0, 3, 10)[:, None])
    assert out.shape == (10, 5)
    np.testing.assert_allclose(out[0], 1.0)


def test_basis_requires_fit():
    with pytest.raises(NotFittedError):
        XLaguerreBasis().transform([[1.0]])


def test_basis_rejects_bad_input():
    est = XLaguerreBasis().fit()
    with pytest.raises(InvalidDomain):
        est.transform([[-1.0]])
    with pytest.raises(InvalidParams):
        est.transform(np.ones((3, 2)))
    with pytest.raises(InvalidParams):
        XLaguerreBasis(kind="bessel", variable="poly").fit()


def test_regressor_recovers_span():
    coeffs = np.array([0.5, -1.0, 2.0])
    x = np.linspace(0, 4, 60)
    basis = XLaguerreBasis(degree=2).fit().transform(x)
    reg = SpanRegressor(degree=2).fit(x, basis @ coeffs)
    np.testing.assert_allclose(reg.coef_, coeffs, atol=1e-10)
    assert reg.score(x, basis @ coeffs) == pytest.approx(1.0)


def test_regressor_translate_at_zero():
    x = np.linspace(0, 4, 40)
    reg = SpanRegressor(kind="classical", alpha=1.0, degree=3).fit(x, np.exp(-x))
    np.testing.assert_allclose(reg.translate(0.0).predict(x), reg.predict(x), rtol=1e-13)


def test_pipeline_and_clone():
    pipe = make_pipeline(XLaguerreBasis(degree=3), LinearRegression())
    x = np.linspace(0, 3, 30)[:, None]
    pipe.fit(x, np.cos(x[:, 0]))
    assert pipe.predict(x).shape == (30,)
    assert clone(SpanRegressor(ridge=0.1)).get_params()["ridge"] == 0.1


def test_nikolskii_extremal():
    est = NikolskiiExtremal(degree=3, q=2.0).fit()
    assert est.constant_ == pytest.approx(christoffel_D2(XFamily.type_i(1, 3.0), 3, 0.0), rel=1e-8)
    assert est.predict([0.0])[0] == pytest.approx(est.constant_, rel=1e-12)
