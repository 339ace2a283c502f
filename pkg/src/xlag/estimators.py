"""scikit-learn style wrappers.

The basis evaluation is a stateless transformer and least-squares fitting of
span coefficients is a regressor.  The Nikolskii extremal has no data to fit;
``fit`` solves the extremal problem from the hyperparameters alone.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import InvalidDomain, InvalidParams
from .nikolskii import point_constant
from .translation import SpanFunction, translated
from .xlaguerre import XFamily, basis_matrix


def _points(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise InvalidParams(f"expected a single feature column, got {X.shape[1]}")
        X = X[:, 0]
    if np.any(X < 0):
        raise InvalidDomain("sample points must be nonnegative")
    return X


class XLaguerreBasis(TransformerMixin, BaseEstimator):
    """Map points to the basis values ``u_0(x) .. u_degree(x)``.

    Parameters
    ----------
    kind : {"I", "II", "classical", "bessel"}
    m, alpha : family parameters
    degree : highest basis index
    variable : "radial" (``u_k(x)``) or "poly" (``z_k(y)``)
    """

    def __init__(self, kind="I", m=1, alpha=3.0, degree=8, variable="radial"):
        self.kind = kind
        self.m = m
        self.alpha = alpha
        self.degree = degree
        self.variable = variable

    def fit(self, X=None, y=None):
        if self.degree < 0:
            raise InvalidParams("degree must be nonnegative")
        if self.variable not in ("radial", "poly"):
            raise InvalidParams(f"unknown variable {self.variable!r}")
        self.family_ = XFamily.from_spec(self.kind, self.alpha, self.m)
        if self.variable == "poly" and not self.family_.has_polynomial_variable:
            raise InvalidParams("the Bessel system has no polynomial variable")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "family_")
        x = _points(X)
        return basis_matrix(self.family_, self.degree, x, variable=self.variable).T


class SpanRegressor(RegressorMixin, BaseEstimator):
    """Least-squares span coefficients for samples ``(x_i, f(x_i))``.

    ``ridge`` adds ``ridge * ||a||^2`` to the objective.
    """

    def __init__(self, kind="I", m=1, alpha=3.0, degree=8, ridge=0.0):
        self.kind = kind
        self.m = m
        self.alpha = alpha
        self.degree = degree
        self.ridge = ridge

    def fit(self, X, y, sample_weight=None):
        X, y = check_X_y(X, y, ensure_2d=False, dtype=float, y_numeric=True)
        x = _points(X)
        self.basis_ = XLaguerreBasis(self.kind, self.m, self.alpha, self.degree).fit()
        design = self.basis_.transform(x)
        w = np.ones_like(y) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        sw = np.sqrt(w)
        A = design * sw[:, None]
        rhs = y * sw
        if self.ridge > 0:
            A = np.vstack([A, np.sqrt(self.ridge) * np.eye(design.shape[1])])
            rhs = np.concatenate([rhs, np.zeros(design.shape[1])])
        self.coef_, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        self.n_features_in_ = 1
        return self

    @property
    def span_(self):
        check_is_fitted(self, "coef_")
        return SpanFunction(self.basis_.family_, self.coef_)

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return self.basis_.transform(X) @ self.coef_

    def translate(self, t):
        """Regressor whose span is ``T_t`` of this one."""
        check_is_fitted(self, "coef_")
        out = SpanRegressor(**self.get_params())
        out.basis_ = self.basis_
        out.coef_ = translated(self.span_, t).coeffs.copy()
        out.n_features_in_ = 1
        return out


class NikolskiiExtremal(BaseEstimator):
    """Extremal span element for the point problem at ``point``.

    ``fit`` ignores its arguments.  Fitted attributes: ``constant_``,
    ``coef_``, ``argmax_``, ``residual_``.  ``predict`` evaluates the extremal
    in the polynomial variable.
    """

    def __init__(self, kind="I", m=1, alpha=3.0, degree=4, q=2.0, point=0.0):
        self.kind = kind
        self.m = m
        self.alpha = alpha
        self.degree = degree
        self.q = q
        self.point = point

    def fit(self, X=None, y=None):
        family = XFamily.from_spec(self.kind, self.alpha, self.m)
        res = point_constant(family, self.degree, self.q, self.point)
        self.family_ = family
        self.constant_ = res.constant
        self.coef_ = res.coeffs
        self.argmax_ = res.argmax_point
        self.residual_ = res.ortho_residual
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return SpanFunction(self.family_, self.coef_).evaluate_poly(_points(X))
