"""Exceptional Laguerre systems of type I and II together with their classical
and Bessel counterparts.

Two variables appear throughout:

* the *polynomial variable* ``y`` in which the exceptional polynomials live.
  Basis functions are ``z_n(y) = c_n F_n(y) exp(-y/2)`` with ``F_n = P_n / S``
  and ``c_n`` chosen so that ``z_n(0) = 1``.  Inner products are
  ``<f, g> = int_0^inf f g y**alpha dy``, which is the same as
  ``int P_n P_k y**alpha e^{-y} / S**2`` on the polynomial side.
* the *radial variable* ``x`` of the hyperbolic problem, ``u_n(x) = z_n(x**2)``.

For the Bessel family only the radial variable exists: ``u_k(x) = j_alpha(lambda_k x)``.
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import optimize, special

from .certificates import Certificate, GridSpec
from .exceptions import (
    DegenerateNormalization,
    GridTooShort,
    InvalidDomain,
    InvalidParams,
    UnsupportedFamily,
)
from .specialfn import (
    adaptive_laguerre_integral,
    bessel_j_normalized_jet,
    bessel_zeros,
    laguerre,
    laguerre_coefficients,
    laguerre_jet,
    laguerre_roots_negated,
)


class Kind(str, enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    CLASSICAL = "classical"
    BESSEL = "bessel"


@dataclass(frozen=True)
class XFamily:
    """Parameters of one orthogonal system.

    Build instances with :meth:`type_i`, :meth:`type_ii`, :meth:`classical`
    or :meth:`bessel`; they validate the parameter ranges.
    """

    kind: Kind
    m: int
    alpha: float
    eps: int = 0
    delta: int = 0
    xi: tuple = ()
    lambdas: tuple = ()

    @classmethod
    def type_i(cls, m, alpha):
        if int(m) != m or m < 1:
            raise InvalidParams(f"type I codimension must be a positive integer, got {m}")
        if alpha <= 0:
            raise InvalidParams(f"type I needs alpha > 0, got {alpha}")
        xi = tuple(float(v) for v in laguerre_roots_negated(int(m), alpha))
        return cls(Kind.TYPE_I, int(m), float(alpha), eps=1, delta=1, xi=xi)

    @classmethod
    def type_ii(cls, alpha, m=1):
        # Only m = 1 has a constructive formula; its eigenfunctions satisfy the
        # type-II equation with shift +m (see ode_residual), hence eps = 1.
        if m != 1:
            raise UnsupportedFamily("type II is implemented for m = 1 only")
        if alpha < 1:
            raise InvalidParams(f"type II (m=1) needs alpha >= 1, got {alpha}")
        return cls(Kind.TYPE_II, 1, float(alpha), eps=1, delta=1)

    @classmethod
    def classical(cls, alpha):
        if alpha <= -1:
            raise InvalidParams(f"Laguerre needs alpha > -1, got {alpha}")
        return cls(Kind.CLASSICAL, 0, float(alpha))

    @classmethod
    def bessel(cls, alpha, lambdas=None, count=16):
        """Bessel system ``j_alpha(lambda_k x)``.

        ``lambdas`` defaults to the first ``count`` positive zeros of ``J_alpha``.
        """
        if alpha <= -1:
            raise InvalidParams(f"Bessel needs alpha > -1, got {alpha}")
        if lambdas is None:
            lambdas = bessel_zeros(alpha, count)
        lambdas = tuple(float(v) for v in lambdas)
        if any(v < 0 for v in lambdas):
            raise InvalidParams("Bessel frequencies must be nonnegative")
        return cls(Kind.BESSEL, 0, float(alpha), lambdas=lambdas)

    @classmethod
    def from_spec(cls, kind, alpha, m=1, lambdas=None):
        kind = Kind(kind)
        if kind is Kind.TYPE_I:
            return cls.type_i(m, alpha)
        if kind is Kind.TYPE_II:
            return cls.type_ii(alpha, m)
        if kind is Kind.CLASSICAL:
            return cls.classical(alpha)
        return cls.bessel(alpha, lambdas)

    @property
    def has_polynomial_variable(self):
        return self.kind is not Kind.BESSEL

    def eigenvalue(self, n):
        """Eigenvalue of the radial operator ``u'' + (2a+1)/x u' - r(x) u``."""
        if self.kind is Kind.BESSEL:
            return -self.lambdas[n] ** 2
        return -4.0 * (n + self.eps * self.m + (self.alpha + 1.0) / 2.0)

    def describe(self):
        out = {"kind": self.kind.value, "m": self.m, "alpha": self.alpha}
        if self.xi:
            out["xi"] = list(self.xi)
        if self.lambdas:
            out["lambdas"] = list(self.lambdas)
        return out


def _require_laguerre_kind(family):
    if family.kind is Kind.BESSEL:
        raise UnsupportedFamily("operation needs a Laguerre-type family (polynomial variable)")


# -- jets: (f, f', f'') triples ----------------------------------------------


def _mul(a, b):
    return (a[0] * b[0], a[1] * b[0] + a[0] * b[1], a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2])


def _div(a, b):
    q0 = a[0] / b[0]
    q1 = (a[1] - q0 * b[1]) / b[0]
    q2 = (a[2] - 2 * q1 * b[1] - q0 * b[2]) / b[0]
    return q0, q1, q2


def _add(a, b, sign=1.0):
    return tuple(u + sign * v for u, v in zip(a, b))


def _reflected(jet):
    # jet of f(-y) given the jet of f evaluated at -y
    return jet[0], -jet[1], jet[2]


def _linear(y, slope, offset):
    y = np.asarray(y, dtype=float)
    return slope * y + offset, np.full_like(y, slope), np.zeros_like(y)


# -- denominators and exceptional polynomials ----------------------------------


def denominator_jet(family, y):
    """``S``, ``S'``, ``S''`` in the polynomial variable."""
    y = np.asarray(y, dtype=float)
    if family.kind is Kind.TYPE_I:
        return _reflected(laguerre_jet(family.m, family.alpha - 1.0, -y))
    if family.kind is Kind.TYPE_II:
        return laguerre_jet(family.m, -family.alpha - 1.0, y)
    raise UnsupportedFamily("denominator S exists only for type I and type II families")


def denominator_S(family, x):
    """``S_I(x) = L_m^{(alpha-1)}(-x)`` or ``S_II(x) = L_m^{(-alpha-1)}(x)``."""
    value = denominator_jet(family, x)[0]
    return float(value) if np.ndim(value) == 0 else value


def denominator_S_product(family, x):
    """Type I denominator rebuilt from its roots: ``prod(x + xi_i) / m!``."""
    if family.kind is not Kind.TYPE_I:
        raise UnsupportedFamily("product form is available for type I only")
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for xi in family.xi:
        out = out * (x + xi)
    out = out / math.factorial(family.m)
    return float(out) if out.ndim == 0 else out


def xlaguerre_I(m, n, alpha, x):
    """Ratio ``L^{I,(alpha)}_{m,m+n}(x) / S_I(x)``.

    Evaluated as ``L_n^{(a)}(x) + L_{m-1}^{(a)}(-x) / L_m^{(a-1)}(-x) * L_n^{(a-1)}(x)``,
    which avoids forming the degree ``m+n`` polynomial.
    """
    if alpha <= 0:
        raise InvalidParams(f"type I needs alpha > 0, got {alpha}")
    x = np.asarray(x, dtype=float)
    ratio = laguerre(m - 1, alpha, -x) / laguerre(m, alpha - 1.0, -x)
    out = laguerre(n, alpha, x) + ratio * laguerre(n, alpha - 1.0, x)
    return float(out) if np.ndim(out) == 0 else out


def xlaguerre_I_poly(m, n, alpha, x):
    """The polynomial ``L^{I,(alpha)}_{m,m+n}(x)`` in product form.

    ``L_m^{(a)}(-x) L_n^{(a)}(x) - L_{m-1}^{(a)}(-x) L_{n-1}^{(a)}(x)``.
    """
    if alpha <= 0:
        raise InvalidParams(f"type I needs alpha > 0, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = laguerre(m, alpha, -x) * laguerre(n, alpha, x) - laguerre(m - 1, alpha, -x) * laguerre(
        n - 1, alpha, x
    )
    return float(out) if np.ndim(out) == 0 else out


def xlaguerre_II_m1(n, alpha, x):
    """Weighted type II function for ``m = 1``:

    ``z_n(x) = exp(-x/2) (-x L_{n-1}^{(a+2)}(x) + a (1 + 1/(x+a)) L_n^{(a+1)}(x))``.
    """
    if alpha < 1:
        raise InvalidParams(f"type II (m=1) needs alpha >= 1, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = np.exp(-x / 2) * (
        -x * laguerre(n - 1, alpha + 2, x) + alpha * (1 + 1 / (x + alpha)) * laguerre(n, alpha + 1, x)
    )
    return float(out) if np.ndim(out) == 0 else out


def ratio_jet(family, n, y):
    """Jet of ``F_n`` with ``z_n = c_n F_n(y) exp(-y/2)`` (polynomial variable)."""
    _require_laguerre_kind(family)
    y = np.asarray(y, dtype=float)
    a = family.alpha
    if family.kind is Kind.CLASSICAL:
        return laguerre_jet(n, a, y)
    if family.kind is Kind.TYPE_I:
        top = _reflected(laguerre_jet(family.m - 1, a, -y))
        bounded = _div(top, denominator_jet(family, y))
        return _add(laguerre_jet(n, a, y), _mul(bounded, laguerre_jet(n, a - 1.0, y)))
    # type II, m = 1
    first = _mul(_linear(y, -1.0, 0.0), laguerre_jet(n - 1, a + 2.0, y))
    inv = _div((np.ones_like(y), np.zeros_like(y), np.zeros_like(y)), _linear(y, 1.0, a))
    factor = _add(_linear(y, 0.0, a), tuple(a * v for v in inv))
    return _add(first, _mul(factor, laguerre_jet(n, a + 1.0, y)))


def polynomial_jet(family, n, y):
    """Jet of the exceptional (or classical) polynomial ``P_n`` itself."""
    _require_laguerre_kind(family)
    y = np.asarray(y, dtype=float)
    a = family.alpha
    if family.kind is Kind.CLASSICAL:
        return laguerre_jet(n, a, y)
    if family.kind is Kind.TYPE_I:
        m = family.m
        head = _mul(_reflected(laguerre_jet(m, a, -y)), laguerre_jet(n, a, y))
        tail = _mul(_reflected(laguerre_jet(m - 1, a, -y)), laguerre_jet(n - 1, a, y))
        return _add(head, tail, -1.0)
    return _mul(denominator_jet(family, y), ratio_jet(family, n, y))


def _raw_value_at_zero(family, n):
    if family.kind is Kind.BESSEL:
        return 1.0
    return float(ratio_jet(family, n, 0.0)[0])


def closed_normalizer(m, n, alpha):
    """``binom(n+a-1, n-1) (n+a+m)/n`` so that ``R = L^I / closed_normalizer``
    satisfies ``R(0) = S_I(0)``.  Undefined for ``n = 0``."""
    if n < 1:
        raise InvalidParams("closed normalizer is defined for n >= 1 only")
    return float(special.binom(n + alpha - 1, n - 1) * (n + alpha + m) / n)


@dataclass(frozen=True)
class EigenFunction:
    """Normalized basis element ``u_n`` with ``u_n(0) = 1``.

    ``c`` multiplies ``F_n exp(-y/2)``; ``sigma2`` is the squared norm in the
    polynomial variable (``None`` for the Bessel family, which has no
    inner product here).
    """

    family: XFamily
    n: int
    c: float
    sigma2: float | None


@lru_cache(maxsize=4096)
def _sigma2(family, n):
    c = 1.0 / _raw_value_at_zero(family, n)
    value, _ = adaptive_laguerre_integral(
        lambda y: ratio_jet(family, n, y)[0] ** 2, family.alpha, rtol=1e-13, start=32
    )
    return float(c * c * value)


@lru_cache(maxsize=4096)
def eigenfunction_u(family, n):
    """Construct the normalized eigenfunction of index ``n``."""
    if n < 0 or int(n) != n:
        raise InvalidParams("degree index must be a nonnegative integer")
    n = int(n)
    if family.kind is Kind.BESSEL:
        if n >= len(family.lambdas):
            raise InvalidParams(f"Bessel family has only {len(family.lambdas)} frequencies")
        return EigenFunction(family, n, 1.0, None)
    raw = _raw_value_at_zero(family, n)
    if abs(raw) < 1e-13:
        raise DegenerateNormalization(f"raw value at zero is {raw:g}", n=n)
    return EigenFunction(family, n, 1.0 / raw, _sigma2(family, n))


def evaluate_z(ef, y):
    """``z_n(y)`` in the polynomial variable."""
    _require_laguerre_kind(ef.family)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise InvalidDomain("polynomial variable must be nonnegative")
    out = ef.c * ratio_jet(ef.family, ef.n, y)[0] * np.exp(-y / 2)
    return float(out) if out.ndim == 0 else out


def evaluate_u(ef, x):
    """``u_n(x)`` in the radial variable, defined for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidDomain("radial variable must be nonnegative")
    if ef.family.kind is Kind.BESSEL:
        out = bessel_j_normalized_jet(ef.family.alpha, ef.family.lambdas[ef.n] * x)[0]
    else:
        y = x * x
        out = ef.c * ratio_jet(ef.family, ef.n, y)[0] * np.exp(-y / 2)
    return float(out) if np.ndim(out) == 0 else out


def z_jet(ef, y):
    """Jet of ``z_n`` in the polynomial variable."""
    f0, f1, f2 = ratio_jet(ef.family, ef.n, y)
    g = ef.c * np.exp(-np.asarray(y, dtype=float) / 2)
    return g * f0, g * (f1 - f0 / 2), g * (f2 - f1 + f0 / 4)


def u_jet(ef, x):
    """Jet of ``u_n`` in the radial variable (analytic derivatives)."""
    x = np.asarray(x, dtype=float)
    if ef.family.kind is Kind.BESSEL:
        lam = ef.family.lambdas[ef.n]
        j0, j1, j2 = bessel_j_normalized_jet(ef.family.alpha, lam * x)
        return j0, lam * j1, lam * lam * j2
    z0, z1, z2 = z_jet(ef, x * x)
    return z0, 2 * x * z1, 2 * z1 + 4 * x * x * z2


def basis_matrix(family, n, x, variable="radial"):
    """Rows ``u_0(x) .. u_n(x)`` (or ``z_k(y)`` for ``variable='poly'``)."""
    efs = [eigenfunction_u(family, k) for k in range(n + 1)]
    if variable == "radial":
        return np.array([evaluate_u(ef, x) for ef in efs])
    if variable == "poly":
        return np.array([evaluate_z(ef, x) for ef in efs])
    raise InvalidParams(f"unknown variable {variable!r}")


def gram_matrix(family, n, rtol=1e-13):
    """Gram matrix ``<z_j, z_k>`` for ``j, k <= n`` by adaptive Gauss-Laguerre.

    Returns ``(gram, order)``.
    """
    _require_laguerre_kind(family)
    c = np.array([eigenfunction_u(family, k).c for k in range(n + 1)])

    def integrand(y):
        rows = np.array([ratio_jet(family, k, y)[0] for k in range(n + 1)]) * c[:, None]
        return np.einsum("jy,ky->yjk", rows, rows)

    gram, order = adaptive_laguerre_integral(integrand, family.alpha, rtol=rtol, start=32)
    return gram, order


def normalized_orthogonality(family, n):
    """Largest ``|<z_j, z_k>| / (sigma_j sigma_k)`` over ``j != k <= n``."""
    gram, order = gram_matrix(family, n)
    scale = np.sqrt(np.outer(np.diag(gram), np.diag(gram)))
    off = np.abs(gram) / scale
    np.fill_diagonal(off, 0.0)
    return float(off.max()), order


# -- differential equations -----------------------------------------------------


def ode_residual(family, n, x):
    """Scaled residual of the polynomial differential equation.

    Type I/II use ``x y'' + (a+1-x-2x S'/S) y' + (n + eps m - 2 delta a S'/S) y``
    on ``P_n``; the classical family uses ``x y'' + (a+1-x) y' + n y``; the
    Bessel family uses ``u'' + (2a+1)/x u' + lambda^2 u`` in the radial
    variable.  Derivatives are analytic.  The result is divided by
    ``max(1, |y|, |x y''|)``.
    """
    x = np.asarray(x, dtype=float)
    a = family.alpha
    if family.kind is Kind.BESSEL:
        ef = eigenfunction_u(family, n)
        u0, u1, u2 = u_jet(ef, x)
        lam = family.lambdas[n]
        res = u2 + (2 * a + 1) / x * u1 + lam * lam * u0
        scale = np.maximum.reduce([np.ones_like(x), np.abs(u0), np.abs(u2)])
        out = res / scale
    else:
        p0, p1, p2 = polynomial_jet(family, n, x)
        if family.kind is Kind.CLASSICAL:
            res = x * p2 + (a + 1 - x) * p1 + n * p0
        else:
            s0, s1, _ = denominator_jet(family, x)
            log_d = s1 / s0
            res = (
                x * p2
                + (a + 1 - x - 2 * x * log_d) * p1
                + (n + family.eps * family.m - 2 * family.delta * a * log_d) * p0
            )
        scale = np.maximum.reduce([np.ones_like(x), np.abs(p0), np.abs(x * p2)])
        out = res / scale
    return float(out) if out.ndim == 0 else out


def radial_potential(family, x):
    """``r(x)`` of the radial eigen-equation (zero for Bessel, ``x^2`` classical)."""
    x = np.asarray(x, dtype=float)
    if family.kind is Kind.BESSEL:
        out = np.zeros_like(x)
    elif family.kind is Kind.CLASSICAL:
        out = x * x
    else:
        y = x * x
        s0, s1, s2 = denominator_jet(family, y)
        d1 = s1 / s0
        d2 = s2 / s0
        out = y + 4 * (family.alpha + 1 - 2 * family.delta + y) * d1 - 4 * y * d2 + 8 * y * d1 * d1
    return float(out) if out.ndim == 0 else out


def eigen_residual(family, n, x):
    """Relative defect of ``u'' + (2a+1)/x u' - r(x) u = lambda_n u``.

    Normalized by the sum of the magnitudes of the individual terms.
    """
    x = np.asarray(x, dtype=float)
    ef = eigenfunction_u(family, n)
    u0, u1, u2 = u_jet(ef, x)
    q_term = (2 * family.alpha + 1) / x * u1
    r_term = radial_potential(family, x) * u0
    lam_term = family.eigenvalue(n) * u0
    res = u2 + q_term - r_term - lam_term
    scale = np.abs(u2) + np.abs(q_term) + np.abs(r_term) + np.abs(lam_term)
    out = res / np.maximum(scale, np.finfo(float).tiny)
    return float(out) if out.ndim == 0 else out


# -- sup norm at zero ---------------------------------------------------------------


def envelope(family, n, y):
    """Coefficient envelope ``E(y) >= |F_n(y)|`` on ``[0, inf)``.

    Each Laguerre factor is bounded by the sum of its monomials with absolute
    coefficients.  ``E(y) exp(-y/2)`` decreases for ``y >= 2n``.
    """
    _require_laguerre_kind(family)
    a = family.alpha
    y = np.asarray(y, dtype=float)

    def absolute(k, b):
        return np.polynomial.polynomial.polyval(y, np.abs(laguerre_coefficients(k, b)))

    if family.kind is Kind.CLASSICAL:
        return absolute(n, a)
    if family.kind is Kind.TYPE_I:
        # L_{m-1}^{(a)}(-y)/S(y) is positive and decreasing, bounded by its value at 0
        b0 = laguerre(family.m - 1, a, 0.0) / laguerre(family.m, a - 1.0, 0.0)
        return absolute(n, a) + b0 * absolute(n, a - 1.0)
    return y * absolute(n - 1, a + 2.0) + (a + 1.0) * absolute(n, a + 1.0)


def tail_bound(family, n, y_min):
    """Upper bound of ``|z_n(y)|`` for all ``y >= y_min`` (needs ``y_min >= 2n + 2``)."""
    if y_min < 2.0 * n + 2.0:
        raise GridTooShort(f"envelope is monotone only beyond y = {2.0 * n + 2.0}")
    ef = eigenfunction_u(family, n)
    return float(abs(ef.c) * envelope(family, n, y_min) * math.exp(-y_min / 2))


class SupNorm(NamedTuple):
    max_value: float
    argmax: float
    tail_bound: float


def _refine_local_maxima(func, grid, values, top=8):
    """Polish the largest interior grid maxima of ``func`` with bounded Brent."""
    best_val = values.max()
    best_arg = grid[values.argmax()]
    interior = np.flatnonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:])) + 1
    if interior.size:
        order = interior[np.argsort(values[interior])[::-1][:top]]
        for i in order:
            res = optimize.minimize_scalar(
                lambda s: -func(s), bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                options={"xatol": 1e-12},
            )
            if -res.fun > best_val:
                best_val, best_arg = -res.fun, res.x
    return float(best_val), float(best_arg)


def supnorm_profile(family, n, grid=None):
    """Sup of ``|z_n|`` on ``[0, inf)`` in the polynomial variable.

    Grid maximum, polished around interior local maxima, plus an envelope
    bound for everything past the grid end.  Raises :class:`GridTooShort`
    when that bound is not below the observed maximum.
    """
    _require_laguerre_kind(family)
    if grid is None:
        grid = GridSpec(x_max=4 * n + 8 * family.alpha + 40, step=0.01)
    ef = eigenfunction_u(family, n)
    pts = grid.points()
    vals = np.abs(evaluate_z(ef, pts))
    max_value, argmax = _refine_local_maxima(lambda s: abs(evaluate_z(ef, s)), pts, vals)
    bound = tail_bound(family, n, grid.x_max)
    if not bound < max_value:
        raise GridTooShort(
            f"tail bound {bound:g} beyond {grid.x_max} does not undercut {max_value:g}",
            tail_bound=bound,
        )
    return SupNorm(max_value, argmax, bound)


def ratio_monotone_check(m, alpha, grid=None):
    """Certify that ``L_{m-1}^{(a)}(-y) / L_m^{(a-1)}(-y)`` decreases on the grid.

    The margin is ``-max(derivative)``; it is positive when the analytic
    derivative is negative at every grid point.
    """
    if alpha <= 0:
        raise InvalidParams(f"type I needs alpha > 0, got {alpha}")
    grid = grid or GridSpec(x_max=100.0, step=0.01)
    y = grid.points()
    top = _reflected(laguerre_jet(m - 1, alpha, -y))
    bottom = _reflected(laguerre_jet(m, alpha - 1.0, -y))
    deriv = _div(top, bottom)[1]
    i = int(np.argmax(deriv))
    return Certificate.from_margin(
        -deriv[i], float(y[i]), f"analytic derivative on {y.size}-point grid",
        max_derivative=float(deriv[i]),
    )


# -- Sonin-type criterion for type II, m = 1 ------------------------------------------


def sonin_criterion_typeII(n, alpha, x):
    """Expanded closed expression for ``2(a+1) Phi + x Phi'`` (times ``x``):

    ``(2a+1) n + a^2 - 5a/2 - 1/2 - (a+1) x / 2 - 2 (a+2)/(a+x)
    + a (4a+5)/(a+x)^2 + 4 x^2/(a+x)^3``.
    """
    x = np.asarray(x, dtype=float)
    a = alpha
    out = (
        (2 * a + 1) * n
        + a * a
        - 2.5 * a
        - 0.5
        - (a + 1) / 2 * x
        - 2 * (a + 2) / (a + x)
        + a * (4 * a + 5) / (a + x) ** 2
        + 4 * x * x / (a + x) ** 3
    )
    return float(out) if out.ndim == 0 else out


def sonin_phi(n, alpha, x, eps=1):
    """``Phi`` and ``Phi'`` of the self-adjoint form ``(x^{a+1} z')' + x^{a+1} Phi z = 0``
    for the type II, ``m = 1`` family (``S = -x - a``, ``delta = 1``)."""
    x = np.asarray(x, dtype=float)
    a = alpha
    shift = n + eps + (a + 1) / 2
    s = 1.0 / (x + a)  # S'/S
    ds = -s * s
    phi = shift / x + ((1 - a) / x - 1) * s - 2 * s * s - 0.25
    dphi = -shift / x**2 - (1 - a) / x**2 * s + ((1 - a) / x - 1) * ds - 4 * s * ds
    return phi, dphi


def sonin_criterion_derived(n, alpha, x, eps=1):
    """``x (2(a+1) Phi + x Phi')`` computed from ``Phi`` directly."""
    x = np.asarray(x, dtype=float)
    phi, dphi = sonin_phi(n, alpha, x, eps)
    out = x * (2 * (alpha + 1) * phi + x * dphi)
    return float(out) if out.ndim == 0 else out


def sonin_certify(n, alpha, formula="derived", step=1e-3):
    """Check positivity of the Sonin criterion on ``(0, 2n+a+1)`` and that
    ``|z_n(x)| < z_n(0)`` beyond ``A = 2n+a+1``.

    ``formula`` selects the expanded closed expression (``"expanded"``) or the
    one computed from ``Phi`` with the shift the eigenfunctions satisfy
    (``"derived"``).
    """
    if alpha < 1:
        raise InvalidParams("type II (m=1) needs alpha >= 1")
    a_end = 2 * n + alpha + 1
    x = np.arange(step, a_end, step)
    crit = sonin_criterion_typeII if formula == "expanded" else sonin_criterion_derived
    values = crit(n, alpha, x)
    i = int(np.argmin(values))
    family = XFamily.type_ii(alpha)
    ef = eigenfunction_u(family, n)
    x_max = max(4 * n + 8 * alpha + 40, a_end + 1)
    far = np.arange(a_end, x_max, 0.01)
    far_max = float(np.max(np.abs(evaluate_z(ef, far))))
    tail = tail_bound(family, n, x_max)
    margin = min(float(values[i]), 1.0 - max(far_max, tail))
    return Certificate.from_margin(
        margin, float(x[i]), f"{formula} criterion on (0, {a_end:g}), step {step:g}",
        criterion_min=float(values[i]), beyond_A_max=far_max, tail_bound=tail, A=a_end,
    )


def numerator_coefficients(family, n):
    """Ascending monomial coefficients of the numerator ``S * F_n``.

    For the classical family ``S = 1``.  Used to locate sign changes of span
    elements, which are the real roots of a polynomial.
    """
    _require_laguerre_kind(family)
    P = np.polynomial.polynomial
    a = family.alpha

    def lag(k, b, reflect=False):
        coef = laguerre_coefficients(k, b)
        if reflect:
            coef = coef * (-1.0) ** np.arange(coef.size)
        return coef

    if family.kind is Kind.CLASSICAL:
        return lag(n, a)
    if family.kind is Kind.TYPE_I:
        m = family.m
        head = P.polymul(lag(m, a, True), lag(n, a))
        tail = P.polymul(lag(m - 1, a, True), lag(n - 1, a))
        return P.polysub(head, tail)
    # (y + a) y L_{n-1}^{(a+2)} - a (y + a + 1) L_n^{(a+1)}
    first = P.polymul([0.0, a, 1.0], lag(n - 1, a + 2.0))
    second = P.polymul([a * (a + 1.0), a], lag(n, a + 1.0))
    return P.polysub(first, second)


def denominator_coefficients(family):
    """Ascending monomial coefficients of ``S`` (``[1]`` for the classical family)."""
    _require_laguerre_kind(family)
    if family.kind is Kind.CLASSICAL:
        return np.array([1.0])
    if family.kind is Kind.TYPE_I:
        coef = laguerre_coefficients(family.m, family.alpha - 1.0)
        return coef * (-1.0) ** np.arange(coef.size)
    return laguerre_coefficients(family.m, -family.alpha - 1.0)
