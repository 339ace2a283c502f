"""Classical special functions used by the exceptional Laguerre machinery.

Generalized Laguerre polynomials (values and derivatives), normalized Bessel
functions, zeros of Laguerre polynomials and generalized Gauss-Laguerre
quadrature.  Everything is vectorized over the argument ``x``.
"""

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg, special

from .exceptions import InvalidParams, QuadratureDivergence

#: Hard cap for adaptive quadrature; the ``XLAG_QUAD_MAX`` environment
#: variable overrides it.
DEFAULT_QUAD_MAX = 512

_BESSEL_SERIES_MAX_ARG = 12.0


def quad_cap():
    value = os.environ.get("XLAG_QUAD_MAX")
    if value is None:
        return DEFAULT_QUAD_MAX
    try:
        cap = int(value)
    except ValueError as exc:
        raise InvalidParams(f"XLAG_QUAD_MAX must be an integer, got {value!r}") from exc
    if cap < 1:
        raise InvalidParams("XLAG_QUAD_MAX must be positive")
    return cap


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial :math:`L_n^{(\\alpha)}(x)`.

    Uses the forward three-term recurrence

        (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}.

    Negative ``n`` returns zero, which is the convention ``L_{-1} = 0``
    needed by the exceptional formulas.
    """
    x, scalar = _as_float(x)
    if n < 0:
        out = np.zeros_like(x)
    elif n == 0:
        out = np.ones_like(x)
    else:
        prev = np.ones_like(x)
        cur = alpha + 1.0 - x
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        out = cur
    return float(out) if scalar else out


def laguerre_derivative(n, alpha, x, order=1):
    """``order``-th derivative of :math:`L_n^{(\\alpha)}` at ``x``.

    Relies on d/dx L_n^{(a)} = -L_{n-1}^{(a+1)}, applied ``order`` times.
    """
    if order < 0:
        raise InvalidParams("derivative order must be nonnegative")
    sign = -1.0 if order % 2 else 1.0
    value = laguerre(n - order, alpha + order, x)
    return sign * value


def laguerre_jet(n, alpha, x):
    """Value, first and second derivative of ``L_n^{(alpha)}`` as a tuple."""
    return (
        np.asarray(laguerre(n, alpha, x)),
        np.asarray(laguerre_derivative(n, alpha, x, 1)),
        np.asarray(laguerre_derivative(n, alpha, x, 2)),
    )


def laguerre_coefficients(n, alpha):
    """Monomial coefficients (ascending) of ``L_n^{(alpha)}``.

    ``L_n^{(a)}(x) = sum_k binom(n+a, n-k) (-x)^k / k!``.
    """
    if n < 0:
        return np.zeros(1)
    k = np.arange(n + 1)
    return special.binom(n + alpha, n - k) * (-1.0) ** k / special.factorial(k)


def _bessel_series(alpha, z):
    half_sq = (z / 2.0) ** 2
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(500):
        term = -term * half_sq / ((k + 1) * (k + 1 + alpha))
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return total


def bessel_j_normalized(alpha, z):
    """Normalized Bessel function ``j_alpha(z) = Gamma(alpha+1) (2/z)^alpha J_alpha(z)``.

    Summed from its power series, so ``j_alpha(0) = 1`` exactly.  Past
    ``|z| > 12`` the alternating series loses digits to cancellation and the
    value is taken from :func:`scipy.special.jv` instead.
    """
    if alpha <= -1:
        raise InvalidParams(f"bessel_j_normalized needs alpha > -1, got {alpha}")
    z, scalar = _as_float(z)
    z = np.abs(z)
    out = np.empty_like(z)
    small = z <= _BESSEL_SERIES_MAX_ARG
    if np.any(small):
        out[small] = _bessel_series(alpha, z[small])
    big = ~small
    if np.any(big):
        zb = z[big]
        log_scale = math.lgamma(alpha + 1) + alpha * np.log(2.0 / zb)
        out[big] = np.exp(log_scale) * special.jv(alpha, zb)
    return float(out) if scalar else out


def bessel_j_normalized_jet(alpha, z):
    """``j_alpha`` and its first two derivatives in ``z``.

    Derivatives come from ``j_a'(z) = -z j_{a+1}(z) / (2(a+1))`` and its
    differentiated form, so they do not lean on the Bessel equation.
    """
    z = np.asarray(z, dtype=float)
    j0 = bessel_j_normalized(alpha, z)
    j1 = bessel_j_normalized(alpha + 1, z)
    j2 = bessel_j_normalized(alpha + 2, z)
    d1 = -z * j1 / (2 * (alpha + 1))
    d2 = -j1 / (2 * (alpha + 1)) + z**2 * j2 / (4 * (alpha + 1) * (alpha + 2))
    return np.asarray(j0), np.asarray(d1), np.asarray(d2)


def bessel_zeros(alpha, count):
    """First ``count`` positive zeros of ``J_alpha`` (bracketed, then Brent)."""
    from scipy.optimize import brentq

    zeros = []
    step = 0.25
    a = 1e-3
    fa = special.jv(alpha, a)
    while len(zeros) < count:
        b = a + step
        fb = special.jv(alpha, b)
        if fa == 0.0:
            zeros.append(a)
        elif fa * fb < 0:
            zeros.append(brentq(lambda z: special.jv(alpha, z), a, b, xtol=1e-15))
        a, fa = b, fb
    return np.array(zeros[:count])


def _laguerre_jacobi_matrix(order, alpha):
    k = np.arange(order)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(np.arange(1, order) * (np.arange(1, order) + alpha))
    return diag, off


def laguerre_roots_negated(m, alpha):
    """Return ``xi_1 < ... < xi_m`` with ``-xi_i`` the roots of ``L_m^{(alpha-1)}(-x)``.

    Equivalently the zeros of ``L_m^{(alpha-1)}``, taken as Jacobi matrix
    eigenvalues and then Newton-polished against the recurrence.
    """
    if m < 1:
        raise InvalidParams("m must be a positive integer")
    if alpha <= 0:
        raise InvalidParams(f"type I denominators need alpha > 0, got {alpha}")
    beta = alpha - 1.0
    diag, off = _laguerre_jacobi_matrix(m, beta)
    roots = linalg.eigh_tridiagonal(diag, off, eigvals_only=True)
    for i, r in enumerate(roots):
        for _ in range(50):
            step = laguerre(m, beta, r) / laguerre_derivative(m, beta, r, 1)
            r -= step
            if abs(step) < 1e-14 * (1 + abs(r)):
                break
        roots[i] = r
    return np.sort(roots)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight ``x**alpha * exp(-x)`` on ``(0, inf)``.

    ``order`` is the requested node count.  Nodes whose weight underflows to
    zero in double precision are dropped, so ``len(nodes)`` can be smaller
    than ``order`` for large rules.
    """

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, values):
        """Sum ``weights * values`` along the first axis."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def _christoffel_log_weights(nodes, order, alpha):
    # 1/w_i = sum_{k<N} p_k(x_i)^2 with p_k orthonormal; the running
    # rescale keeps the recurrence finite far out in the tail.
    diag, off = _laguerre_jacobi_matrix(order, alpha)
    log_scale = np.zeros_like(nodes)
    prev = np.zeros_like(nodes)
    cur = np.full_like(nodes, math.exp(-0.5 * math.lgamma(alpha + 1.0)))
    total = cur**2
    for k in range(order - 1):
        nxt = ((nodes - diag[k]) * cur - (off[k - 1] if k else 0.0) * prev) / off[k]
        prev, cur = cur, nxt
        total = total + cur**2
        big = np.abs(cur) > 1e100
        if np.any(big):
            prev[big] *= 1e-100
            cur[big] *= 1e-100
            total[big] *= 1e-200
            log_scale[big] += 100 * math.log(10.0)
    return -(np.log(total) + 2.0 * log_scale)


@lru_cache(maxsize=256)
def _gauss_laguerre_cached(order, alpha):
    diag, off = _laguerre_jacobi_matrix(order, alpha)
    if order == 1:
        nodes = diag.copy()
    else:
        nodes = linalg.eigh_tridiagonal(diag, off, eigvals_only=True)
    with np.errstate(under="ignore"):
        weights = np.exp(_christoffel_log_weights(nodes, order, alpha))
    keep = weights > 0
    nodes = nodes[keep]
    weights = weights[keep]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(alpha=float(alpha), nodes=nodes, weights=weights, order=order)


def gauss_laguerre(order, alpha):
    """Golub-Welsch rule with ``order`` nodes for ``x**alpha exp(-x)``."""
    if order < 1:
        raise InvalidParams("quadrature order must be >= 1")
    if alpha <= -1:
        raise InvalidParams(f"Gauss-Laguerre needs alpha > -1, got {alpha}")
    return _gauss_laguerre_cached(int(order), float(alpha))


def adaptive_laguerre_integral(func, alpha, rtol=1e-12, start=16, cap=None):
    """Integrate ``func`` against ``x**alpha exp(-x)`` by doubling the rule.

    ``func`` maps the node array to values (the first axis indexes nodes;
    extra axes are allowed and integrated componentwise).  Stops when two
    successive results agree to ``rtol`` relative to their max-norm.

    Returns ``(value, order)``.
    """
    cap = quad_cap() if cap is None else cap
    order = min(start, cap)
    rule = gauss_laguerre(order, alpha)
    previous = rule.integrate(func(rule.nodes))
    while order < cap:
        order = min(2 * order, cap)
        rule = gauss_laguerre(order, alpha)
        current = rule.integrate(func(rule.nodes))
        scale = max(np.max(np.abs(current)), np.finfo(float).tiny)
        if np.max(np.abs(current - previous)) <= rtol * scale:
            return current, order
        previous = current
    raise QuadratureDivergence(
        f"integral did not stabilize to {rtol:g} within {cap} nodes", cap=cap
    )
