"""Generalized translation on finite spans of normalized eigenfunctions.

A span element is ``p(x) = sum_k a_k u_k(x)`` in the radial variable, where
``u_k(0) = 1``.  Translation acts diagonally,

    T_t p(x) = sum_k a_k u_k(x) u_k(t),

so ``T_t p`` is again a span element with coefficients ``a_k u_k(t)``.
Inner products and ``L^q`` norms are taken in the polynomial variable
``y = x**2`` against ``y**alpha dy``, matching ``sigma_k``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .exceptions import InvalidDomain, InvalidParams, QuadratureDivergence, UnsupportedFamily
from .specialfn import adaptive_laguerre_integral, gauss_laguerre
from .xlaguerre import (
    Kind,
    basis_matrix,
    denominator_coefficients,
    eigenfunction_u,
    numerator_coefficients,
    ratio_jet,
    tail_bound,
    u_jet,
)

#: Landau's uniform bound ``|J_nu(x)| <= c x**(-1/3)`` (valid for ``nu >= 0``).
LANDAU_CONSTANT = 0.7858


@dataclass(frozen=True, eq=False)
class SpanFunction:
    """Finite combination ``sum_k coeffs[k] * u_k`` over a family."""

    family: object
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size == 0:
            raise InvalidParams("a span needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidParams("span coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def unit(cls, family, k, n=None):
        n = k if n is None else n
        coeffs = np.zeros(n + 1)
        coeffs[k] = 1.0
        return cls(family, coeffs)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def evaluate(self, x):
        """Value at radial points ``x >= 0``."""
        x = np.asarray(x, dtype=float)
        out = self.coeffs @ basis_matrix(self.family, self.degree, x.ravel())
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    __call__ = evaluate

    def evaluate_poly(self, y):
        """Value at polynomial-variable points ``y = x**2``."""
        y = np.asarray(y, dtype=float)
        out = self.coeffs @ basis_matrix(self.family, self.degree, y.ravel(), variable="poly")
        return float(out[0]) if y.ndim == 0 else out.reshape(y.shape)

    def derivative(self, x):
        """First radial derivative."""
        x = np.asarray(x, dtype=float).ravel()
        total = np.zeros_like(x)
        for k, a in enumerate(self.coeffs):
            if a:
                total += a * u_jet(eigenfunction_u(self.family, k), x)[1]
        return total

    def __add__(self, other):
        size = max(self.coeffs.size, other.coeffs.size)
        return SpanFunction(self.family, _pad(self.coeffs, size) + _pad(other.coeffs, size))

    def __mul__(self, scalar):
        return SpanFunction(self.family, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)


def _pad(coeffs, size):
    out = np.zeros(size)
    out[: coeffs.size] = coeffs
    return out


def _check_span(sf):
    if not isinstance(sf, SpanFunction):
        raise InvalidParams("expected a SpanFunction")
    return sf


def _require_inner_products(family):
    if not family.has_polynomial_variable:
        raise UnsupportedFamily(
            "the Bessel system has no weighted inner product here; it is radial only"
        )


# polynomial-variable helpers -------------------------------------------------


def _poly_factor(sf, y):
    # G with p(y) = G(y) exp(-y/2)
    y = np.asarray(y, dtype=float)
    total = np.zeros_like(y)
    for k, a in enumerate(sf.coeffs):
        if a:
            ef = eigenfunction_u(sf.family, k)
            total += a * ef.c * ratio_jet(sf.family, k, y)[0]
    return total


def poly_factor(sf, y):
    """``G`` with ``p(y) = G(y) exp(-y/2)``; a rational function of ``y``."""
    _require_inner_products(sf.family)
    return _poly_factor(sf, y)


def numerator_polynomial(sf):
    """Ascending coefficients of ``S * G``; its positive roots are the sign changes."""
    _require_inner_products(sf.family)
    P = np.polynomial.polynomial
    total = np.zeros(1)
    for k, a in enumerate(sf.coeffs):
        if a:
            c = eigenfunction_u(sf.family, k).c
            total = P.polyadd(total, a * c * numerator_coefficients(sf.family, k))
    return total


def sign_changes(sf, tol=1e-10):
    """Positive roots of odd multiplicity of ``p`` in the polynomial variable.

    Candidates come from the companion matrix of the numerator and are then
    bracketed and polished with Brent's method on the span itself.
    """
    coef = np.trim_zeros(numerator_polynomial(sf), "b")
    if coef.size <= 1:
        return np.empty(0)
    candidates = np.polynomial.polynomial.polyroots(coef)
    real = candidates[np.abs(candidates.imag) <= 1e-6 * (1.0 + np.abs(candidates))].real
    real = np.sort(real[real > 0])
    den = denominator_coefficients(sf.family)

    def g(y):
        return np.polynomial.polynomial.polyval(y, coef) / np.polynomial.polynomial.polyval(y, den)

    roots = []
    for r in real:
        width = 1e-6 * (1.0 + r)
        for _ in range(30):
            a, b = max(r - width, 0.0), r + width
            if g(a) * g(b) < 0:
                roots.append(optimize.brentq(g, a, b, xtol=1e-15))
                break
            width *= 4.0
            if width > 0.5 * (1.0 + r):
                break
    roots = np.unique(np.round(np.asarray(roots), 13))
    if roots.size > 1:
        keep = np.concatenate([[True], np.diff(roots) > tol * (1.0 + roots[1:])])
        roots = roots[keep]
    return roots


def split_rule(alpha, beta, breaks=(), nodes=32, tail_nodes=96, power=0.0):
    """Nodes and weights for ``int_0^inf g(y) y**alpha exp(-beta y) dy``.

    With no break points this is Gauss-Laguerre scaled by ``beta``.  Break
    points (zeros of ``g``'s base function) split the half line into pieces
    on which ``g`` may behave like ``|y - break|**power`` at the ends.
    Gauss-Jacobi rules with that endpoint exponent are used on bounded
    pieces (and ``y**alpha`` at the origin), a generalized Gauss-Laguerre
    rule on the unbounded tail; the reference-variable endpoint factors are
    divided back out of the weights, so the rule stays spectrally accurate for such ``g``.
    """
    breaks = np.sort(np.asarray(breaks, dtype=float))
    breaks = breaks[breaks > 0]
    if breaks.size == 0:
        rule = gauss_laguerre(tail_nodes, alpha)
        return rule.nodes / beta, rule.weights * beta ** (-alpha - 1.0)
    g = float(power)
    ys, ws = [], []
    t, w = special.roots_jacobi(nodes, g, alpha)
    b0 = breaks[0]
    y = 0.5 * b0 * (1.0 + t)
    ys.append(y)
    ws.append(w * (0.5 * b0) ** (alpha + 1.0) * np.exp(-beta * y) * (1.0 - t) ** (-g))
    t, w = special.roots_jacobi(nodes, g, g)
    for a, b in zip(breaks[:-1], breaks[1:]):
        half = 0.5 * (b - a)
        y = 0.5 * (a + b) + half * t
        ys.append(y)
        ws.append(w * half * y**alpha * np.exp(-beta * y) * (1.0 - t * t) ** (-g))
    rule = gauss_laguerre(tail_nodes, g)
    last = breaks[-1]
    s_nodes = rule.nodes
    y = last + s_nodes / beta
    ys.append(y)
    ws.append(rule.weights / beta * y**alpha * math.exp(-beta * last) * s_nodes ** (-g))
    return np.concatenate(ys), np.concatenate(ws)


def inner(p, q, rtol=1e-12):
    """``<p, q> = int_0^inf p(y) q(y) y**alpha dy`` in the polynomial variable."""
    _require_inner_products(p.family)

    def integrand(y):
        return _poly_factor(p, y) * _poly_factor(q, y)

    value, _ = adaptive_laguerre_integral(integrand, p.family.alpha, rtol=rtol, start=32)
    return float(value)


def lq_norm(sf, q):
    """Weighted ``L^q`` norm, with the rule split at the sign changes of ``sf``."""
    _require_inner_products(sf.family)
    if q < 1:
        raise InvalidParams("q must be >= 1")
    breaks = sign_changes(sf) if q % 2 else ()
    y, w = split_rule(sf.family.alpha, q / 2.0, breaks, power=q - 1.0)
    return float(np.sum(w * np.abs(_poly_factor(sf, y)) ** q) ** (1.0 / q))


# projection ------------------------------------------------------------------


def project(family, f, n, rtol=1e-12, cap=None):
    """Orthogonal projection of ``f`` onto the degree-``n`` span.

    ``f`` is a function of the polynomial variable (or a :class:`SpanFunction`);
    it is sampled at ``2 s`` for Gauss-Laguerre nodes ``s`` so that it only
    needs to decay like ``exp(-y/2)``.  ``a_k = <f, u_k> / sigma_k**2``.
    """
    _require_inner_products(family)
    if n < 0:
        raise InvalidParams("degree must be nonnegative")
    if isinstance(f, SpanFunction):
        f = f.evaluate_poly
    efs = [eigenfunction_u(family, k) for k in range(n + 1)]

    def integrand(s):
        y = 2.0 * s
        fy = np.asarray(f(y), dtype=float)
        cols = [ef.c * ratio_jet(family, k, y)[0] for k, ef in enumerate(efs)]
        return fy[:, None] * np.stack(cols, axis=1)

    try:
        moments, _ = adaptive_laguerre_integral(integrand, family.alpha, rtol=rtol, cap=cap)
    except QuadratureDivergence as exc:
        raise QuadratureDivergence(f"projection failed: {exc}", n=n) from exc
    moments = moments * 2.0 ** (family.alpha + 1.0)
    sigma2 = np.array([ef.sigma2 for ef in efs])
    return SpanFunction(family, moments / sigma2)


def projection_residual(family, f, n, rtol=1e-12):
    """``||f - P_n f||`` in the weighted ``L^2`` norm (polynomial variable)."""
    sf = project(family, f, n, rtol=rtol)

    def integrand(s):
        # (f - P_n f)(2s) e^{s/2}, squared, against s**alpha e^{-s}
        diff = np.asarray(f(2.0 * s), dtype=float) - sf.evaluate_poly(2.0 * s)
        with np.errstate(over="ignore", invalid="ignore"):
            scaled = diff * np.exp(np.minimum(s / 2.0, 700.0))
        return np.where(diff == 0.0, 0.0, scaled) ** 2

    value, _ = adaptive_laguerre_integral(integrand, family.alpha, rtol=1e-10)
    return math.sqrt(max(float(value) * 2.0 ** (family.alpha + 1.0), 0.0))


# translation -----------------------------------------------------------------


def _check_nonneg(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0):
        raise InvalidDomain(f"{name} must be nonnegative")
    return arr


def translated(sf, t):
    """``T_t sf`` as a span element (coefficients ``a_k u_k(t)``)."""
    _check_span(sf)
    t = float(_check_nonneg("t", t))
    values = basis_matrix(sf.family, sf.degree, np.array([t]))[:, 0]
    return SpanFunction(sf.family, sf.coeffs * values)


def translate(sf, t, x):
    """``T_t sf(x) = sum_k a_k u_k(x) u_k(t)`` (radial ``x`` and ``t``)."""
    _check_span(sf)
    t = _check_nonneg("t", t)
    x = _check_nonneg("x", x)
    tb, xb = np.broadcast_arrays(t, x)
    ut = basis_matrix(sf.family, sf.degree, tb.ravel())
    ux = basis_matrix(sf.family, sf.degree, xb.ravel())
    out = np.einsum("k,ki,ki->i", sf.coeffs, ux, ut)
    return float(out[0]) if xb.ndim == 0 else out.reshape(xb.shape)


def bessel_gamma(alpha):
    """``Gamma(alpha+1) / (sqrt(pi) Gamma(alpha+1/2))``, so that ``T_t 1 = 1``."""
    return math.exp(math.lgamma(alpha + 1.0) - math.lgamma(alpha + 0.5)) / math.sqrt(math.pi)


def bessel_translate_closed(f, alpha, t, x, nodes=96):
    """Closed-form Bessel translation

        gamma(alpha) int_0^pi f(sqrt(t^2 + x^2 - 2 x t cos phi)) sin^{2 alpha} phi dphi.

    With ``s = cos phi`` the weight becomes ``(1 - s^2)**(alpha - 1/2)`` and a
    Gauss-Jacobi rule integrates it exactly, so no endpoint singularity is
    left for the quadrature to resolve.
    """
    if alpha <= -0.5:
        raise InvalidParams(f"closed-form Bessel translation needs alpha > -1/2, got {alpha}")
    t = _check_nonneg("t", t)
    x = _check_nonneg("x", x)
    tb, xb = np.broadcast_arrays(t, x)
    s, w = special.roots_jacobi(nodes, alpha - 0.5, alpha - 0.5)
    radius = np.sqrt(np.maximum(tb[..., None] ** 2 + xb[..., None] ** 2
                                - 2.0 * tb[..., None] * xb[..., None] * s, 0.0))
    values = np.asarray(f(radius), dtype=float)
    out = bessel_gamma(alpha) * (values @ w)
    return float(out) if out.ndim == 0 else out


def selfadjoint_check(family, p, q, t):
    """``|<T_t p, q> - <p, T_t q>|`` with both sides computed by quadrature."""
    _require_inner_products(family)
    left = inner(translated(p, t), q)
    right = inner(p, translated(q, t))
    return abs(left - right)


# sup norms -------------------------------------------------------------------


def bessel_envelope(alpha, z):
    """Upper bound for ``|j_alpha(z)|`` from Landau's inequality (``alpha >= 0``)."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        bound = (
            math.exp(math.lgamma(alpha + 1.0)) * 2.0**alpha * LANDAU_CONSTANT
            * z ** (-alpha - 1.0 / 3.0)
        )
    return np.minimum(bound, 1.0)


def span_tail_bound(sf, radius):
    """Bound for ``sum_k |a_k| |u_k(x)|`` over ``x >= radius``."""
    family = sf.family
    if family.kind is Kind.BESSEL:
        if family.alpha < 0:
            return float(np.sum(np.abs(sf.coeffs)))
        lam = np.asarray(family.lambdas[: sf.degree + 1])
        return float(np.sum(np.abs(sf.coeffs) * bessel_envelope(family.alpha, lam * radius)))
    y = radius**2
    total = 0.0
    for k, a in enumerate(sf.coeffs):
        if a:
            if y < 2 * k + 2:
                return float(np.sum(np.abs(sf.coeffs)))
            total += abs(a) * tail_bound(family, k, y)
    return total


def truncation_radius(sf, target, start=None, max_radius=1e4):
    """Smallest radius (by doubling) with ``span_tail_bound <= target``."""
    if start is None:
        start = math.sqrt(4.0 * sf.degree + 2.0 * abs(sf.family.alpha) + 16.0)
        if sf.family.kind is Kind.BESSEL:
            start = 2.0
    radius = start
    while span_tail_bound(sf, radius) > target:
        radius *= 1.25
        if radius > max_radius:
            from .exceptions import GridTooShort

            raise GridTooShort("no truncation radius meets the tail target", target=target)
    return radius


def refine_maxima_1d(func, grid, values, top=8, points=41, xtol=1e-11):
    """Polish the ``top`` largest grid local maxima of ``values``.

    ``func`` must be vectorized.  All candidates are refined together by
    repeated zooming: each pass samples ``points`` values across the current
    bracket and shrinks it around the best one.  Returns
    ``(best_value, best_point)``, never below the grid maximum.
    """
    n = values.size
    mask = np.ones(n, dtype=bool)
    mask[1:] &= values[1:] >= values[:-1]
    mask[:-1] &= values[:-1] >= values[1:]
    idx = np.flatnonzero(mask)
    idx = idx[np.argsort(-values[idx])][:top]
    best_i = int(np.argmax(values))
    best, where = float(values[best_i]), float(grid[best_i])
    lo = grid[np.maximum(idx - 1, 0)]
    hi = grid[np.minimum(idx + 1, n - 1)]
    frac = np.linspace(0.0, 1.0, points)
    while np.any(hi - lo > xtol * (1.0 + np.abs(hi))):
        xs = lo[:, None] + (hi - lo)[:, None] * frac
        vals = np.asarray(func(xs.ravel())).reshape(xs.shape)
        j = np.argmax(vals, axis=1)
        rows = np.arange(idx.size)
        top_vals = vals[rows, j]
        k = int(np.argmax(top_vals))
        # keep grid points unless the polish gains beyond round-off
        if top_vals[k] > best * (1.0 + 1e-15):
            best, where = float(top_vals[k]), float(xs[k, j[k]])
        width = (hi - lo) / (points - 1)
        centre = xs[rows, j]
        lo = np.maximum(centre - width, lo)
        hi = np.minimum(centre + width, hi)
    return best, where


class SpanGrid:
    """Basis values cached on a radial grid ``[0, radius]``.

    Used when many spans of one family are compared, e.g. in norm probes.
    """

    def __init__(self, family, degree, radius, step=0.01):
        self.family = family
        self.degree = degree
        self.grid = np.arange(0.0, radius + 0.5 * step, step)
        self.basis = basis_matrix(family, degree, self.grid)

    def sup(self, sf, rel_tail=1e-3):
        values = np.abs(sf.coeffs @ self.basis[: sf.degree + 1])
        best, where = refine_maxima_1d(lambda z: abs(sf.evaluate(z)), self.grid, values)
        tail = span_tail_bound(sf, self.grid[-1])
        if tail > rel_tail * best:
            return sup_norm(sf, rel_tail=rel_tail)
        return best, where, tail


def sup_norm(sf, step=0.01, rel_tail=1e-3):
    """``sup_{x >= 0} |sf(x)|`` with its argmax and the tail bound used.

    The grid runs to a radius where the span tail bound is below
    ``rel_tail`` times the running maximum; local maxima are refined.
    """
    at_zero = abs(sf.evaluate(0.0))
    radius = truncation_radius(sf, rel_tail * at_zero if at_zero else 1e-3)
    while True:
        grid = np.arange(0.0, radius + 0.5 * step, step)
        values = np.abs(sf.evaluate(grid))
        best, where = refine_maxima_1d(lambda z: abs(sf.evaluate(z)), grid, values)
        tail = span_tail_bound(sf, grid[-1])
        if tail <= rel_tail * best:
            return best, where, tail
        radius = truncation_radius(sf, rel_tail * best, start=radius)


# operator norm probes --------------------------------------------------------


@dataclass
class ProbeResult:
    value: float
    norm: str
    details: dict


def _random_span(family, degree, rng):
    return SpanFunction(family, rng.standard_normal(degree + 1))


def probe_radius(family, degree):
    """Radius past which every unit-coefficient span of this degree is negligible."""
    target = 1e-3 if family.kind is Kind.BESSEL else 1e-6
    return truncation_radius(SpanFunction(family, np.ones(degree + 1)), target)


def operator_norm_probe(family, t, norm="L2w", degree=8, trials=200, seed=0):
    """Estimate ``||T_t||`` on the degree-``degree`` span.

    ``L2w``: exact, ``max_k |u_k(t)|`` (the operator is diagonal in an
    orthogonal basis).  ``LInfSpan``: largest ratio
    ``||T_t p||_inf / ||p||_inf`` over random spans followed by coordinate
    ascent from the best one.  ``L1w``: duality; for random ``p`` the span
    element ``g`` with ``||g||_inf <= 1`` maximizing ``<T_t p, g>`` is found
    by linear programming on the grid, and the probe is
    ``<T_t p, g> / (||p||_1 ||g||_inf)`` with the refined sup of ``g``.
    The last two are lower bounds for a norm that should not exceed one.
    """
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    t = float(_check_nonneg("t", t))
    rng = np.random.default_rng(seed)
    values = basis_matrix(family, degree, np.array([t]))[:, 0]
    if norm == "L2w":
        k = int(np.argmax(np.abs(values)))
        return ProbeResult(float(abs(values[k])), norm, {"argmax_k": k, "t": t})
    if norm == "LInfSpan":
        return _probe_linf(family, t, degree, trials, rng)
    if norm == "L1w":
        _require_inner_products(family)
        return _probe_l1(family, t, degree, trials, rng)
    raise InvalidParams(f"unknown norm kind {norm!r}")


def _probe_linf(family, t, degree, trials, rng):
    cache = SpanGrid(family, degree, probe_radius(family, degree))

    def ratio(coeffs):
        sf = SpanFunction(family, coeffs)
        return cache.sup(translated(sf, t))[0] / cache.sup(sf)[0]

    samples = [rng.standard_normal(degree + 1) for _ in range(trials)]
    ratios = np.array([ratio(c) for c in samples])
    coeffs = samples[int(np.argmax(ratios))]
    value = float(ratios.max())
    ascent_steps = 0
    for scale in (0.5, 0.1):
        for k in range(degree + 1):
            for sign in (1.0, -1.0):
                trial = coeffs.copy()
                trial[k] += sign * scale * max(abs(coeffs[k]), 1.0)
                r = ratio(trial)
                ascent_steps += 1
                if r > value:
                    coeffs, value = trial, r
    return ProbeResult(value, "LInfSpan", {
        "trials": trials, "ascent_steps": ascent_steps,
        "max_random_ratio": float(ratios.max()), "t": t,
    })


def _probe_l1(family, t, degree, trials, rng):
    cache = SpanGrid(family, degree, probe_radius(family, degree), step=0.02)
    sigma2 = np.array([eigenfunction_u(family, k).sigma2 for k in range(degree + 1)])
    best, best_sup_ratio = -np.inf, None
    for _ in range(trials):
        p = _random_span(family, degree, rng)
        tp = translated(p, t)
        # <T_t p, g> = sum_k a_k u_k(t) b_k sigma_k^2 by orthogonality
        gradient = tp.coeffs * sigma2
        g = _dual_extremal(gradient, cache.basis)
        g_span = SpanFunction(family, g)
        g_sup = cache.sup(g_span)[0]
        pairing = inner(tp, g_span)
        ratio = pairing / (lq_norm(p, 1) * g_sup)
        if ratio > best:
            best, best_sup_ratio = ratio, pairing / lq_norm(tp, 1) / g_sup
    return ProbeResult(float(best), "L1w", {
        "trials": trials, "t": t, "dual_attainment": float(best_sup_ratio),
    })


def _dual_extremal(gradient, basis):
    # maximize gradient . b subject to |b @ basis| <= 1 on the grid
    a_ub = np.vstack([basis.T, -basis.T])
    b_ub = np.ones(a_ub.shape[0])
    res = optimize.linprog(-gradient, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * gradient.size,
                  method="highs")
    if res.status != 0:
        return gradient / np.max(np.abs(gradient @ basis))
    return res.x
