"""The singular hyperbolic problem behind generalized translation.

    L u = u_xx - u_tt + q(x) u_x - q(t) u_t - r(x, t) u = 0,   q(x) = (2a+1)/x,

with ``r(x, t) = r(x) - r(t)`` built from the radial potential of a family.
Product solutions ``u_n(x) u_n(t)`` and their finite sums solve it; the
maximum principle says their sup over the quadrant is the sup on ``t = 0``.

This module holds the potentials, the positivity certificate for ``r`` on
``0 < t < x``, the auxiliary function ``v = x**(1+a) t**(1+a)``, product
residuals and the maximum principle verifier.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, optimize

from .certificates import Certificate
from .exceptions import GridTooShort, InvalidDomain, InvalidParams
from .translation import span_tail_bound, sup_norm, truncation_radius
from .xlaguerre import Kind, XFamily, basis_matrix, denominator_jet, eigenfunction_u, u_jet
from .xlaguerre import radial_potential as _radial_potential


# -- potentials -----------------------------------------------------------------


def _positive(name, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidDomain(f"{name} must be positive (the axes are singular)")
    return x


def r_radial(family, x):
    """Radial potential ``r(x)``; ``r(x, t) = r(x) - r(t)``.

    Zero for the Bessel family, ``x**2`` for classical Laguerre.
    """
    x = _positive("x", x)
    return _radial_potential(family, x)


@dataclass(frozen=True)
class PotentialSpec:
    """Coefficients of the hyperbolic operator attached to a family."""

    family: XFamily

    @property
    def r_kind(self):
        return {Kind.BESSEL: "zero", Kind.CLASSICAL: "quadratic"}.get(self.family.kind, "exceptional")

    def q(self, x):
        return (2 * self.family.alpha + 1) / _positive("x", x)

    def q_prime(self, x):
        return -(2 * self.family.alpha + 1) / _positive("x", x) ** 2

    def r(self, x, t):
        return r_radial(self.family, x) - r_radial(self.family, t)

    def k(self, x, t):
        return self.q_prime(x) - self.q_prime(t)

    def h(self, x, t):
        return self.k(x, t) + self.r(x, t)


# -- the function g and its derivative ----------------------------------------------


def g_function(m, alpha, y):
    """``g(y) = y + 4(2a-1+2y) S'/S + 8 y (S'/S)**2`` so that ``r(x) = g(x**2) - 4m``."""
    family = XFamily.type_i(m, alpha)
    y = np.asarray(y, dtype=float)
    s0, s1, _ = denominator_jet(family, y)
    d = s1 / s0
    return y + 4 * (2 * alpha - 1 + 2 * y) * d + 8 * y * d * d


def _sums(m, alpha, y):
    xi = np.asarray(XFamily.type_i(m, alpha).xi)
    y = np.asarray(y, dtype=float)
    return xi, 1.0 / (y[..., None] + xi)


def gprime(m, alpha, y):
    """Exact derivative of :func:`g`:

        g'(y) = 1 - 4 sum 1/(y+xi_i)**2 + 16 sum xi_i/(y+xi_i)**3,

    where ``-xi_i`` are the roots of ``S``.
    """
    xi, inv = _sums(m, alpha, y)
    return 1.0 + np.sum(-4.0 * inv**2 + 16.0 * xi * inv**3, axis=-1)


def gprime_F(m, alpha, y):
    """Expanded sufficient-condition expression:

        1 + 4(4(m-1) - 9 + 2a) sum 1/(y+xi)**2 - 8 sum xi/(y+xi)**2 + 16 sum xi/(y+xi)**3.

    It does not coincide with :func:`gprime` (compare at ``m = 1``); kept for
    reporting only.
    """
    xi, inv = _sums(m, alpha, y)
    c = 4.0 * (4 * (m - 1) - 9 + 2 * alpha)
    return 1.0 + np.sum((c - 8.0 * xi) * inv**2 + 16.0 * xi * inv**3, axis=-1)


def _condition_coefficients(m, alpha, condition):
    xi = np.asarray(XFamily.type_i(m, alpha).xi)
    if condition == "derivative":
        quad = np.full_like(xi, -4.0)
    elif condition == "expanded":
        quad = 4.0 * (4 * (m - 1) - 9 + 2 * alpha) - 8.0 * xi
    else:
        raise InvalidParams(f"unknown condition {condition!r}")
    return xi, quad, 16.0 * xi


def positivity_certify(m, alpha, x_max=None, grid_step=0.01, condition="derivative"):
    """Certify ``g' > 0`` on ``[0, inf)``, hence ``r(x, t) > 0`` for ``0 < t < x``.

    Both supported expressions have the shape
    ``1 + sum A_i/(y+xi_i)**2 + B_i/(y+xi_i)**3`` with ``xi_i > 0``, so
    ``|g''| <= sum 2|A_i|/(y+xi_i)**3 + 3|B_i|/(y+xi_i)**4`` decreases in ``y``.
    On each grid cell ``[a, b]`` the minimum is at least
    ``(g'(a) + g'(b))/2 - L(a) (b - a)/2``.  Past ``x_max`` every term is
    monotone, giving ``g' >= 1 - sum max(0, -A_i)/(x_max+xi_i)**2``.

    ``x_max`` defaults to the point where that tail margin reaches 1/2.
    ``condition`` selects the exact derivative (default) or the expanded
    expression of :func:`gprime_F`.
    """
    if alpha <= 0:
        raise InvalidParams(f"positivity certificate needs alpha > 0, got {alpha}")
    if grid_step <= 0:
        raise InvalidParams("grid step must be positive")
    xi, A, B = _condition_coefficients(m, alpha, condition)
    negative = np.maximum(0.0, -A)
    if x_max is None:
        x_max = max(10.0, math.sqrt(2.0 * negative.sum()))
    tail_margin = 1.0 - float(np.sum(negative / (x_max + xi) ** 2))

    y = np.arange(0.0, x_max + 0.5 * grid_step, grid_step)
    inv = 1.0 / (y[:, None] + xi)
    values = 1.0 + np.sum(A * inv**2 + B * inv**3, axis=1)
    lipschitz = np.sum(2 * np.abs(A) * inv**3 + 3 * np.abs(B) * inv**4, axis=1)
    h = np.diff(y)
    lower = 0.5 * (values[:-1] + values[1:]) - 0.5 * lipschitz[:-1] * h
    i = int(np.argmin(lower))
    if lower[i] <= tail_margin:
        margin, witness = float(lower[i]), (float(y[i]), float(y[i + 1]))
    else:
        margin, witness = tail_margin, (float(x_max), math.inf)
    grid_min = int(np.argmin(values))
    return Certificate.from_margin(
        margin, witness, f"grid step {grid_step:g} with cell derivative bound, analytic tail",
        m=m, alpha=alpha, x_max=float(x_max), condition=condition,
        tail_margin=tail_margin, grid_min=float(values[grid_min]),
        grid_argmin=float(y[grid_min]), cells=int(h.size),
    )


def triangle_recheck(family, x_max=10.0, points=200):
    """Smallest ``r(x, t) / (x - t)`` over grid points with ``0 < t < x``.

    A direct check of the sign of ``r`` that does not use ``g'``.
    """
    x = np.linspace(x_max / points, x_max, points)
    rad = r_radial(family, x)
    diff = rad[:, None] - rad[None, :]
    gap = x[:, None] - x[None, :]
    mask = gap > 0
    ratio = diff[mask] / gap[mask]
    k = int(np.argmin(ratio))
    xs, ts = np.nonzero(mask)
    return float(ratio[k]), (float(x[xs[k]]), float(x[ts[k]]))


# -- auxiliary function v ---------------------------------------------------------


def v_jet(alpha, x, t):
    """``v = (x t)**(1+a)`` with its first and second partial derivatives."""
    p = 1.0 + alpha
    v = (x * t) ** p
    return {
        "v": v,
        "v_x": p * v / x,
        "v_t": p * v / t,
        "v_xx": p * alpha * v / x**2,
        "v_tt": p * alpha * v / t**2,
    }


def v_conditions(alpha, x, t):
    """Direct evaluations of the auxiliary-function expressions and their scales."""
    x = _positive("x", x)
    t = _positive("t", t)
    d = v_jet(alpha, x, t)
    c = 2 * alpha + 1
    qx, qt = c / x, c / t
    kk = -c / x**2 + c / t**2
    terms_l1 = [d["v_xx"], -d["v_tt"], -qx * d["v_x"], qt * d["v_t"], -kk * d["v"]]
    plus = [2 * d["v_t"], 2 * d["v_x"], -d["v"] * qt, -d["v"] * qx]
    minus = [2 * d["v_t"], -2 * d["v_x"], -d["v"] * qt, d["v"] * qx]
    initial = [qt * d["v"], -d["v_t"]]
    out = {}
    for name, terms in (("L1v", terms_l1), ("edge_plus", plus), ("edge_minus", minus),
                        ("initial", initial)):
        out[name] = (sum(terms), sum(np.abs(term) for term in terms))
    out["v"] = (d["v"], d["v"])
    return out


def v_closed_forms(alpha, x, t):
    """The closed forms of the same expressions."""
    v = (x * t) ** (1.0 + alpha)
    return {
        "L1v": alpha**2 * v * (1 / t**2 - 1 / x**2),
        "edge_plus": v * (1 / t + 1 / x),
        "edge_minus": v * (1 / t - 1 / x),
        "initial": v * alpha / t,
    }


def v_certificate(alpha, region=(10.0, 100), m0probe=(1e-1, 1e-2, 1e-3, 1e-4)):
    """Check the auxiliary-function hypotheses for ``v = (x t)**(1+a)``.

    ``region = (x_max, points)`` gives an equispaced lower-triangle grid.
    Positivity of ``v``, of ``L^1 v`` and of both characteristic-edge
    expressions is checked there; ``q(t) v - v_t`` is checked on the lines
    ``t`` in ``m0probe``.  Each expression is also compared with its closed
    form.  The margin is the smallest expression divided by its scale, with
    values within round-off of zero counted as zero.
    """
    x_max, points = region
    if alpha <= -1:
        raise InvalidParams("alpha must exceed -1")
    grid = np.linspace(x_max / points, x_max, points)
    X, T = np.meshgrid(grid, grid, indexing="ij")
    mask = T < X
    x, t = X[mask], T[mask]
    direct = v_conditions(alpha, x, t)
    closed = v_closed_forms(alpha, x, t)
    identity = {}
    for name, value in closed.items():
        value_direct, scale = direct[name]
        identity[name] = float(np.max(np.abs(value_direct - value) / scale))

    xl = np.concatenate([grid[grid > s] for s in m0probe])
    tl = np.concatenate([np.full(np.sum(grid > s), s) for s in m0probe])
    line = v_conditions(alpha, xl, tl)
    identity["initial"] = float(np.max(np.abs(line["initial"][0] - v_closed_forms(alpha, xl, tl)["initial"])
                                       / line["initial"][1]))

    margins, witnesses = {}, {}
    for name, (pts_x, pts_t, data) in {
        "v": (x, t, direct["v"]), "L1v": (x, t, direct["L1v"]),
        "edge_plus": (x, t, direct["edge_plus"]), "edge_minus": (x, t, direct["edge_minus"]),
        "initial": (xl, tl, line["initial"]),
    }.items():
        value, scale = data
        rel = value / scale
        rel = np.where(np.abs(rel) < 1e-12, 0.0, rel)
        k = int(np.argmin(rel))
        margins[name] = float(rel[k])
        witnesses[name] = (float(pts_x[k]), float(pts_t[k]))
    worst = min(margins, key=margins.get)
    return Certificate.from_margin(
        margins[worst], witnesses[worst], "analytic derivatives of v on lower-triangle grid",
        alpha=alpha, weakest=worst, margins=margins, identity_error=identity,
        grid_points=int(mask.sum()), m0probe=list(m0probe),
    )


# -- product solutions ------------------------------------------------------------


def pde_residual_product(family, n, x, t, path="analytic"):
    """Relative residual of ``L`` applied to ``u_n(x) u_n(t)``.

    ``path='analytic'`` uses analytic second derivatives; ``path='substituted'``
    replaces them with ``-q u' + r u + lambda u`` from the eigen-equation, so
    it vanishes up to round-off by construction.
    """
    x = _positive("x", x)
    t = _positive("t", t)
    ef = eigenfunction_u(family, n)
    ux, ux1, ux2 = u_jet(ef, x)
    ut, ut1, ut2 = u_jet(ef, t)
    c = 2 * family.alpha + 1
    qx, qt = c / x, c / t
    rx, rt = _radial_potential(family, x), _radial_potential(family, t)
    if path == "substituted":
        lam = family.eigenvalue(n)
        ux2 = -qx * ux1 + rx * ux + lam * ux
        ut2 = -qt * ut1 + rt * ut + lam * ut
    elif path != "analytic":
        raise InvalidParams(f"unknown path {path!r}")
    terms = [ux2 * ut, -ux * ut2, qx * ux1 * ut, -qt * ux * ut1, -(rx - rt) * ux * ut]
    res = sum(terms)
    scale = sum(np.abs(term) for term in terms)
    out = res / np.maximum(scale, np.finfo(float).tiny)
    return float(out) if np.ndim(out) == 0 else out


# -- maximum principle ------------------------------------------------------------------


def hypothesis_certificate(family):
    """Certificate that ``r(x, t) >= 0`` on ``0 < t < x`` for the family."""
    if family.kind is Kind.BESSEL:
        return Certificate.from_margin(math.inf, None, "r vanishes identically")
    if family.kind is Kind.CLASSICAL:
        return Certificate.from_margin(math.inf, None, "r(x, t) = x^2 - t^2")
    # type II with m = 1 has the same potential as type I with m = 1
    return positivity_certify(family.m, family.alpha)


def _quadrant_value(coeffs, family, point):
    x, t = point
    ux = np.array([u_jet(eigenfunction_u(family, k), np.array([x])) for k in range(coeffs.size)])
    ut = np.array([u_jet(eigenfunction_u(family, k), np.array([t])) for k in range(coeffs.size)])
    value = np.sum(coeffs * ux[:, 0, 0] * ut[:, 0, 0])
    gx = np.sum(coeffs * ux[:, 1, 0] * ut[:, 0, 0])
    gt = np.sum(coeffs * ux[:, 0, 0] * ut[:, 1, 0])
    return value, np.array([gx, gt])


def max_principle_verify(sf, region=None, grid_step=0.05, top=8):
    """Compare the sup of ``u(x, t) = sum a_k u_k(x) u_k(t)`` with the sup of ``sf``.

    ``S_axis`` is the refined sup of ``|sf|`` on the half line.  ``S_quad`` is
    the grid max of ``|u|`` on ``[0, R]^2`` polished at the ``top`` largest
    local maxima by bounded L-BFGS-B.  Beyond ``R`` the bound
    ``|u| <= sum |a_k| |u_k(x)|`` holds since ``|u_k| <= 1``; ``R`` is chosen
    so it is below ``1e-3 S_axis`` (Gaussian envelope) or, for the Bessel
    system whose decay is only algebraic, below ``S_axis / 2``.  ``region``
    fixes ``R`` instead.

    Passes iff ``S_axis (1 - 1e-6) <= S_quad <= S_axis (1 + 1e-8)``.
    """
    family = sf.family
    hypothesis = hypothesis_certificate(family)
    s_axis, axis_arg, axis_tail = sup_norm(sf)
    factor = 0.5 if family.kind is Kind.BESSEL else 1e-3
    if region is None:
        radius = truncation_radius(sf, factor * s_axis)
    else:
        radius = float(region)
    tail = span_tail_bound(sf, radius)
    if not tail < s_axis:
        raise GridTooShort(f"tail bound {tail:g} past R={radius:g} does not undercut {s_axis:g}",
                           tail_bound=tail)
    grid = np.arange(0.0, radius + 0.5 * grid_step, grid_step)
    U = basis_matrix(family, sf.degree, grid)
    u = U.T @ (sf.coeffs[:, None] * U)
    mag = np.abs(u)
    i, j = np.unravel_index(int(np.argmax(mag)), mag.shape)
    s_quad, where = float(mag[i, j]), (float(grid[i]), float(grid[j]))

    peaks = (mag == ndimage.maximum_filter(mag, size=3)) & np.triu(np.ones_like(mag, dtype=bool))
    cand = np.argwhere(peaks)
    cand = cand[np.argsort(-mag[peaks])][:top]
    for ci, cj in cand:
        sign = 1.0 if u[ci, cj] >= 0 else -1.0
        bounds = [(max(grid[ci] - grid_step, 0.0), min(grid[ci] + grid_step, radius)),
                  (max(grid[cj] - grid_step, 0.0), min(grid[cj] + grid_step, radius))]

        def objective(p):
            value, grad = _quadrant_value(sf.coeffs, family, p)
            return -sign * value, -sign * grad

        res = optimize.minimize(objective, x0=[grid[ci], grid[cj]], jac=True, method="L-BFGS-B",
                                bounds=bounds, options={"ftol": 1e-15, "gtol": 1e-12})
        if -res.fun > s_quad:
            s_quad, where = float(-res.fun), (float(res.x[0]), float(res.x[1]))

    upper = s_axis * (1 + 1e-8) - s_quad
    lower = s_quad - s_axis * (1 - 1e-6)
    margin = min(upper, lower) / s_axis
    method = "grid %g with L-BFGS-B polish" % grid_step
    if not hypothesis.passed:
        method += "; hypothesis unverified"
    return Certificate.from_margin(
        margin, where, method,
        s_axis=s_axis, s_quad=s_quad, axis_argmax=axis_arg, radius=radius, tail_bound=tail,
        axis_tail_bound=axis_tail, hypothesis=hypothesis.passed,
        symmetry_error=float(np.max(np.abs(u - u.T))),
    )


def nonnegativity_check(sf, radius=None, grid_step=0.05):
    """Minimum of ``u(x, t)`` on ``[0, R]^2`` next to the minimum of ``sf`` on ``[0, R]``.

    For the Bessel system the map ``sf -> u`` is positive, so nonnegative
    initial data must give a nonnegative ``u``.
    """
    if radius is None:
        radius = truncation_radius(sf, 0.5 * sup_norm(sf)[0])
    grid = np.arange(0.0, radius + 0.5 * grid_step, grid_step)
    U = basis_matrix(sf.family, sf.degree, grid)
    u = U.T @ (sf.coeffs[:, None] * U)
    return float(np.min(sf.coeffs @ U)), float(np.min(u)), float(np.max(np.abs(u)))


__all__ = [
    "PotentialSpec",
    "g_function",
    "gprime",
    "gprime_F",
    "hypothesis_certificate",
    "max_principle_verify",
    "nonnegativity_check",
    "pde_residual_product",
    "positivity_certify",
    "r_radial",
    "triangle_recheck",
    "v_certificate",
    "v_closed_forms",
    "v_conditions",
    "v_jet",
]
