"""Nikol'skii point and sup constants on spans of normalized eigenfunctions.

For the degree-``n`` span and ``q >= 1``

    D_{n,q}(y) = sup |p(y)| / ||p||_q,      M_{n,q} = sup_y D_{n,q}(y),

with ``||p||_q**q = int_0^inf |p(y)|**q y**alpha dy`` in the polynomial
variable.  ``D`` is found from the convex problem
``min ||p||_q subject to p(y) = 1``; its minimizer, rescaled to unit norm, is
the extremal element.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .exceptions import InvalidParams, NoConvergence
from .translation import (
    SpanFunction,
    _require_inner_products,
    inner,
    refine_maxima_1d,
    sign_changes,
    split_rule,
)
from .xlaguerre import basis_matrix, eigenfunction_u, ratio_jet, tail_bound

IRLS_CLIP = 1e-12
IRLS_DAMPING = 0.5
ITERATION_CAP = 500
NEWTON_PASS_CAP = 60


@dataclass
class ExtremalResult:
    """Solution of the point problem at ``point``.

    ``coeffs`` define the extremal span element, normalized to unit ``L^q``
    norm and positive at ``point``; ``constant`` equals its value there.
    """

    q: float
    n: int
    point: float
    constant: float
    coeffs: np.ndarray
    argmax_point: float
    ortho_residual: float
    iterations: int
    family: object = field(repr=False, default=None)
    details: dict = field(default_factory=dict)

    @property
    def span(self):
        return SpanFunction(self.family, self.coeffs)


# -- closed form for q = 2 ------------------------------------------------------


def christoffel_D2(family, n, x):
    """``D_{n,2}(x) = sqrt(sum_k z_k(x)**2 / sigma_k**2)`` (polynomial variable)."""
    _require_inner_products(family)
    x = np.asarray(x, dtype=float)
    values = basis_matrix(family, n, x.ravel(), variable="poly")
    sigma2 = np.array([eigenfunction_u(family, k).sigma2 for k in range(n + 1)])
    out = np.sqrt(np.sum(values**2 / sigma2[:, None], axis=0))
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def christoffel_kernel(family, n, x=0.0):
    """Coefficients ``z_k(x) / sigma_k**2`` of the reproducing kernel at ``x``."""
    values = basis_matrix(family, n, np.array([float(x)]), variable="poly")[:, 0]
    sigma2 = np.array([eigenfunction_u(family, k).sigma2 for k in range(n + 1)])
    return SpanFunction(family, values / sigma2)


# -- discrete problem -------------------------------------------------------------


class _Discrete:
    """``min sum w |Phi b|**q`` subject to ``e . b = 1`` on a fixed rule."""

    def __init__(self, family, n, q, point, breaks=(), nodes=32, tail_nodes=96):
        self.q = q
        self.y, self.w = split_rule(family.alpha, q / 2.0, breaks, nodes, tail_nodes, power=q - 1.0)
        keep = self.w > 0
        self.y, self.w = self.y[keep], self.w[keep]
        c = np.array([eigenfunction_u(family, k).c for k in range(n + 1)])
        self.phi = np.stack([ratio_jet(family, k, self.y)[0] for k in range(n + 1)], axis=1) * c
        self.e = basis_matrix(family, n, np.array([point]), variable="poly")[:, 0]
        if not np.any(self.e):
            raise InvalidParams("every basis element vanishes at the point")
        self.b0 = self.e / (self.e @ self.e)
        # orthonormal basis of the constraint's null space
        _, _, vt = np.linalg.svd(self.e[None, :])
        self.null = vt[1:].T

    def objective(self, b):
        return float(np.sum(self.w * np.abs(self.phi @ b) ** self.q))

    def feasible(self, b):
        b = np.asarray(b, dtype=float)
        s = self.e @ b
        if abs(s) < 1e-8 * np.linalg.norm(b) * np.linalg.norm(self.e):
            return self.b0.copy()
        return b / s

    def irls(self, b, iterations):
        # weighted least squares with damped |r|^{q-2} weights
        omega = np.maximum(np.abs(self.phi @ b), IRLS_CLIP) ** (self.q - 2.0)
        previous = self.objective(b)
        done = 0
        for done in range(1, iterations + 1):
            gram = self.phi.T @ ((self.w * omega)[:, None] * self.phi)
            sol = np.linalg.solve(gram, self.e)
            b = sol / (self.e @ sol)
            new = np.maximum(np.abs(self.phi @ b), IRLS_CLIP) ** (self.q - 2.0)
            omega = IRLS_DAMPING * omega + (1.0 - IRLS_DAMPING) * new
            value = self.objective(b)
            if abs(previous - value) <= 1e-6 * value:
                break
            previous = value
        return b, done

    def newton(self, b, iterations):
        """Damped Newton in the null-space coordinates; returns ``(b, steps, converged)``."""
        q = self.q
        A = self.phi @ self.null
        if A.shape[1] == 0:
            return self.b0.copy(), 0, True
        z = self.null.T @ (b - self.b0)
        r0 = self.phi @ self.b0
        value = None
        for step in range(1, iterations + 1):
            r = r0 + A @ z
            mag = np.maximum(np.abs(r), 1e-300)
            value = np.sum(self.w * mag**q)
            grad = q * A.T @ (self.w * mag ** (q - 1.0) * np.sign(r))
            hess = q * (q - 1.0) * A.T @ ((self.w * mag ** (q - 2.0))[:, None] * A)
            try:
                d = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                d = -grad
            decrement = -(grad @ d)
            if decrement <= 1e-24 * value:
                return self.b0 + self.null @ z, step, True
            t = 1.0
            while t > 1e-12:
                trial = z + t * d
                if np.sum(self.w * np.abs(r0 + A @ trial) ** q) <= value - 1e-4 * t * decrement:
                    break
                t *= 0.5
            if t <= 1e-12:
                # no further descent at working precision
                return self.b0 + self.null @ z, step, decrement <= 1e-20 * value
            z = z + t * d
        return self.b0 + self.null @ z, iterations, False

    def linear_program(self):
        """``q = 1``: minimize ``sum w s`` with ``-s <= Phi b <= s`` and ``e . b = 1``."""
        m, k = self.phi.shape
        cost = np.concatenate([np.zeros(k), self.w])
        eye = np.eye(m)
        a_ub = np.block([[self.phi, -eye], [-self.phi, -eye]])
        a_eq = np.concatenate([self.e, np.zeros(m)])[None, :]
        res = optimize.linprog(cost, A_ub=a_ub, b_ub=np.zeros(2 * m), A_eq=a_eq, b_eq=[1.0],
                               bounds=[(None, None)] * k + [(0, None)] * m, method="highs")
        if res.status != 0:
            raise NoConvergence(f"linear program failed: {res.message}")
        return res.x[:k]

    def solve(self, b, cap):
        if self.q == 1:
            return self.linear_program(), 1, True
        if self.q == 2:
            gram = self.phi.T @ (self.w[:, None] * self.phi)
            sol = np.linalg.solve(gram, self.e)
            return sol / (self.e @ sol), 1, True
        b, used = self.irls(self.feasible(b), min(cap, 50))
        b, steps, ok = self.newton(b, max(min(cap - used, NEWTON_PASS_CAP), 1))
        return b, used + steps, ok


def _same_breaks(a, b, tol=1e-10):
    return a.size == b.size and (a.size == 0 or np.max(np.abs(a - b) / (1.0 + np.abs(b))) < tol)


def _solve_point(family, n, q, point, start=None, max_outer=12):
    """Minimizer of the discretized problem with break points at its own sign changes."""
    iterations = 0
    breaks = np.empty(0)
    b = np.zeros(n + 1) if start is None else np.asarray(start, dtype=float)
    # even q gives a smooth integrand; q = 1 has vertex minimizers whose sign
    # changes sit on nodes, so one pass on a large fixed rule is used there
    single = (float(q).is_integer() and int(q) % 2 == 0) or q == 1
    converged = True
    for outer in range(max_outer):
        if single:
            tail = 256 if q == 1 else 160
        else:
            tail = 96 if breaks.size else 160
        problem = _Discrete(family, n, q, point, breaks, tail_nodes=tail)
        b, used, ok = problem.solve(b if np.any(b) else problem.b0, ITERATION_CAP - iterations)
        iterations += used
        converged = ok
        if single:
            break
        new = sign_changes(SpanFunction(family, b))
        if outer > 0 and _same_breaks(new, breaks):
            break
        breaks = new
        if iterations >= ITERATION_CAP:
            converged = False
            break
    else:
        converged = False
    return b, problem, iterations, converged, breaks


def point_constant(family, n, q, point=0.0, start=None, seed=None, raise_on_failure=True):
    """``D_{n,q}(point)`` and the extremal element.

    ``q = 2`` solves the normal equations, ``q = 1`` a linear program, other
    ``q`` damped IRLS followed by Newton's method.  The quadrature is split
    at the sign changes of the current iterate and the problem re-solved
    until they stop moving, so ``|p|**q`` is smooth on every piece.

    ``start='random'`` starts from a random coefficient vector drawn with
    ``seed`` (used to test uniqueness of the minimizer).
    """
    _require_inner_products(family)
    if q < 1:
        raise InvalidParams(f"q must be >= 1, got {q}")
    if n < 0:
        raise InvalidParams("degree must be nonnegative")
    if point < 0:
        raise InvalidParams("point must be nonnegative")
    if isinstance(start, str):
        if start != "random":
            raise InvalidParams(f"unknown start {start!r}")
        start = np.random.default_rng(seed).standard_normal(n + 1)
    b, problem, iterations, converged, breaks = _solve_point(family, n, q, float(point), start)
    norm = problem.objective(b) ** (1.0 / q)
    coeffs = b / norm
    span = SpanFunction(family, coeffs)
    constant = float(problem.e @ coeffs)
    argmax, sup = _span_argmax(span)
    residual = arestov_residual(family, span, q, point)
    result = ExtremalResult(
        q=float(q), n=n, point=float(point), constant=constant, coeffs=coeffs,
        argmax_point=argmax, ortho_residual=residual, iterations=iterations, family=family,
        details={"sup": sup, "breaks": breaks.tolist(), "nodes": int(problem.y.size)},
    )
    if not converged and raise_on_failure:
        raise NoConvergence(f"optimizer did not converge in {ITERATION_CAP} iterations",
                            best=result)
    return result


def _span_argmax(span, step=0.01):
    # sup of |p| in the polynomial variable; the envelope bounds the rest
    n = span.degree
    y_max = 4.0 * n + 8.0 * span.family.alpha + 40.0
    grid = np.arange(0.0, y_max + 0.5 * step, step)
    values = np.abs(span.evaluate_poly(grid))
    best, where = refine_maxima_1d(lambda s: np.abs(span.evaluate_poly(s)), grid, values)
    tail = sum(abs(a) * tail_bound(span.family, k, y_max) for k, a in enumerate(span.coeffs))
    if tail >= best:
        return float("nan"), float("nan")
    return where, best


# -- sup constant ---------------------------------------------------------------------


def _sweep(family, n, q, points):
    """Point constants on a fixed Gauss-Laguerre rule, warm-started along ``points``."""
    values = np.empty(points.size)
    b = None
    rule = None
    for i, y in enumerate(points):
        problem = _Discrete(family, n, q, float(y), tail_nodes=160)
        if rule is None:
            rule = problem
        start = problem.b0 if b is None else problem.feasible(b)
        b, _, _ = problem.solve(start, ITERATION_CAP)
        values[i] = 1.0 / problem.objective(b) ** (1.0 / q)
    return values


def sup_constant(family, n, q, grid=None, refine=True):
    """``M_{n,q} = max_y D_{n,q}(y)`` and the maximizing point.

    ``grid`` defaults to ``[0, 4n + 2 alpha + 20]`` with step 0.1.  For
    ``q = 2`` the closed form is used throughout.  Otherwise a warm-started
    sweep on a fixed rule locates the best points, a decade finer grid
    refines around them, and the leading candidates (always including the
    grid maximum) are recomputed with :func:`point_constant`.
    """
    _require_inner_products(family)
    if grid is None:
        grid = np.arange(0.0, 4.0 * n + 2.0 * family.alpha + 20.0 + 1e-9, 0.1)
    grid = np.asarray(grid, dtype=float)
    if q == 2:
        values = christoffel_D2(family, n, grid)
        k = int(np.argmax(values))
        if refine and 0 < k < grid.size - 1:
            fine = np.linspace(grid[k - 1], grid[k + 1], 21)
            fine_values = christoffel_D2(family, n, fine)
            j = int(np.argmax(fine_values))
            if fine_values[j] > values[k]:
                return float(fine_values[j]), float(fine[j])
        return float(values[k]), float(grid[k])

    values = _sweep(family, n, q, grid)
    order = np.argsort(-values)[:3]
    candidates = {float(grid[i]) for i in order}
    if refine:
        k = int(order[0])
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
        fine = np.linspace(lo, hi, 21)
        fine_values = _sweep(family, n, q, fine)
        candidates.add(float(fine[int(np.argmax(fine_values))]))
    best, where = -np.inf, None
    for y in sorted(candidates):
        value = point_constant(family, n, q, y, raise_on_failure=False).constant
        if value > best:
            best, where = value, y
    return float(best), float(where)


# -- Arestov characterization -----------------------------------------------------


def vanishing_basis(family, n, point=0.0):
    """Span elements ``z_k - (z_k(point)/z_0(point)) z_0``, ``k = 1..n``, all zero at ``point``."""
    e = basis_matrix(family, n, np.array([float(point)]), variable="poly")[:, 0]
    out = []
    for k in range(1, n + 1):
        coeffs = np.zeros(n + 1)
        coeffs[k] = 1.0
        coeffs[0] = -e[k] / e[0]
        out.append(SpanFunction(family, coeffs))
    return out


def arestov_residual(family, extremal, q, point=0.0):
    """Largest ``|int |rho|**(q-1) sign(rho) p y**alpha dy| / ||p||_2`` over a basis
    of span elements vanishing at ``point``.

    Zero exactly when ``extremal`` solves the point problem.  The integral is
    split at the sign changes of ``extremal`` and uses a finer rule than the
    optimizer.
    """
    _require_inner_products(family)
    if q < 1:
        raise InvalidParams("q must be >= 1")
    basis = vanishing_basis(family, extremal.degree, point)
    if not basis:
        return 0.0
    breaks = sign_changes(extremal)
    y, w = split_rule(family.alpha, q / 2.0, breaks, nodes=48, tail_nodes=128, power=q - 1.0)
    c = np.array([eigenfunction_u(family, k).c for k in range(extremal.degree + 1)])
    phi = np.stack([ratio_jet(family, k, y)[0] for k in range(extremal.degree + 1)], axis=1) * c
    rho = phi @ extremal.coeffs
    if q == 1:
        kernel = np.sign(rho)
    else:
        kernel = np.abs(rho) ** (q - 1.0) * np.sign(rho)
    worst = 0.0
    for p in basis:
        value = np.sum(w * kernel * (phi @ p.coeffs))
        worst = max(worst, abs(value) / math.sqrt(inner(p, p)))
    return float(worst)
