"""Reference values computed without the package, in extended precision.

Everything here uses mpmath only: explicit power series, hand-expanded
closed forms, high-precision finite differences and direct optimization.
"""

import mpmath as mp

mp.mp.dps = 40


def laguerre_series(n, a, x):
    """``L_n^{(a)}(x) = sum_j (-1)^j binom(n+a, n-j) x^j / j!``."""
    if n < 0:
        return mp.mpf(0)
    a, x = mp.mpf(a), mp.mpf(x)
    return mp.fsum((-1) ** j * mp.binomial(n + a, n - j) * x**j / mp.factorial(j) for j in range(n + 1))


def bessel_series(a, z, terms=200):
    """``j_a(z) = Gamma(a+1) sum_k (-z^2/4)^k / (k! Gamma(k+a+1))``."""
    a, z = mp.mpf(a), mp.mpf(z)
    s = -(z * z) / 4
    return mp.gamma(a + 1) * mp.fsum(s**k / (mp.factorial(k) * mp.gamma(k + a + 1)) for k in range(terms))


def central_second_difference(f, x, h=mp.mpf("1e-12")):
    x = mp.mpf(x)
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def central_difference(f, x, h=mp.mpf("1e-15")):
    x = mp.mpf(x)
    return (f(x + h) - f(x - h)) / (2 * h)


def laguerre_moment(power, a):
    """``int_0^inf x^power x^a e^-x dx`` as a Gamma value."""
    return mp.gamma(power + a + 1)


def type_i_ratio(m, n, a, y):
    """``L_n^{(a)}(y) + L_{m-1}^{(a)}(-y)/L_m^{(a-1)}(-y) L_n^{(a-1)}(y)``."""
    return laguerre_series(n, a, y) + laguerre_series(m - 1, a, -y) / laguerre_series(m, a - 1, -y) * laguerre_series(n, a - 1, y)


def type_i_ratio_at_zero(m, n, a):
    return mp.binomial(n + a, n) + mp.binomial(m - 1 + a, m - 1) / mp.binomial(m + a - 1, m) * mp.binomial(n + a - 1, n)


def type_i_polynomial(m, n, a, y):
    return laguerre_series(m, a, -y) * laguerre_series(n, a, y) - laguerre_series(m - 1, a, -y) * laguerre_series(n - 1, a, y)


def type_i_ode_defect(m, n, a, y):
    """Equation residual of the product-form polynomial, derivatives by finite differences."""
    p = lambda s: type_i_polynomial(m, n, a, s)
    S = lambda s: laguerre_series(m, a - 1, -s)
    y = mp.mpf(y)
    d = central_difference(S, y) / S(y)
    p1 = central_difference(p, y)
    p2 = central_second_difference(p, y)
    return y * p2 + (a + 1 - y - 2 * y * d) * p1 + (n + m - 2 * a * d) * p(y)


def type_ii_weighted_m1(n, a, y):
    a, y = mp.mpf(a), mp.mpf(y)
    return mp.exp(-y / 2) * (-y * laguerre_series(n - 1, a + 2, y) + a * (1 + 1 / (y + a)) * laguerre_series(n, a + 1, y))


def type_i_m1_u0(a, x):
    """Normalized ``u_0`` for ``m = 1``: ``c_0 (y+a+1)/(y+a) e^{-y/2}``, ``c_0 = a/(a+1)``."""
    a, y = mp.mpf(a), mp.mpf(x) ** 2
    return a / (a + 1) * (y + a + 1) / (y + a) * mp.exp(-y / 2)


def g_m1(a, y):
    """Radial potential plus ``4m`` for ``m = 1`` where ``S = y + a``."""
    a, y = mp.mpf(a), mp.mpf(y)
    d = 1 / (y + a)
    return y + 4 * (2 * a - 1 + 2 * y) * d + 8 * y * d * d


def g_general(m, a, y):
    S = lambda s: laguerre_series(m, a - 1, -s)
    y = mp.mpf(y)
    d = mp.diff(S, y) / S(y)
    return y + 4 * (2 * a - 1 + 2 * y) * d + 8 * y * d * d


def gprime_numeric(m, a, y):
    return mp.diff(lambda s: g_general(m, a, s), mp.mpf(y))


def radial_potential_m1(a, x):
    """``r(x) = y + 4(a - 1 + y) S'/S - 4 y S''/S + 8 y (S'/S)^2`` with ``S = y + a``, ``y = x^2``."""
    a, y = mp.mpf(a), mp.mpf(x) ** 2
    d = 1 / (y + a)
    return y + 4 * (a - 1 + y) * d + 8 * y * d * d


def v_edge_plus(a, x, t):
    """``2(v_t + v_x) - v(q(t) + q(x))`` with ``v = (xt)^{1+a}``, ``q(s) = (2a+1)/s``."""
    a, x, t = mp.mpf(a), mp.mpf(x), mp.mpf(t)
    v = lambda xx, tt: (xx * tt) ** (1 + a)
    vx = mp.diff(lambda s: v(s, t), x)
    vt = mp.diff(lambda s: v(x, s), t)
    return 2 * (vt + vx) - v(x, t) * ((2 * a + 1) / t + (2 * a + 1) / x)


def _type_i_basis(m, a, k):
    c = 1 / type_i_ratio_at_zero(m, k, a)
    return lambda y: c * type_i_ratio(m, k, a, y) * mp.exp(-y / 2)


def type_i_sigma2(m, a, k):
    z = _type_i_basis(m, a, k)
    return mp.quad(lambda y: z(y) ** 2 * y**a, [0, 5, 20, mp.inf])


def christoffel_at_zero(m, a, n):
    """``D_{n,2}(0) = sqrt(sum_k 1/sigma_k^2)`` since every ``z_k(0) = 1``."""
    return mp.sqrt(mp.fsum(1 / type_i_sigma2(m, a, k) for k in range(n + 1)))


def point_constant_n1(m, a, q):
    """``D_{1,q}(0)`` by direct one-parameter minimization of ``||(1-s) z_0 + s z_1||_q``.

    Both basis elements equal one at the origin, so the constraint is built in.
    """
    with mp.workdps(20):
        return _point_constant_n1(m, a, q)


def _point_constant_n1(m, a, q):
    z0, z1 = _type_i_basis(m, a, 0), _type_i_basis(m, a, 1)
    q = mp.mpf(q)

    def norm(s):
        p = lambda y: (1 - s) * z0(y) + s * z1(y)
        grid = [mp.mpf(k) / 2 for k in range(161)]
        roots = [mp.findroot(p, (a, b), solver="anderson", verify=False)
                 for a, b in zip(grid[:-1], grid[1:]) if p(a) * p(b) < 0]
        pts = sorted(set([mp.mpf(0), mp.mpf(5), mp.mpf(20)] + roots)) + [mp.inf]
        return mp.quad(lambda y: abs(p(y)) ** q * y**a, pts) ** (1 / q)

    # golden-section search on s; the norm is convex in s
    lo, hi = mp.mpf(-1), mp.mpf(3)
    phi = (mp.sqrt(5) - 1) / 2
    c, d = hi - phi * (hi - lo), lo + phi * (hi - lo)
    fc, fd = norm(c), norm(d)
    while hi - lo > mp.mpf("1e-9"):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - phi * (hi - lo)
            fc = norm(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + phi * (hi - lo)
            fd = norm(d)
    return 1 / norm((lo + hi) / 2)


def bessel_translate_phi(a, lam, x, t):
    """``gamma(a) int_0^pi j_a(lam sqrt(x^2+t^2-2xt cos phi)) sin^{2a} phi dphi``."""
    a, lam, x, t = mp.mpf(a), mp.mpf(lam), mp.mpf(x), mp.mpf(t)
    gamma = mp.gamma(a + 1) / (mp.sqrt(mp.pi) * mp.gamma(a + mp.mpf(1) / 2))
    f = lambda phi: bessel_series(a, lam * mp.sqrt(x * x + t * t - 2 * x * t * mp.cos(phi)), 80) * mp.sin(phi) ** (2 * a)
    return gamma * mp.quad(f, [0, mp.pi / 2, mp.pi])


def bessel_product(a, lam, x, t):
    return bessel_series(a, lam * x) * bessel_series(a, lam * t)


def l2w_diagonal(m, a, n, t):
    """``max_k |u_k(t)|`` by brute force over ``k <= n``."""
    y = mp.mpf(t) ** 2
    return max(abs(_type_i_basis(m, a, k)(y)) for k in range(n + 1))


def bessel_pde_defect(a, lam, x, t):
    """Relative defect of ``u_xx - u_tt + q(x) u_x - q(t) u_t`` for ``u = j(lam x) j(lam t)``."""
    a = mp.mpf(a)
    u = lambda xx, tt: bessel_series(a, lam * xx, 120) * bessel_series(a, lam * tt, 120)
    x, t = mp.mpf(x), mp.mpf(t)
    uxx = mp.diff(lambda s: u(s, t), x, 2)
    utt = mp.diff(lambda s: u(x, s), t, 2)
    ux = mp.diff(lambda s: u(s, t), x)
    ut = mp.diff(lambda s: u(x, s), t)
    terms = [uxx, -utt, (2 * a + 1) / x * ux, -(2 * a + 1) / t * ut]
    return mp.fsum(terms) / mp.fsum(abs(v) for v in terms)


def laguerre_d2(n, a, x):
    return central_second_difference(lambda s: laguerre_series(n, a, s), x)


def type_i_S0(m, a):
    """``S(0) = L_m^{(a-1)}(0) = binom(m+a-1, m)``."""
    return mp.binomial(m + a - 1, m)
