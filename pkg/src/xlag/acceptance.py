"""Acceptance suite shared by the test-suite and the ``report`` command.

Each check returns a :class:`CriterionResult` with the measured quantities,
the thresholds they were held to and the wall time.  Nothing here relaxes a
threshold: a check that misses its limit reports ``passed=False``.
"""

import importlib.util
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cauchy import gprime, g_function, max_principle_verify, pde_residual_product, positivity_certify
from .cauchy import r_radial, v_certificate, v_conditions
from .certificates import _plain
from .nikolskii import christoffel_D2, point_constant, sup_constant
from .specialfn import bessel_j_normalized, gauss_laguerre, laguerre, laguerre_derivative
from .translation import (
    SpanFunction,
    bessel_translate_closed,
    operator_norm_probe,
    selfadjoint_check,
)
from .xlaguerre import (
    XFamily,
    basis_matrix,
    denominator_S,
    eigenfunction_u,
    evaluate_u,
    normalized_orthogonality,
    ode_residual,
    radial_potential,
    supnorm_profile,
    u_jet,
    xlaguerre_I,
    xlaguerre_I_poly,
    xlaguerre_II_m1,
)

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_GOLDEN = REPO_ROOT / "tests" / "golden.json"
DEFAULT_ORACLES = REPO_ROOT / "tests" / "_oracles.py"


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    runtime: float
    metrics: dict = field(default_factory=dict)
    reason: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.number:2d} {self.title} ({self.runtime:.1f} s)"
        if self.reason:
            text += f": {self.reason}"
        return text

    def to_dict(self):
        return {"number": self.number, "title": self.title, "pass": self.passed,
                "runtime": self.runtime, "reason": self.reason, "metrics": _plain(self.metrics)}


def _criterion(number, title, time_limit=None):
    def wrap(func):
        def run(**kwargs):
            start = time.perf_counter()
            passed, metrics, reason = func(**kwargs)
            runtime = time.perf_counter() - start
            if time_limit is not None:
                metrics["time_limit"] = time_limit
                if runtime >= time_limit:
                    passed = False
                    reason = (reason + "; " if reason else "") + f"runtime {runtime:.1f} s over {time_limit} s"
            return CriterionResult(number, title, bool(passed), runtime, metrics, reason)

        run.number = number
        run.title = title
        return run

    return wrap


def _fails(checks):
    return "; ".join(name for name, ok in checks.items() if not ok)


# -- 1 ----------------------------------------------------------------------------


@_criterion(1, "orthogonality of type I systems", time_limit=10.0)
def orthogonality(n=12, **_):
    worst = {}
    for m in (1, 2, 3):
        for alpha in (1.0, 3.0, 10.0):
            value, _ = normalized_orthogonality(XFamily.type_i(m, alpha), n)
            worst[f"m={m},alpha={alpha:g}"] = value
    top = max(worst.values())
    ok = top < 1e-8
    return ok, {"max_normalized_inner": top, "limit": 1e-8, "cases": worst}, "" if ok else "inner products too large"


# -- 2 ----------------------------------------------------------------------------


def _ode_families():
    fams = [XFamily.type_i(m, a) for m in (1, 2, 3) for a in (1.0, 3.0, 10.0)]
    fams += [XFamily.type_ii(a) for a in (1.0, 2.5)]
    fams.append(XFamily.classical(1.0))
    return fams


def fitted_eigenvalue(family, n, x):
    """Least-squares ``lambda`` from ``u'' + q u' - r u = lambda u`` on the samples."""
    ef = eigenfunction_u(family, n)
    u0, u1, u2 = u_jet(ef, x)
    lhs = u2 + (2 * family.alpha + 1) / x * u1 - radial_potential(family, x) * u0
    return float(np.dot(lhs, u0) / np.dot(u0, u0))


@_criterion(2, "differential equations and eigenvalues")
def ode_residuals(n=12, points=200, **_):
    y = np.linspace(0.1, 30.0, points)
    x = np.sqrt(y)
    worst_ode, worst_eig = 0.0, 0.0
    where = {}
    for family in _ode_families():
        label = f"{family.kind.value},m={family.m},alpha={family.alpha:g}"
        for k in range(n + 1):
            res = float(np.max(np.abs(ode_residual(family, k, y))))
            lam = family.eigenvalue(k)
            err = abs(fitted_eigenvalue(family, k, x) - lam) / abs(lam)
            if res > worst_ode:
                worst_ode, where["ode"] = res, (label, k)
            if err > worst_eig:
                worst_eig, where["eigen"] = err, (label, k)
    checks = {"ode residual": worst_ode < 1e-9, "eigenvalue": worst_eig < 1e-8}
    metrics = {"max_ode_residual": worst_ode, "ode_limit": 1e-9,
               "max_eigenvalue_rel_error": worst_eig, "eigen_limit": 1e-8, "worst": where}
    return all(checks.values()), metrics, _fails(checks)


# -- 3 ----------------------------------------------------------------------------


@_criterion(3, "sup norm attained at zero")
def supnorm_at_zero(n=12, **_):
    fams = [XFamily.type_i(m, a) for m in (1, 2, 3) for a in (1.0, 3.0)]
    fams += [XFamily.type_ii(a) for a in (1.0, 2.5)]
    worst_value, worst_arg, worst_tail = 0.0, 0.0, 0.0
    for family in fams:
        for k in range(n + 1):
            prof = supnorm_profile(family, k)
            worst_value = max(worst_value, abs(prof.max_value - 1.0))
            worst_arg = max(worst_arg, abs(prof.argmax))
            worst_tail = max(worst_tail, prof.tail_bound / prof.max_value)
    checks = {"max = 1": worst_value <= 1e-10, "argmax = 0": worst_arg == 0.0,
              "tail certified": worst_tail < 1.0}
    metrics = {"max_abs_sup_minus_one": worst_value, "limit": 1e-10, "max_argmax": worst_arg,
               "max_tail_ratio": worst_tail}
    return all(checks.values()), metrics, _fails(checks)


# -- 4 ----------------------------------------------------------------------------


@_criterion(4, "positivity certificates")
def positivity(**_):
    cases = {}
    ok = True
    for m, alpha in ((1, 3.0), (2, 25.0), (5, 16.0), (6, 19.0)):
        start = time.perf_counter()
        cert = positivity_certify(m, alpha)
        elapsed = time.perf_counter() - start
        cases[f"m={m},alpha={alpha:g}"] = {"pass": cert.passed, "margin": cert.margin,
                                           "witness": cert.witness, "seconds": elapsed}
        ok = ok and cert.passed and elapsed < 5.0
    expanded = positivity_certify(1, 3.0, condition="expanded")
    metrics = {"cases": cases, "margin_m1_alpha3": cases["m=1,alpha=3"]["margin"],
               "expanded_condition_m1_alpha3": {"pass": expanded.passed, "margin": expanded.margin}}
    return ok, metrics, "" if ok else "a certificate failed or exceeded 5 s"


# -- 5 ----------------------------------------------------------------------------


@_criterion(5, "maximum principle on random spans", time_limit=60.0)
def maximum_principle(spans=100, max_degree=8, seed=0, **_):
    rng = np.random.default_rng(seed)
    fams = {"bessel alpha=1": XFamily.bessel(1.0), "classical alpha=1": XFamily.classical(1.0),
            "type I m=1 alpha=3": XFamily.type_i(1, 3.0)}
    summary = {}
    ok = True
    for label, family in fams.items():
        worst_gap, worst_excess, failures = 0.0, -math.inf, 0
        for _ in range(spans):
            degree = int(rng.integers(0, max_degree + 1))
            sf = SpanFunction(family, rng.standard_normal(degree + 1))
            cert = max_principle_verify(sf)
            s_axis, s_quad = cert.details["s_axis"], cert.details["s_quad"]
            gap = abs(s_quad - s_axis) / s_axis
            excess = (s_quad - s_axis) / s_axis
            worst_gap, worst_excess = max(worst_gap, gap), max(worst_excess, excess)
            if not (gap <= 1e-6 and s_quad <= s_axis * (1 + 1e-8)):
                failures += 1
        summary[label] = {"max_rel_gap": worst_gap, "max_rel_excess": worst_excess,
                          "failures": failures}
        ok = ok and failures == 0
    return ok, {"families": summary, "spans_per_family": spans, "seed": seed}, "" if ok else "a span violated the bound"


# -- 6 ----------------------------------------------------------------------------


@_criterion(6, "auxiliary function certificate")
def v_identities(**_):
    out = {}
    ok = True
    for alpha in (0.5, 1.0, 3.0):
        cert = v_certificate(alpha, region=(10.0, 100))
        ident = max(cert.details["identity_error"].values())
        out[f"alpha={alpha:g}"] = {"pass": cert.passed, "margin": cert.margin,
                                   "identity_error": ident}
        ok = ok and cert.passed and ident <= 1e-10
    return ok, {"cases": out, "identity_limit": 1e-10}, "" if ok else "identity or positivity failed"


# -- 7 ----------------------------------------------------------------------------


@_criterion(7, "translation operator norms")
def translation_norms(seed=0, degree=8, probe_t=1.3, l1_trials=40, **_):
    family = XFamily.type_i(1, 3.0)
    t_grid = np.linspace(0.0, 10.0, 200)
    diag = np.max(np.abs(basis_matrix(family, degree, t_grid)), axis=0)
    linf = operator_norm_probe(family, probe_t, "LInfSpan", degree=degree, trials=200, seed=seed)
    l1 = operator_norm_probe(family, probe_t, "L1w", degree=degree, trials=l1_trials, seed=seed)
    rng = np.random.default_rng(seed)
    sa = 0.0
    for _ in range(10):
        p = SpanFunction(family, rng.standard_normal(degree + 1))
        q = SpanFunction(family, rng.standard_normal(degree + 1))
        sa = max(sa, selfadjoint_check(family, p, q, float(rng.uniform(0, 4))))
    checks = {
        "L2w <= 1": float(diag.max()) <= 1.0 + 1e-15,
        "L2w = 1 at t=0": abs(diag[0] - 1.0) <= 1e-15,
        "LInf probe": linf.value <= 1 + 1e-9,
        "L1 probe": l1.value <= 1 + 1e-8,
        "self-adjoint": sa < 1e-8,
    }
    metrics = {"l2w_max": float(diag.max()), "l2w_at_zero": float(diag[0]),
               "l2w_max_positive_t": float(diag[1:].max()), "linf_probe": linf.value,
               "l1_probe": l1.value, "l1_dual_attainment": l1.details["dual_attainment"],
               "selfadjoint_residual": sa, "probe_t": probe_t}
    return all(checks.values()), metrics, _fails(checks)


# -- 8 ----------------------------------------------------------------------------


@_criterion(8, "closed-form Bessel translation")
def bessel_closed_form(points=26, **_):
    g = np.linspace(0.0, 5.0, points)
    X, T = np.meshgrid(g, g, indexing="ij")
    worst_product, worst_one = 0.0, 0.0
    for alpha in (0.5, 1.0, 2.0):
        for lam in (1.0, 2.4):
            f = lambda r, a=alpha, s=lam: bessel_j_normalized(a, s * r)
            closed = bessel_translate_closed(f, alpha, T, X)
            product = bessel_j_normalized(alpha, lam * X) * bessel_j_normalized(alpha, lam * T)
            worst_product = max(worst_product, float(np.max(np.abs(closed - product))))
        one = bessel_translate_closed(lambda r: np.ones_like(r), alpha, T, X)
        worst_one = max(worst_one, float(np.max(np.abs(one - 1.0))))
    checks = {"product formula": worst_product <= 1e-7, "constant": worst_one <= 1e-10}
    metrics = {"max_product_error": worst_product, "product_limit": 1e-7,
               "max_constant_error": worst_one, "constant_limit": 1e-10}
    return all(checks.values()), metrics, _fails(checks)


# -- 9 ----------------------------------------------------------------------------


def _unique_error(a, b):
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


@_criterion(9, "Nikolskii constants at zero", time_limit=120.0)
def nikolskii_constants(seed=0, **_):
    family = XFamily.type_i(1, 3.0)
    q2 = 0.0
    for n in range(9):
        closed = christoffel_D2(family, n, 0.0)
        q2 = max(q2, abs(point_constant(family, n, 2.0).constant - closed) / closed)
    rows = {}
    worst = {"sup_gap": 0.0, "argmax": 0.0, "residual": 0.0, "uniqueness": 0.0}
    for q in (1.5, 4.0):
        for n in range(7):
            ext = point_constant(family, n, q)
            M, arg = sup_constant(family, n, q)
            r1 = point_constant(family, n, q, start="random", seed=seed + 1)
            r2 = point_constant(family, n, q, start="random", seed=seed + 2)
            uniq = max(_unique_error(r1.coeffs, r2.coeffs), _unique_error(ext.coeffs, r1.coeffs))
            row = {"D0": ext.constant, "M": M, "sup_argmax": arg, "extremal_argmax": ext.argmax_point,
                   "residual": ext.ortho_residual, "uniqueness": uniq}
            rows[f"q={q:g},n={n}"] = row
            worst["sup_gap"] = max(worst["sup_gap"], abs(M - ext.constant))
            worst["argmax"] = max(worst["argmax"], abs(arg), abs(ext.argmax_point))
            worst["residual"] = max(worst["residual"], ext.ortho_residual)
            worst["uniqueness"] = max(worst["uniqueness"], uniq)
    checks = {"q=2 closed form": q2 <= 1e-8, "D(0) = M": worst["sup_gap"] <= 1e-4,
              "argmax = 0": worst["argmax"] <= 1e-8, "Arestov residual": worst["residual"] < 1e-6,
              "uniqueness": worst["uniqueness"] <= 1e-6}
    metrics = {"q2_max_rel_error": q2, "worst": worst, "rows": rows}
    return all(checks.values()), metrics, _fails(checks)


# -- 10 ---------------------------------------------------------------------------


def _family(kind, alpha, m=1):
    return XFamily.from_spec(kind, alpha, m)


def _bessel_translate(alpha, lam, x, t):
    return bessel_translate_closed(lambda r: bessel_j_normalized(alpha, lam * r), alpha, t, x)


#: golden name -> implementation path producing the same quantity
IMPLEMENTATIONS = {
    "laguerre_n2_a0_x0": lambda: laguerre(2, 0.0, 0.0),
    "laguerre_d2_n3_a1_x07": lambda: laguerre_derivative(3, 1.0, 0.7, order=2),
    "bessel_a05_z1": lambda: bessel_j_normalized(0.5, 1.0),
    "bessel_a1_z2": lambda: bessel_j_normalized(1.0, 2.0),
    "gauss_moment_p5_a3": lambda: gauss_laguerre(20, 3.0).integrate(gauss_laguerre(20, 3.0).nodes ** 5),
    "typeI_S0_m2_a3": lambda: denominator_S(XFamily.type_i(2, 3.0), 0.0),
    "typeI_ratio_m1_n0_a3_y17": lambda: xlaguerre_I(1, 0, 3.0, 1.7),
    "typeI_ratio0_m2_n0_a3": lambda: xlaguerre_I(2, 0, 3.0, 0.0),
    "typeI_ratio0_m3_n4_a15": lambda: xlaguerre_I(3, 4, 1.5, 0.0),
    "typeI_poly_m2_n3_a3_y15": lambda: xlaguerre_I_poly(2, 3, 3.0, 1.5),
    "typeI_ode_defect_m2_n3_a3_y15": lambda: ode_residual(XFamily.type_i(2, 3.0), 3, 1.5),
    "typeII_z0_a2_y0": lambda: xlaguerre_II_m1(0, 2.0, 0.0),
    "typeII_z3_a25_y1": lambda: xlaguerre_II_m1(3, 2.5, 1.0),
    "typeI_u0_m1_a3_x11": lambda: evaluate_u(eigenfunction_u(XFamily.type_i(1, 3.0), 0), 1.1),
    "typeI_radial_m1_a3_x13": lambda: r_radial(XFamily.type_i(1, 3.0), 1.3),
    "typeI_g_m1_a3_y2": lambda: float(g_function(1, 3.0, 2.0)),
    "typeI_gprime_m1_a3_y2": lambda: float(gprime(1, 3.0, 2.0)),
    "typeI_gprime_m2_a25_y07": lambda: float(gprime(2, 25.0, 0.7)),
    "typeI_gprime_m5_a16_y3": lambda: float(gprime(5, 16.0, 3.0)),
    "v_edge_plus_a0_x2_t1": lambda: float(v_conditions(0.0, 2.0, 1.0)["edge_plus"][0]),
    "v_edge_plus_a1_x3_t2": lambda: float(v_conditions(1.0, 3.0, 2.0)["edge_plus"][0]),
    "bessel_pde_a1_l24_x15_t2": lambda: pde_residual_product(
        XFamily.bessel(1.0, lambdas=[2.4]), 0, 1.5, 2.0),
    "bessel_translate_a1_l24_x15_t2": lambda: _bessel_translate(1.0, 2.4, 1.5, 2.0),
    "bessel_translate_a05_l1_x3_t07": lambda: _bessel_translate(0.5, 1.0, 3.0, 0.7),
    "l2w_m1_a3_n8_t2": lambda: operator_norm_probe(XFamily.type_i(1, 3.0), 2.0, "L2w", degree=8).value,
    "christoffel0_m1_a3_n8": lambda: christoffel_D2(XFamily.type_i(1, 3.0), 8, 0.0),
    "christoffel0_m1_a3_n3": lambda: christoffel_D2(XFamily.type_i(1, 3.0), 3, 0.0),
    "point_constant_m1_a3_n1_q15": lambda: point_constant(XFamily.type_i(1, 3.0), 1, 1.5).constant,
}


def load_oracles(path=DEFAULT_ORACLES):
    spec = importlib.util.spec_from_file_location("_xlag_oracles", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def _within(a, b, tol, kind):
    scale = max(abs(b), 1e-300) if kind == "rel" else 1.0
    return abs(a - b) <= tol * scale


@_criterion(10, "golden values from independent oracles")
def cross_oracle(golden=None, oracles=None, recompute=True, **_):
    golden = Path(golden or DEFAULT_GOLDEN)
    oracles = Path(oracles or DEFAULT_ORACLES)
    if not golden.exists():
        return False, {"golden": str(golden)}, "golden file missing"
    table = json.loads(golden.read_text(encoding="utf-8"))
    module = load_oracles(oracles) if recompute and oracles.exists() else None
    if recompute and module is None:
        return False, {"oracles": str(oracles)}, "oracle module missing"
    missing = sorted(set(table) ^ set(IMPLEMENTATIONS))
    bad_oracle, bad_impl, errors = [], [], {}
    for name, entry in table.items():
        if name not in IMPLEMENTATIONS:
            continue
        if module is not None:
            fresh = float(getattr(module, entry["oracle"])(*entry["args"]))
            if not _within(fresh, entry["value"], entry["tol"], entry["tol_kind"]):
                bad_oracle.append(name)
        value = float(IMPLEMENTATIONS[name]())
        errors[name] = abs(value - entry["value"])
        if not _within(value, entry["value"], entry["tol"], entry["tol_kind"]):
            bad_impl.append(name)
    ok = not (missing or bad_oracle or bad_impl)
    reason = "; ".join(filter(None, [
        f"unmatched goldens {missing}" if missing else "",
        f"oracle drift {bad_oracle}" if bad_oracle else "",
        f"implementation mismatch {bad_impl}" if bad_impl else "",
    ]))
    metrics = {"golden": str(golden), "entries": len(table), "recomputed": module is not None,
               "abs_errors": errors}
    return ok, metrics, reason


CRITERIA = (orthogonality, ode_residuals, supnorm_at_zero, positivity, maximum_principle,
            v_identities, translation_norms, bessel_closed_form, nikolskii_constants, cross_oracle)


def run_all(numbers=None, seed=0, golden=None, echo=None):
    """Run the selected criteria (all by default) and return their results."""
    results = []
    for crit in CRITERIA:
        if numbers and crit.number not in numbers:
            continue
        res = crit(seed=seed, golden=golden)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
