"""Command line front end.

Every command prints one JSON object with the keys ``command``, ``params``,
``result``, ``diagnostics`` and ``pass``; errors add a one-line ``reason``.
Grid-valued results can be written as CSV with ``--format csv``.

Exit codes: 0 success, 1 failed certificate, 2 usage error, 3 numerical
non-convergence.
"""

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import acceptance
from .cauchy import max_principle_verify, positivity_certify, v_certificate
from .certificates import GridSpec, _plain
from .exceptions import (
    DegenerateNormalization,
    GridTooShort,
    InvalidDomain,
    InvalidParams,
    NoConvergence,
    QuadratureDivergence,
    XlagError,
)
from .nikolskii import christoffel_D2, point_constant, sup_constant
from .specialfn import bessel_j_normalized, gauss_laguerre, quad_cap
from .translation import (
    SpanFunction,
    bessel_translate_closed,
    operator_norm_probe,
    sign_changes,
    translate,
)
from .xlaguerre import (
    Kind,
    XFamily,
    eigen_residual,
    eigenfunction_u,
    evaluate_u,
    evaluate_z,
    normalized_orthogonality,
    ode_residual,
    supnorm_profile,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3


class UsageError(XlagError):
    reason = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """What a command produced: JSON result, optional CSV table, pass flag."""

    def __init__(self, result, passed=True, diagnostics=None, table=None):
        self.result = result
        self.passed = passed
        self.diagnostics = diagnostics or {}
        self.table = table


# -- argument helpers ---------------------------------------------------------------


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def _family(args):
    return XFamily.from_spec(Kind(args.kind), args.alpha, args.m)


def _add_family(p, alpha=3.0):
    p.add_argument("--kind", choices=[k.value for k in Kind], default="I")
    p.add_argument("--m", type=int, default=1, help="codimension for type I/II")
    p.add_argument("--alpha", type=float, default=alpha)


def _grid(args, default_max):
    return GridSpec(x_max=args.x_max if args.x_max is not None else default_max, step=args.step)


def _span(args, family, rng):
    if args.coeffs:
        return SpanFunction(family, args.coeffs)
    degree = args.degree if args.degree is not None else int(rng.integers(0, 9))
    return SpanFunction(family, rng.standard_normal(degree + 1))


# -- commands -------------------------------------------------------------------------


def cmd_eval(args, rng):
    ef = eigenfunction_u(_family(args), args.n)
    x = np.asarray(args.x)
    values = evaluate_z(ef, x) if args.variable == "poly" else evaluate_u(ef, x)
    values = np.atleast_1d(values)
    result = {"values": values.tolist()}
    if values.size == 1:
        result["value"] = float(values[0])
    return Outcome(result, table=(["x", "value"], zip(x.tolist(), values.tolist())))


def cmd_roots(args, rng):
    family = _family(args)
    result = {}
    if family.kind in (Kind.TYPE_I, Kind.TYPE_II):
        result["denominator_roots"] = (
            [-v for v in family.xi] if family.kind is Kind.TYPE_I
            else np.roots(np.array([1.0, family.alpha])).tolist()
        )
    if family.kind is Kind.BESSEL:
        result["frequencies"] = list(family.lambdas)
    if args.n is not None:
        if family.kind is Kind.BESSEL:
            lam = family.lambdas[args.n]
            result["zeros"] = [] if args.n == 0 else [v / lam for v in family.lambdas[: args.n]]
        else:
            y = sign_changes(SpanFunction.unit(family, args.n))
            result["zeros_poly"] = y.tolist()
            result["zeros"] = np.sqrt(y).tolist()
    rows = [(k, v) for k, v in enumerate(result.get("zeros", result.get("denominator_roots", [])))]
    return Outcome(result, table=(["index", "root"], rows))


def cmd_quad(args, rng):
    rule = gauss_laguerre(args.order, args.alpha)
    value = float(rule.integrate(rule.nodes ** args.power))
    exact = math.gamma(args.power + args.alpha + 1)
    rel = abs(value - exact) / exact
    result = {"value": value, "exact": exact, "rel_error": rel, "nodes": int(rule.nodes.size),
              "order": args.order}
    table = (["node", "weight"], zip(rule.nodes.tolist(), rule.weights.tolist()))
    return Outcome(result, passed=rel <= args.tol, table=table)


def cmd_ortho(args, rng):
    value, order = normalized_orthogonality(_family(args), args.n)
    return Outcome({"max_normalized_inner": value, "limit": args.tol},
                   passed=value < args.tol, diagnostics={"quadrature_order": order})


def cmd_residual(args, rng):
    family = _family(args)
    pts = _grid(args, 30.0).points()
    pts = pts[pts > 0]
    ode = np.abs(ode_residual(family, args.n, pts))
    radial = np.sqrt(pts) if family.has_polynomial_variable else pts
    eig = np.abs(eigen_residual(family, args.n, radial))
    result = {"max_ode_residual": float(ode.max()), "max_eigen_residual": float(eig.max()),
              "eigenvalue": family.eigenvalue(args.n), "limit": args.tol}
    table = (["x", "ode_residual", "eigen_residual"], zip(pts.tolist(), ode.tolist(), eig.tolist()))
    return Outcome(result, passed=max(ode.max(), eig.max()) < args.tol, table=table)


def cmd_supnorm(args, rng):
    family = _family(args)
    grid = _grid(args, 4 * args.n + 8 * family.alpha + 40)
    prof = supnorm_profile(family, args.n, grid)
    ok = abs(prof.max_value - 1.0) <= 1e-10 and prof.argmax == 0.0
    pts = grid.points()
    values = np.abs(evaluate_z(eigenfunction_u(family, args.n), pts))
    return Outcome(prof._asdict(), passed=ok, table=(["y", "abs_z"], zip(pts.tolist(), values.tolist())))


def cmd_translate(args, rng):
    family = _family(args)
    sf = _span(args, family, rng)
    x = np.asarray(args.x)
    values = np.atleast_1d(translate(sf, args.t, x))
    result = {"coeffs": sf.coeffs.tolist(), "t": args.t, "values": values.tolist()}
    return Outcome(result, table=(["x", "value"], zip(x.tolist(), values.tolist())))


def cmd_bessel_translate(args, rng):
    x = np.asarray(args.x)
    f = lambda r: bessel_j_normalized(args.alpha, args.lam * r)
    closed = np.atleast_1d(bessel_translate_closed(f, args.alpha, args.t, x, nodes=args.nodes))
    product = np.atleast_1d(bessel_j_normalized(args.alpha, args.lam * x)
                            * bessel_j_normalized(args.alpha, args.lam * args.t))
    err = float(np.max(np.abs(closed - product)))
    result = {"closed": closed.tolist(), "product": product.tolist(), "max_abs_error": err,
              "limit": args.tol}
    table = (["x", "closed", "product"], zip(x.tolist(), closed.tolist(), product.tolist()))
    return Outcome(result, passed=err <= args.tol, table=table)


def _certificate(cert):
    return Outcome(cert.to_dict(), passed=cert.passed)


def cmd_positivity(args, rng):
    return _certificate(positivity_certify(args.m, args.alpha, x_max=args.x_max, grid_step=args.step,
                                           condition=args.condition))


def cmd_vcert(args, rng):
    return _certificate(v_certificate(args.alpha, region=(args.x_max, args.points)))


def cmd_maxprinciple(args, rng):
    sf = _span(args, _family(args), rng)
    out = _certificate(max_principle_verify(sf, region=args.radius, grid_step=args.step))
    out.result["coeffs"] = sf.coeffs.tolist()
    return out


def cmd_norm_probe(args, rng):
    res = operator_norm_probe(_family(args), args.t, args.norm, degree=args.degree,
                              trials=args.trials, seed=args.seed)
    limit = {"L2w": 1.0, "LInfSpan": 1 + 1e-9, "L1w": 1 + 1e-8}[args.norm]
    return Outcome({"value": res.value, "norm": res.norm, "limit": limit},
                   passed=res.value <= limit, diagnostics=res.details)


def cmd_nikolskii(args, rng):
    family = _family(args)
    ext = point_constant(family, args.n, args.q, args.point)
    result = {"constant": ext.constant, "coeffs": ext.coeffs.tolist(), "argmax": ext.argmax_point,
              "arestov_residual": ext.ortho_residual}
    checks = {}
    if args.q == 2:
        closed = christoffel_D2(family, args.n, args.point)
        result["closed_form"] = closed
        result["closed_form_rel_diff"] = abs(closed - ext.constant) / closed
        checks["closed form"] = result["closed_form_rel_diff"] <= 1e-8
    elif args.q > 1:
        checks["arestov residual"] = ext.ortho_residual < 1e-6
    table = None
    if args.sup:
        M, arg = sup_constant(family, args.n, args.q)
        result["sup_constant"] = M
        result["sup_argmax"] = arg
        checks["sup at point"] = abs(M - ext.constant) <= 1e-4
    if args.x_max is not None:
        pts = GridSpec(x_max=args.x_max, step=args.step).points()
        values = [point_constant(family, args.n, args.q, float(y), raise_on_failure=False).constant
                  for y in pts]
        table = (["y", "D"], zip(pts.tolist(), values))
    return Outcome(result, passed=all(checks.values()), diagnostics={"checks": checks,
                   "iterations": ext.iterations}, table=table)


def cmd_report(args, rng):
    echo = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    results = acceptance.run_all(args.criteria, seed=args.seed, golden=args.golden, echo=echo)
    rows = [(r.number, r.title, r.passed, round(r.runtime, 3), r.reason) for r in results]
    return Outcome({"criteria": [r.to_dict() for r in results],
                    "passed": sum(r.passed for r in results), "total": len(results)},
                   passed=all(r.passed for r in results),
                   table=(["criterion", "title", "pass", "seconds", "reason"], rows))


# -- parser -------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="xlag", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text, alpha=3.0, family=True):
        p = sub.add_parser(name, help=help_text)
        if family:
            _add_family(p, alpha)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate a normalized basis function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=_floats, required=True, help="comma separated points")
    p.add_argument("--variable", choices=["radial", "poly"], default="radial")

    p = add("roots", cmd_roots, "denominator roots and zeros of a basis function")
    p.add_argument("--n", type=int)

    p = add("quad", cmd_quad, "Gauss-Laguerre moment check", family=False)
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--power", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("ortho", cmd_ortho, "normalized orthogonality defect")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-8)

    for name, func, text, default_n in (("residual", cmd_residual, "differential equation residuals", None),
                                        ("supnorm", cmd_supnorm, "sup norm and its location", None)):
        p = add(name, func, text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--x-max", type=float)
        p.add_argument("--step", type=float, default=0.15 if name == "residual" else 0.01)
        if name == "residual":
            p.add_argument("--tol", type=float, default=1e-9)

    p = add("translate", cmd_translate, "generalized translation of a span")
    p.add_argument("--coeffs", type=_floats)
    p.add_argument("--degree", type=int)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=_floats, required=True)

    p = add("bessel-translate", cmd_bessel_translate, "closed-form Bessel translation", alpha=1.0,
            family=False)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=_floats, required=True)
    p.add_argument("--nodes", type=int, default=96)
    p.add_argument("--tol", type=float, default=1e-7)

    p = add("positivity", cmd_positivity, "positivity certificate for r(x, t)", family=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x-max", type=float)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--condition", choices=["derivative", "expanded"], default="derivative")

    p = add("vcert", cmd_vcert, "auxiliary function certificate", family=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=100)

    p = add("maxprinciple", cmd_maxprinciple, "maximum principle check for one span")
    p.add_argument("--coeffs", type=_floats)
    p.add_argument("--degree", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--step", type=float, default=0.05)

    p = add("norm-probe", cmd_norm_probe, "translation operator norm probe")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--norm", choices=["L2w", "LInfSpan", "L1w"], default="L2w")
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--trials", type=int, default=200)

    p = add("nikolskii", cmd_nikolskii, "Nikolskii point and sup constants")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--point", type=float, default=0.0)
    p.add_argument("--sup", action="store_true", help="also compute the sup constant")
    p.add_argument("--x-max", type=float, help="tabulate D(y) on [0, x-max] (CSV)")
    p.add_argument("--step", type=float, default=0.5)

    p = add("report", cmd_report, "run the acceptance suite", family=False)
    p.add_argument("--criteria", type=lambda s: [int(v) for v in s.split(",")])
    p.add_argument("--golden", help="path of the golden value file")
    p.add_argument("--verbose", action="store_true", help="print one line per criterion to stderr")
    return parser


# -- driver ---------------------------------------------------------------------------


def _exit_code(exc):
    if isinstance(exc, (NoConvergence, QuadratureDivergence, DegenerateNormalization, GridTooShort)):
        return EXIT_NONCONV
    if isinstance(exc, (InvalidParams, InvalidDomain, UsageError, ValueError)):
        return EXIT_USAGE
    return EXIT_NONCONV


def _params(args):
    skip = {"func", "command", "format", "output"}
    return {k: _plain(v) for k, v in vars(args).items() if k not in skip}


def _finite(obj):
    # JSON has no inf/nan
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    command, params = None, {}
    try:
        args = parser.parse_args(argv)
        command = args.command
        if command is None:
            raise UsageError("a subcommand is required")
        params = _params(args)
        params["quad_max"] = quad_cap()
        rng = np.random.default_rng(args.seed)
        start = time.perf_counter()
        outcome = args.func(args, rng)
        outcome.diagnostics.setdefault("seconds", time.perf_counter() - start)
    except XlagError as exc:
        payload = {"command": command, "params": params, "result": None,
                   "diagnostics": _plain(exc.details), "pass": False,
                   "reason": f"{exc.reason}: {str(exc).splitlines()[0] if str(exc) else ''}"}
        sys.stdout.write(json.dumps(_finite(payload)) + "\n")
        return _exit_code(exc)
    except (ValueError, ArithmeticError) as exc:
        code = EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NONCONV
        payload = {"command": command, "params": params, "result": None, "diagnostics": {},
                   "pass": False, "reason": f"{type(exc).__name__}: {str(exc).splitlines()[0]}"}
        sys.stdout.write(json.dumps(_finite(payload)) + "\n")
        return code

    if args.format == "csv":
        if outcome.table is None:
            payload = {"command": command, "params": params, "result": None, "diagnostics": {},
                       "pass": False, "reason": "usage: this command has no tabular output"}
            sys.stdout.write(json.dumps(payload) + "\n")
            return EXIT_USAGE
        header, rows = outcome.table
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        _emit(buf.getvalue(), args.output)
    else:
        payload = {"command": command, "params": params, "result": _plain(outcome.result),
                   "diagnostics": _plain(outcome.diagnostics), "pass": bool(outcome.passed)}
        _emit(json.dumps(_finite(payload), indent=2) + "\n", args.output)
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
