"""Freeze oracle values into tests/golden.json.

Run once before accepting the implementation; the acceptance suite checks
that the file exists, that the oracles still reproduce it and that the
package matches it.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import _oracles  # noqa: E402

# name -> (oracle function, args, tolerance, kind); kind "abs" or "rel"
CASES = {
    "laguerre_n2_a0_x0": ("laguerre_series", (2, 0.0, 0.0), 1e-15, "abs"),
    "laguerre_d2_n3_a1_x07": ("laguerre_d2", (3, 1.0, 0.7), 1e-7, "abs"),
    "bessel_a05_z1": ("bessel_series", (0.5, 1.0), 1e-14, "abs"),
    "bessel_a1_z2": ("bessel_series", (1.0, 2.0), 1e-13, "abs"),
    "gauss_moment_p5_a3": ("laguerre_moment", (5, 3.0), 1e-9, "rel"),
    "typeI_S0_m2_a3": ("type_i_S0", (2, 3.0), 1e-12, "rel"),
    "typeI_ratio_m1_n0_a3_y17": ("type_i_ratio", (1, 0, 3.0, 1.7), 1e-13, "rel"),
    "typeI_ratio0_m2_n0_a3": ("type_i_ratio_at_zero", (2, 0, 3.0), 1e-13, "rel"),
    "typeI_ratio0_m3_n4_a15": ("type_i_ratio_at_zero", (3, 4, 1.5), 1e-13, "rel"),
    "typeI_poly_m2_n3_a3_y15": ("type_i_polynomial", (2, 3, 3.0, 1.5), 1e-12, "rel"),
    "typeI_ode_defect_m2_n3_a3_y15": ("type_i_ode_defect", (2, 3, 3.0, 1.5), 1e-9, "abs"),
    "typeII_z0_a2_y0": ("type_ii_weighted_m1", (0, 2.0, 0.0), 1e-14, "abs"),
    "typeII_z3_a25_y1": ("type_ii_weighted_m1", (3, 2.5, 1.0), 1e-12, "rel"),
    "typeI_u0_m1_a3_x11": ("type_i_m1_u0", (3.0, 1.1), 1e-13, "rel"),
    "typeI_radial_m1_a3_x13": ("radial_potential_m1", (3.0, 1.3), 1e-10, "rel"),
    "typeI_g_m1_a3_y2": ("g_m1", (3.0, 2.0), 1e-12, "rel"),
    "typeI_gprime_m1_a3_y2": ("gprime_numeric", (1, 3.0, 2.0), 1e-12, "rel"),
    "typeI_gprime_m2_a25_y07": ("gprime_numeric", (2, 25.0, 0.7), 1e-12, "rel"),
    "typeI_gprime_m5_a16_y3": ("gprime_numeric", (5, 16.0, 3.0), 1e-11, "rel"),
    "v_edge_plus_a0_x2_t1": ("v_edge_plus", (0.0, 2.0, 1.0), 1e-12, "abs"),
    "v_edge_plus_a1_x3_t2": ("v_edge_plus", (1.0, 3.0, 2.0), 1e-10, "rel"),
    "bessel_pde_a1_l24_x15_t2": ("bessel_pde_defect", (1.0, 2.4, 1.5, 2.0), 1e-8, "abs"),
    "bessel_translate_a1_l24_x15_t2": ("bessel_translate_phi", (1.0, 2.4, 1.5, 2.0), 1e-8, "abs"),
    "bessel_translate_a05_l1_x3_t07": ("bessel_translate_phi", (0.5, 1.0, 3.0, 0.7), 1e-8, "abs"),
    "l2w_m1_a3_n8_t2": ("l2w_diagonal", (1, 3.0, 8, 2.0), 1e-12, "abs"),
    "christoffel0_m1_a3_n8": ("christoffel_at_zero", (1, 3.0, 8), 1e-8, "rel"),
    "christoffel0_m1_a3_n3": ("christoffel_at_zero", (1, 3.0, 3), 1e-8, "rel"),
    "point_constant_m1_a3_n1_q15": ("point_constant_n1", (1, 3.0, 1.5), 1e-6, "rel"),
}


def evaluate(name):
    func, args, _, _ = CASES[name]
    return float(getattr(_oracles, func)(*args))


def main(path=ROOT / "tests" / "golden.json"):
    out = {}
    for name, (func, args, tol, kind) in CASES.items():
        out[name] = {"oracle": func, "args": list(args), "value": evaluate(name),
                     "tol": tol, "tol_kind": kind}
        print(f"{name:40s} {out[name]['value']!r}")
    Path(path).write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
