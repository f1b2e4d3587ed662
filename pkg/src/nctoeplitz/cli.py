"""Command-line front end.

Every verification and computation is a subcommand with JSON or CSV
output; all numeric output carries 17 significant digits and fixed seeds
make artifacts byte-identical across runs.

Exit codes: 0 success, 1 usage or input error, 2 verification failure
(a computed deviation beyond its tolerance).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import star
from .errors import SymbolSyntaxError, UnknownVariable
from .fock import FockBasis
from .kernels import (
    DEGENERATE_CLOSED,
    DEGENERATE_FOCK,
    GENERIC_CLOSED,
    GENERIC_FOCK,
    VARIANTS,
    KernelSpec,
    gram_psd,
    kernel,
    reproducing_check,
    wh_limit_gap,
)
from .params import (
    DeformationParams,
    DegenerateParams,
    DiracMeasure,
    PhasePoint,
    make_params,
)
from .serialize import (
    csv_text,
    dumps17,
    matrix_to_json_dict,
    symbol_terms_json,
)
from .symbols import PHASE, parse_symbol
from .toeplitz_nc import build_nc_toeplitz, commutator_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, doc):
    _emit(args, dumps17(doc) + "\n")


def _parse_point(text: str) -> PhasePoint:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 4:
        raise _UsageError(f"a phase-space point needs 4 components, got {text!r}")
    return PhasePoint(*vals)


def _parse_pair(text: str) -> tuple[float, float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2:
        raise _UsageError(f"expected 2 comma-separated values, got {text!r}")
    return vals[0], vals[1]


def _generic_flags(sub, with_s=True):
    sub.add_argument("--hbar", type=float, default=1.0)
    sub.add_argument("--theta", type=float, default=0.0,
                     help="position noncommutativity")
    sub.add_argument("--B", dest="calB", type=float, default=0.0,
                     help="momentum noncommutativity (calligraphic B)")
    if with_s:
        sub.add_argument("--s", type=float, default=None,
                         help="ground-state width (default sqrt(hbar))")


def _degenerate_flags(sub):
    sub.add_argument("--hbar", type=float, default=1.0)
    sub.add_argument("--theta", type=float, default=0.5)
    sub.add_argument("--kappa", type=float, default=0.0)
    sub.add_argument("--delta", type=float, default=0.0)
    sub.add_argument("--s", type=float, default=None)
    sub.add_argument("--base-point", type=str, default="0,0",
                     help="Dirac-mass location q2*,p2*")


def _generic_params(args) -> DeformationParams:
    return make_params(args.hbar, args.theta, args.calB, args.s)


def _degenerate_params(args) -> DegenerateParams:
    q2s, p2s = _parse_pair(args.base_point)
    return DegenerateParams(args.hbar, args.theta, args.kappa, args.delta,
                            args.s if args.s is not None else 0.0,
                            base_point=(q2s, p2s))


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(args.seed))


def _random_points(rng, n, scale=1.0):
    return [PhasePoint(*(scale * rng.uniform(-1.0, 1.0, 4))) for _ in range(n)]


def _random_generic(rng) -> DeformationParams:
    hbar = rng.uniform(0.5, 2.0)
    B = rng.uniform(-0.5, 0.5)
    T = rng.uniform(-0.5, 0.5)
    S = rng.uniform(0.8, 1.25)
    return DeformationParams(hbar, T * hbar, B * hbar, S * math.sqrt(hbar))


def _random_degenerate(rng) -> DegenerateParams:
    hbar = rng.uniform(0.5, 2.0)
    theta = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.5)
    return DegenerateParams(hbar, float(theta),
                            kappa=rng.uniform(-1.0, 1.0),
                            delta=rng.uniform(-1.0, 1.0),
                            s=rng.uniform(0.8, 1.25) * math.sqrt(hbar),
                            base_point=(rng.uniform(-0.5, 0.5),
                                        rng.uniform(-0.5, 0.5)))


def _parse_phase_symbol(text: str):
    try:
        return parse_symbol(text, PHASE)
    except (SymbolSyntaxError, UnknownVariable) as exc:
        raise _UsageError(f"bad symbol {text!r}: {exc}")


# -- subcommands --------------------------------------------------------------

def _cmd_params_check(args) -> int:
    p = _generic_params(args)
    _emit_json(args, {
        "hbar": p.hbar, "theta": p.theta, "calB": p.calB, "s": p.s,
        "B": p.B, "T": p.T, "S": p.S, "kind": p.kind,
    })
    return EXIT_OK


def _cmd_kernel_eval(args) -> int:
    if args.variant not in VARIANTS:
        raise _UsageError(f"unknown variant {args.variant!r}")
    if args.variant in (DEGENERATE_CLOSED, DEGENERATE_FOCK):
        spec = KernelSpec(args.variant, _degenerate_params(args))
    else:
        spec = KernelSpec(args.variant, _generic_params(args))
    v = kernel(spec, _parse_point(args.x), _parse_point(args.xp))
    _emit_json(args, {"variant": args.variant, "re": v.real, "im": v.imag})
    return EXIT_OK


def _kernel_pair_specs(kind, params):
    if kind == "generic":
        return KernelSpec(GENERIC_CLOSED, params), KernelSpec(GENERIC_FOCK, params)
    return KernelSpec(DEGENERATE_CLOSED, params), KernelSpec(DEGENERATE_FOCK, params)


def _cmd_kernel_cross(args) -> int:
    rng = _rng(args)
    worst = 0.0
    for _ in range(args.sets):
        params = _random_generic(rng) if args.kind == "generic" \
            else _random_degenerate(rng)
        closed, fock = _kernel_pair_specs(args.kind, params)
        for _ in range(args.pairs):
            x = PhasePoint(*rng.uniform(-1.0, 1.0, 4))
            xp = PhasePoint(*rng.uniform(-1.0, 1.0, 4))
            a = kernel(closed, x, xp)
            b = kernel(fock, x, xp)
            rel = abs(a - b) / max(abs(a), abs(b))
            worst = max(worst, rel)
    _emit_json(args, {"kind": args.kind, "sets": args.sets, "pairs": args.pairs,
                      "max_rel_diff": worst, "tol": args.tol})
    return EXIT_OK if worst <= args.tol else EXIT_VERIFICATION


def _cmd_gram_psd(args) -> int:
    rng = _rng(args)
    if args.kind == "generic":
        spec = KernelSpec(GENERIC_CLOSED, _generic_params(args))
    else:
        spec = KernelSpec(DEGENERATE_CLOSED, _degenerate_params(args))
    if args.points_file:
        import json
        with open(args.points_file, encoding="utf-8") as fh:
            pts = [PhasePoint(*p) for p in json.load(fh)["points"]]
    else:
        pts = _random_points(rng, args.random)
    g, min_eig = gram_psd(spec, pts)
    max_eig = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[-1])
    ok = min_eig >= -args.tol * max_eig
    _emit_json(args, {
        "kind": args.kind, "n_points": len(pts),
        "re": [[float(v) for v in row] for row in g.real],
        "im": [[float(v) for v in row] for row in g.imag],
        "min_eig": min_eig, "max_eig": max_eig, "tol": args.tol,
    })
    return EXIT_OK if ok else EXIT_VERIFICATION


def _cmd_repro_check(args) -> int:
    rng = _rng(args)
    if args.kind == "generic":
        spec = KernelSpec(GENERIC_CLOSED, _generic_params(args))
    else:
        spec = KernelSpec(DEGENERATE_CLOSED, _degenerate_params(args))
    if args.x and args.xp:
        pairs = [(_parse_point(args.x), _parse_point(args.xp))]
    else:
        pairs = [(PhasePoint(*rng.uniform(-1.0, 1.0, 4)),
                  PhasePoint(*rng.uniform(-1.0, 1.0, 4)))
                 for _ in range(args.random)]
    residuals = [reproducing_check(spec, x, xp, args.nodes) for x, xp in pairs]
    worst = max(residuals)
    _emit_json(args, {"kind": args.kind, "nodes": args.nodes,
                      "residuals": residuals, "max_residual": worst,
                      "tol": args.tol})
    return EXIT_OK if worst <= args.tol else EXIT_VERIFICATION


def _cmd_wh_limit(args) -> int:
    rng = _rng(args)
    x = _parse_point(args.x) if args.x else PhasePoint(*rng.uniform(-1.0, 1.0, 4))
    xp = _parse_point(args.xp) if args.xp else PhasePoint(*rng.uniform(-1.0, 1.0, 4))
    ts = np.logspace(math.log10(args.t_max), math.log10(args.t_min), args.points)
    gaps = [wh_limit_gap(args.hbar, args.s or math.sqrt(args.hbar),
                         args.theta0, args.calB0, float(t), x, xp) for t in ts]
    slope = float(np.polyfit(np.log(ts), np.log(np.maximum(gaps, 1e-300)), 1)[0])
    ok = abs(slope - 1.0) <= args.slope_tol
    rows = [{"t": float(t), "gap": float(g), "slope": slope}
            for t, g in zip(ts, gaps)]
    if args.format == "csv":
        _emit(args, csv_text(rows, ["t", "gap", "slope"]))
    else:
        _emit_json(args, {"samples": rows, "slope": slope,
                          "slope_tol": args.slope_tol})
    return EXIT_OK if ok else EXIT_VERIFICATION


def _cmd_toeplitz_build(args) -> int:
    F = _parse_phase_symbol(args.F)
    if args.kind == "generic":
        params = _generic_params(args)
        basis = FockBasis(2, args.N, params.hbar)
    else:
        params = _degenerate_params(args)
        basis = FockBasis(1, args.N, params.hbar)
    op = build_nc_toeplitz(params, basis, F)
    _emit_json(args, matrix_to_json_dict(op))
    return EXIT_OK


def _commutator_cmd(args, params) -> int:
    report = commutator_table(params, args.N)
    _emit_json(args, report.to_json_dict())
    return EXIT_OK if report.max_deviation <= args.tol else EXIT_VERIFICATION


def _cmd_commutator_table(args) -> int:
    return _commutator_cmd(args, _generic_params(args))


def _cmd_degenerate_table(args) -> int:
    return _commutator_cmd(args, _degenerate_params(args))


def _orders_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def _cmd_star_coeffs(args) -> int:
    params = _generic_params(args)
    params.require_generic("star-coeffs")
    F = _parse_phase_symbol(args.F)
    G = _parse_phase_symbol(args.G)
    coeffs = []
    for j in _orders_list(args.orders):
        sym = star.cc_j(params, F, G, j)
        coeffs.append({"j": j, "text": sym.to_text(),
                       "terms": symbol_terms_json(sym)})
    _emit_json(args, {"F": args.F, "G": args.G, "coefficients": coeffs})
    return EXIT_OK


def _cmd_matrix_a(args) -> int:
    params = _generic_params(args)
    A = star.matrix_A(params)
    _emit_json(args, {
        "order": list(star.A_VARS),
        "re": [[float(v) for v in row] for row in A.real],
        "im": [[float(v) for v in row] for row in A.imag],
    })
    return EXIT_OK


def _cmd_expand_print(args) -> int:
    F = _parse_phase_symbol(args.F)
    G = _parse_phase_symbol(args.G)
    machine = star.star_expansion_terms(F, G, S=1.0, total_order=args.order)
    machine_comm = star.commutator_expansion_terms(F, G, S=1.0,
                                                   total_order=args.order)
    direct = star.star_expansion_direct(F, G)
    direct_comm = star.commutator_expansion_direct(F, G)

    def against(mach, ref):
        worst = 0.0
        for key in set(mach) | set(ref):
            a = mach.get(key)
            b = ref.get(key)
            if a is None or b is None:
                missing = a if a is not None else b
                worst = max(worst, missing.max_abs_coeff())
            else:
                worst = max(worst, a.max_coeff_diff(b))
        return worst

    # the direct display covers grades <= 2; compare on those keys only
    displayed = {k: v for k, v in machine.items() if sum(k) <= 2}
    displayed_comm = {k: v for k, v in machine_comm.items() if sum(k) <= 2}
    dev = max(against(displayed, direct), against(displayed_comm, direct_comm))

    def render(terms):
        return [{"hbar_order": k[0], "B_order": k[1], "T_order": k[2],
                 "text": v.to_text(), "terms": symbol_terms_json(v)}
                for k, v in sorted(terms.items())]

    _emit_json(args, {
        "F": args.F, "G": args.G, "total_order": args.order,
        "product_terms": render(machine),
        "commutator_terms": render(machine_comm),
        "max_deviation_vs_direct": dev, "tol": args.tol,
    })
    return EXIT_OK if dev <= args.tol else EXIT_VERIFICATION


def _cmd_residual_sweep(args) -> int:
    params = _generic_params(args)
    F = _parse_phase_symbol(args.F)
    G = _parse_phase_symbol(args.G)
    hbars = [float(v) for v in args.hbars.split(",")]
    report = star.expansion_residual(params, F, G, args.order, args.N,
                                     hbars, joint=args.joint)
    rows = report.to_csv_rows()
    if args.format == "json":
        _emit_json(args, {"order": report.order, "slope": report.slope,
                          "interior_degree": report.interior_degree,
                          "joint": report.joint, "samples": rows})
    else:
        _emit(args, csv_text(rows, ["hbar", "B", "T", "S", "order",
                                    "interior_degree", "residual", "slope"]))
    if args.expect_slope is not None:
        if abs(report.slope - args.expect_slope) > args.slope_tol:
            return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_degenerate_coeffs(args) -> int:
    dp = _degenerate_params(args)
    F = _parse_phase_symbol(args.F)
    G = _parse_phase_symbol(args.G)
    coeffs = []
    worst = 0.0
    for j in _orders_list(args.orders):
        sym = star.cc_j_degenerate(dp, F, G, j)
        if args.check_independence:
            for factor in (0.5, 10.0):
                alt = DegenerateParams(dp.hbar, dp.theta * factor, dp.kappa,
                                       dp.delta, dp.s,
                                       base_point=(dp.base_point[0] + 1.0,
                                                   dp.base_point[1] - 2.0))
                worst = max(worst, sym.max_coeff_diff(
                    star.cc_j_degenerate(alt, F, G, j)))
        coeffs.append({"j": j, "text": sym.to_text(),
                       "terms": symbol_terms_json(sym)})
    doc = {"F": args.F, "G": args.G, "coefficients": coeffs}
    if args.check_independence:
        doc["max_independence_deviation"] = worst
        doc["tol"] = args.tol
    _emit_json(args, doc)
    if args.check_independence and worst > args.tol:
        return EXIT_VERIFICATION
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="nctoeplitz",
                     description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", type=str, default=None,
                       help="write the artifact to this path instead of stdout")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("params-check", help="classify a parameter triple")
    _generic_flags(p)
    common(p)
    p.set_defaults(fn=_cmd_params_check)

    p = sub.add_parser("kernel-eval", help="evaluate one kernel variant")
    p.add_argument("--variant", required=True, choices=VARIANTS)
    p.add_argument("--x", required=True)
    p.add_argument("--xp", required=True)
    _generic_flags(p)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--base-point", type=str, default="0,0")
    common(p)
    p.set_defaults(fn=_cmd_kernel_eval)

    p = sub.add_parser("kernel-cross",
                       help="closed form vs Fock-side form on random data")
    p.add_argument("--kind", choices=("generic", "degenerate"), default="generic")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--sets", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-12)
    common(p)
    p.set_defaults(fn=_cmd_kernel_cross)

    p = sub.add_parser("gram-psd", help="Gram matrix and its minimum eigenvalue")
    p.add_argument("--kind", choices=("generic", "degenerate"), default="generic")
    _generic_flags(p)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--base-point", type=str, default="0,0")
    p.add_argument("--points-file", type=str, default=None,
                   help='JSON {"points": [[q1,q2,p1,p2], ...]}')
    p.add_argument("--random", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(fn=_cmd_gram_psd)

    p = sub.add_parser("repro-check",
                       help="resolution-of-identity residual by quadrature")
    p.add_argument("--kind", choices=("generic", "degenerate"), default="generic")
    _generic_flags(p)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--base-point", type=str, default="0,0")
    p.add_argument("--x", type=str, default=None)
    p.add_argument("--xp", type=str, default=None)
    p.add_argument("--random", type=int, default=5)
    p.add_argument("--nodes", type=int, default=24)
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(fn=_cmd_repro_check)

    p = sub.add_parser("wh-limit",
                       help="gap to the Weyl-Heisenberg kernel under scaling")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--theta0", type=float, default=0.1)
    p.add_argument("--B0", dest="calB0", type=float, default=0.1)
    p.add_argument("--t-min", type=float, default=1e-3)
    p.add_argument("--t-max", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=7)
    p.add_argument("--x", type=str, default=None)
    p.add_argument("--xp", type=str, default=None)
    p.add_argument("--slope-tol", type=float, default=0.1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(fn=_cmd_wh_limit)

    p = sub.add_parser("toeplitz-build", help="Toeplitz matrix of a symbol")
    p.add_argument("--kind", choices=("generic", "degenerate"), default="generic")
    p.add_argument("--F", required=True)
    p.add_argument("--N", type=int, default=10)
    _generic_flags(p)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--base-point", type=str, default="0,0")
    common(p)
    p.set_defaults(fn=_cmd_toeplitz_build)

    p = sub.add_parser("commutator-table",
                       help="coordinate-symbol commutators vs their scalars")
    _generic_flags(p)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(fn=_cmd_commutator_table)

    p = sub.add_parser("degenerate-table",
                       help="degenerate commutator table vs its scalars")
    _degenerate_flags(p)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(fn=_cmd_degenerate_table)

    p = sub.add_parser("star-coeffs", help="star-product coefficient symbols")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--orders", type=str, default="0,1,2")
    _generic_flags(p)
    common(p)
    p.set_defaults(fn=_cmd_star_coeffs)

    p = sub.add_parser("matrix-a", help="first-order contraction matrix")
    _generic_flags(p)
    common(p)
    p.set_defaults(fn=_cmd_matrix_a)

    p = sub.add_parser("expand-print",
                       help="graded (hbar, B, T) expansion vs direct formulas")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-12)
    common(p)
    p.set_defaults(fn=_cmd_expand_print)

    p = sub.add_parser("residual-sweep",
                       help="semiclassical residuals and their log-log slope")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--hbars", type=str,
                   default="1e-1,3.16e-2,1e-2,3.16e-3,1e-3")
    p.add_argument("--joint", action="store_true",
                   help="scale B and T proportionally to hbar")
    _generic_flags(p)
    p.add_argument("--expect-slope", type=float, default=None)
    p.add_argument("--slope-tol", type=float, default=0.05)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(fn=_cmd_residual_sweep)

    p = sub.add_parser("degenerate-coeffs",
                       help="degenerate star coefficients on the base plane")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--orders", type=str, default="0,1,2")
    _degenerate_flags(p)
    p.add_argument("--check-independence", action="store_true")
    p.add_argument("--tol", type=float, default=1e-12)
    common(p)
    p.set_defaults(fn=_cmd_degenerate_coeffs)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
