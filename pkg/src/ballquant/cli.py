"""Command line interface.

Each subcommand prints a single JSON document on stdout with sorted
keys, so repeated runs are byte identical; timing goes to stderr.  The
exit code is 0 on success, 1 when a verification suite fails and 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .ball_quantization import (
    build_qmm,
    fundamental_field,
    mutate_add_nu_const,
    mutate_drop_nu2,
    qmm_table_to_json,
    verify_qmm,
)
from .ce_cohomology import (
    coboundary_primitive_roots,
    delta,
    h2_dimension,
    invariant_cocycle_space,
)
from .formal_star import CoefFn, NuSeries
from .psd_builder import PsdSpec, build_psd, psd_spec_to_json
from .retract_pde import (
    apply_operator,
    check_reduction_closure,
    k_basis,
    radial_pde_residual,
    retract_operator,
    xifn_from_json,
    xifn_to_json,
)
from .scalars import parse_frac
from .su1n_model import (
    build_su1n,
    model_to_json,
    verify_m_orthocomplement,
    verify_sigma_pairing,
)

XIFN_ONE = {"terms": [[0, 0, 0, 0, 0, "1/1", "0/1"]]}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _parse_blocks(text: str) -> list:
    return [int(x) for x in text.split(",") if x]


def _cmd_build_psd(args) -> int:
    blocks = _parse_blocks(args.blocks)
    if len(blocks) != args.r:
        sys.stderr.write("--blocks must list one dimension per block\n")
        return 2
    spec = PsdSpec(args.r, blocks)
    psd = build_psd(spec)
    _emit(
        {
            "spec": json.loads(psd_spec_to_json(spec)),
            "algebra": json.loads(psd.algebra.to_json()),
            "blocks": {str(j): roles for j, roles in psd.blocks.items()},
        }
    )
    return 0


def _cmd_su1n_export(args) -> int:
    _emit(json.loads(model_to_json(build_su1n(args.N))))
    return 0


def _cmd_h2(args) -> int:
    if args.su1n is not None:
        algebra = build_su1n(args.su1n).algebra
    elif args.r is not None and args.blocks is not None:
        blocks = _parse_blocks(args.blocks)
        if len(blocks) != args.r:
            sys.stderr.write("--blocks must list one dimension per block\n")
            return 2
        algebra = build_psd(PsdSpec(args.r, blocks)).algebra
    else:
        sys.stderr.write("h2 needs either --su1n N or --r R --blocks n1,..,nR\n")
        return 2
    _emit({"dim": algebra.dim, "h2": h2_dimension(algebra)})
    return 0


def _suite_su1n(args) -> tuple:
    model = build_su1n(args.N)
    pairing = verify_sigma_pairing(model)
    ortho = verify_m_orthocomplement(model)
    ok = pairing.ok and ortho.ok
    return ok, {
        "suite": "su1n",
        "N": args.N,
        "ok": ok,
        "sigma_pairing": {"ok": pairing.ok, "checked": pairing.checked},
        "m_orthocomplement": {"ok": ortho.ok, "checked": ortho.checked},
    }


def _suite_qmm(args) -> tuple:
    alpha = parse_frac(args.alpha) if args.alpha is not None else None
    table = build_qmm(args.N, alpha)
    if args.mutate == "drop-nu2":
        table = mutate_drop_nu2(table)
    elif args.mutate == "add-nu-const":
        if args.label is None or args.value is None:
            raise SystemExit(2)
        table = mutate_add_nu_const(table, args.label, parse_frac(args.value))
    report = verify_qmm(table, args.order, pairs=args.pairs)
    return report.ok, {
        "suite": "qmm",
        "N": args.N,
        "alpha": "symbolic" if alpha is None else args.alpha,
        "mutation": args.mutate,
        "ok": report.ok,
        "order": report.order,
        "exact": report.exact,
        "checked": report.checked,
        "failures": [[li, lj] for li, lj, _ in report.failures],
    }


def _suite_retract(args) -> tuple:
    model = build_su1n(args.N)
    closure = check_reduction_closure(model)
    order = args.order if args.order is not None else 4
    table = build_qmm(args.N, parse_frac(args.alpha) if args.alpha else None)
    chart = table.chart
    one = NuSeries.from_coef(CoefFn.const(chart.nv, parse_frac("1")), order)
    constants_ok = True
    for x in k_basis(chart)[1]:
        op = retract_operator(table, x, order=order)
        if tuple([0] * (chart.nv + 2)) in op or not apply_operator(op, one, order).is_zero():
            constants_ok = False
    fields_ok = True
    for y in chart.m_basis:
        op = retract_operator(table, y, order=order)
        comps = fundamental_field(chart, y)
        for coord, comp in enumerate(comps):
            key = tuple(1 if c == coord else 0 for c in range(chart.nv + 2))
            series = op.get(key)
            got = series.coeffs[0] if series else CoefFn.zero(chart.nv)
            if not got.sub(comp).is_zero():
                fields_ok = False
            if series and any(not c.is_zero() for c in series.coeffs[1:]):
                fields_ok = False
    ok = closure.ok and constants_ok and fields_ok
    return ok, {
        "suite": "retract",
        "N": args.N,
        "ok": ok,
        "dim_w": closure.dim_w,
        "dim_filled": closure.dim_filled,
        "constants_annihilated": constants_ok,
        "m_fields_match": fields_ok,
    }


def _suite_cocycle(args) -> tuple:
    model = build_su1n(args.N)
    h2 = h2_dimension(model.algebra)
    sub, basis = invariant_cocycle_space(model)
    primitive_ok = True
    for gen in basis:
        alpha = coboundary_primitive_roots(model, gen)
        if delta(sub.algebra, alpha).data != gen.data:
            primitive_ok = False
    ok = h2 == 0 and primitive_ok
    return ok, {
        "suite": "cocycle",
        "N": args.N,
        "ok": ok,
        "h2": h2,
        "invariant_dim": len(basis),
        "primitive_ok": primitive_ok,
    }


def _cmd_verify(args) -> int:
    suites = {
        "su1n": _suite_su1n,
        "qmm": _suite_qmm,
        "retract": _suite_retract,
        "cocycle": _suite_cocycle,
    }
    ok, payload = suites[args.suite](args)
    _emit(payload)
    return 0 if ok else 1


def _cmd_retract_residual(args) -> int:
    theta = xifn_from_json(json.loads(args.theta_json))
    wv, om = radial_pde_residual(theta, args.n, order=args.order)
    _emit({"n": args.n, "wv": xifn_to_json(wv), "omega": xifn_to_json(om)})
    return 0


def _cmd_qmm_export(args) -> int:
    alpha = parse_frac(args.alpha) if args.alpha is not None else None
    _emit(qmm_table_to_json(build_qmm(args.N, alpha)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballquant",
        description="Exact checks for the quantization of the rank one domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-psd", help="construct a block nilpotent algebra")
    p.add_argument("--r", type=int, required=True, help="number of blocks")
    p.add_argument("--blocks", required=True, help="comma separated block dimensions")
    p.set_defaults(func=_cmd_build_psd)

    p = sub.add_parser("su1n-export", help="export the su(1,N) model")
    p.add_argument("--N", type=int, default=2)
    p.set_defaults(func=_cmd_su1n_export)

    p = sub.add_parser("h2", help="second cohomology dimension")
    p.add_argument("--su1n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--blocks")
    p.set_defaults(func=_cmd_h2)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=["su1n", "qmm", "retract", "cocycle"], required=True)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--alpha", help="rational value, symbolic when omitted")
    p.add_argument("--order", type=int, help="truncation order override")
    p.add_argument("--pairs", choices=["all", "s"], default="all")
    p.add_argument("--mutate", choices=["drop-nu2", "add-nu-const"])
    p.add_argument("--label", help="moment label for add-nu-const")
    p.add_argument("--value", help="rational constant for add-nu-const")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("retract-residual", help="apply the radial operator")
    p.add_argument("--n", type=int, default=2, help="complex dimension parameter")
    p.add_argument("--order", type=int, help="expand square roots to this nu order")
    p.add_argument(
        "--theta-json",
        default=json.dumps(XIFN_ONE),
        help="radial symbol as JSON, default is the constant 1",
    )
    p.set_defaults(func=_cmd_retract_residual)

    p = sub.add_parser("qmm-export", help="export the quantum moment table")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--alpha")
    p.set_defaults(func=_cmd_qmm_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        return args.func(args)
    finally:
        sys.stderr.write(f"elapsed {time.perf_counter() - start:.3f}s\n")


if __name__ == "__main__":
    sys.exit(main())
