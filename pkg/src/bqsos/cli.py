"""Command-line front end: field classification, exact lengths, lower
bounds, length profiles, table verification, and family sweeps.

Exit codes: 0 success, 1 computation error, 2 usage error.  Data goes to
stdout as JSON (or CSV for profiles); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .fields import Element, FieldError, QuadraticField, classify_field
from .decomposition import (
    DecompositionError,
    EXACT,
    NOT_SUM_OF_SQUARES,
    UNDETERMINED,
    length,
    length_profile,
    pythagoras_lower_bound,
)
from .orders import parse_order_description, quadratic_order, quadratic_order_half
from .parser import parse_element
from .verification import Budget, FAMILIES, sweep, verify_table

STATUS_NAMES = {
    EXACT: "Exact",
    NOT_SUM_OF_SQUARES: "NotSumOfSquares",
    UNDETERMINED: "Undetermined",
}


def _element_json(x):
    return {
        "coords": [str(c) for c in x.coords()],
        "pretty": str(x),
    }


def _field_json(field):
    if isinstance(field, QuadraticField):
        return {"n": field.n, "degree": 2}
    return {
        "p": field.p,
        "q": field.q,
        "m": field.m,
        "s": field.s,
        "t": field.t,
        "m0": field.m0,
        "s0": field.s0,
        "t0": field.t0,
        "type": field.basis_type,
        "roles": list(field.roles),
    }


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _resolve_target(args, parser):
    """(field, order) from --p/--q and an optional order description."""
    desc = getattr(args, "order", None) or "maximal"
    if desc.startswith(("quad:", "quad-half:")):
        order = parse_order_description(desc, None)
        return order.field, order
    if args.p is None or args.q is None:
        parser.error("--p and --q are required unless --order is quad:N form")
    field = classify_field(args.p, args.q)
    order = parse_order_description(desc, field, parse_element=parse_element)
    return field, order


def _cap_from_args(args):
    if args.atr_cap is not None:
        return Fraction(args.atr_cap)
    if args.tr_cap is not None:
        cap = Fraction(args.tr_cap) / 4
        print(
            f"note: --tr-cap {args.tr_cap} interpreted as --atr-cap {cap}"
            " (trace divided by the degree)",
            file=sys.stderr,
        )
        return cap
    return None


def cmd_classify(args, parser):
    field = classify_field(args.p, args.q)
    _emit(_field_json(field))
    return 0


def cmd_length(args, parser):
    field, order = _resolve_target(args, parser)
    alpha = parse_element(args.elem, field)
    result = length(order, alpha, max_n=args.max_n, method=args.method)
    payload = {
        "field": _field_json(field),
        "order": order.label,
        "alpha": _element_json(alpha),
        "status": STATUS_NAMES[result.status],
        "nodes": result.nodes,
        "millis": round(result.millis, 3),
    }
    if result.k is not None:
        payload["length"] = result.k
    if result.witness is not None:
        payload["witness"] = [_element_json(w) for w in result.witness]
    _emit(payload)
    return 0


def cmd_lower_bound(args, parser):
    field, order = _resolve_target(args, parser)
    cap = _cap_from_args(args)
    if cap is None:
        parser.error("one of --atr-cap or --tr-cap is required")
    n, witnesses = pythagoras_lower_bound(order, cap, cache_dir=args.cache)
    _emit({
        "field": _field_json(field),
        "order": order.label,
        "atr_cap": str(cap),
        "lower_bound": n,
        "witnesses": [
            {
                "alpha": _element_json(alpha),
                "decomposition": [_element_json(w) for w in roots],
            }
            for alpha, roots in witnesses
        ],
    })
    return 0


def cmd_profile(args, parser):
    field, order = _resolve_target(args, parser)
    cap = _cap_from_args(args)
    if cap is None:
        parser.error("one of --atr-cap or --tr-cap is required")
    rows = length_profile(order, cap, cache_dir=args.cache)
    if args.format == "csv":
        out = sys.stdout
        out.write("length,abs_trace,alpha,witness\n")
        for row in rows:
            witness = " + ".join(f"({w})^2" for w in row.witness)
            out.write(
                f'{row.length},{row.element.abs_trace()},"{row.element}","{witness}"\n'
            )
    else:
        _emit({
            "field": _field_json(field),
            "order": order.label,
            "atr_cap": str(cap),
            "rows": [
                {
                    "alpha": _element_json(row.element),
                    "length": row.length,
                    "witness": [_element_json(w) for w in row.witness],
                }
                for row in rows
            ],
        })
    return 0


def cmd_verify(args, parser):
    budget = None
    if args.time_budget or args.node_budget:
        budget = Budget(seconds=args.time_budget, nodes=args.node_budget)
    rows = verify_table(
        args.table,
        item=args.item,
        scaled=not args.full,
        budget=budget,
        s_max=args.s_max,
    )
    failures = sum(1 for r in rows if r["status"] != "PASS")
    _emit({"table": args.table, "rows": rows, "failures": failures})
    return 0 if failures == 0 else 1


def cmd_sweep(args, parser):
    def parse_range(text):
        lo, _, hi = text.partition("..")
        return int(lo), int(hi)

    budget = None
    if args.time_budget or args.node_budget:
        budget = Budget(seconds=args.time_budget, nodes=args.node_budget)
    rows = sweep(
        args.family,
        parse_range(args.m_range),
        parse_range(args.s_range),
        budget=budget,
        jobs=args.jobs,
        resume_path=args.resume,
    )
    for row in rows:
        json.dump(row, sys.stdout)
        sys.stdout.write("\n")
    failures = sum(1 for r in rows if r["status"] == "FAIL")
    return 0 if failures == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bqsos",
        description="Exact lengths of sums of squares in totally real "
        "quadratic and biquadratic orders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_field_args(p, order=True):
        p.add_argument("--p", type=int, default=None, help="first generator radicand")
        p.add_argument("--q", type=int, default=None, help="second generator radicand")
        if order:
            p.add_argument(
                "--order",
                default="maximal",
                help="maximal | quad:N | quad-half:N | gen:EXPR;EXPR;...",
            )

    def add_cap_args(p):
        p.add_argument("--atr-cap", default=None,
                       help="cap on trace/degree, as an exact rational")
        p.add_argument("--tr-cap", default=None,
                       help="cap on the trace; divided by the degree")
        p.add_argument("--cache", default=None, help="level-set cache directory")

    p = sub.add_parser("classify", help="canonical field data as JSON")
    add_field_args(p, order=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("length", help="exact length of an element")
    add_field_args(p)
    p.add_argument("--elem", required=True, help="element expression")
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--method", choices=("dfs", "mitm"), default="dfs")
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("lower-bound", help="Pythagoras-number lower bound")
    add_field_args(p)
    add_cap_args(p)
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("profile", help="length of every bounded element")
    add_field_args(p)
    add_cap_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("verify", help="recompute a table of known lengths")
    p.add_argument("--table", required=True,
                   choices=("lemma4.3", "prop4.4", "thm3.1"))
    p.add_argument("--item", type=int, default=None)
    p.add_argument("--scaled", action="store_true",
                   help="reduced ranges and caps (the default)")
    p.add_argument("--full", action="store_true",
                   help="full published ranges and caps")
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--node-budget", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a witness family over a field grid")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--m-range", required=True, metavar="A..B")
    p.add_argument("--s-range", required=True, metavar="C..D")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", default=None, help="JSON-lines file of done rows")
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--node-budget", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (FieldError, DecompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
