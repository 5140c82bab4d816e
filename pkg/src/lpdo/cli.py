"""Command-line interface.

Subcommands: factor, compose, transpose, verify, charpoly.  Operators are
given as arguments in the grammar of lpdo.parser (or on standard input
when the argument is '-' or omitted).  Exit codes for `factor`:

    0  factored            2  conditions fail (residuals printed)
    3  degenerate          4  unsupported root
    1  usage or parse error
"""

from __future__ import annotations

import argparse
import json
import sys

from .charpoly import char_poly, find_roots
from .factorize import (
    OutcomeStatus,
    factor_all_roots,
    factor_fully,
    factor_left,
    factor_right,
    verify,
)
from .operator import FirstOrderFactor, LPDO
from .parser import ParseError, parse, parse_function
from .printer import (
    charpoly_str,
    operator_latex,
    operator_str,
    operator_structured,
    outcome_str,
    outcome_structured,
    tree_str,
)

_EXIT_BY_STATUS = {
    OutcomeStatus.FACTORED: 0,
    OutcomeStatus.CONDITIONS_FAIL: 2,
    OutcomeStatus.DEGENERATE: 3,
    OutcomeStatus.UNSUPPORTED_ROOT: 4,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--params", default="",
                   help="comma-separated parameter names")
    p.add_argument("--format", choices=("plain", "latex", "structured"),
                   default="plain")


def _build() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lpdo",
        description="first-order factorization of linear PDE operators "
                    "in two variables")
    sub = top.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="find a first-order factor")
    f.add_argument("operator", nargs="?", default="-")
    f.add_argument("--side", choices=("left", "right"), default="left")
    f.add_argument("--root", default=None,
                   help="root index or an explicit root expression")
    f.add_argument("--p3", default=None,
                   help="candidate zero-order part for the degenerate path")
    f.add_argument("--recursive", action="store_true",
                   help="factor the cofactor recursively")
    f.add_argument("--max-shear", type=int, default=None)
    _add_common(f)

    c = sub.add_parser("compose", help="compose operators left to right")
    c.add_argument("operators", nargs="+")
    _add_common(c)

    t = sub.add_parser("transpose", help="formal transpose")
    t.add_argument("operator", nargs="?", default="-")
    _add_common(t)

    v = sub.add_parser("verify", help="check factor * cofactor == operator")
    v.add_argument("factor")
    v.add_argument("cofactor")
    v.add_argument("operator")
    v.add_argument("--side", choices=("left", "right"), default="left")
    _add_common(v)

    p = sub.add_parser("charpoly", help="characteristic polynomial and roots")
    p.add_argument("operator", nargs="?", default="-")
    _add_common(p)

    return top


def _read_operator(text: str, params: set[str]) -> LPDO:
    if text == "-":
        text = sys.stdin.read()
    return parse(text, params)


def _params(args) -> set[str]:
    return {p.strip() for p in args.params.split(",") if p.strip()}


def _print_operator(op: LPDO, fmt: str) -> None:
    if fmt == "latex":
        print(operator_latex(op))
    elif fmt == "structured":
        print(json.dumps(operator_structured(op), indent=2))
    else:
        print(operator_str(op))


def _cmd_factor(args) -> int:
    params = _params(args)
    op = _read_operator(args.operator, params)
    root_choice = None
    if args.root is not None:
        if args.root.isdigit():
            root_choice = int(args.root)
        else:
            root_choice = parse_function(args.root, params)
    p3 = parse_function(args.p3, params) if args.p3 is not None else None
    run = factor_right if args.side == "right" else factor_left

    if args.recursive:
        tree = factor_fully(op, args.max_shear)
        print(tree_str(tree, args.format))
        statuses = [outcome.status for outcome, _ in tree.branches]
        best = min(statuses, key=lambda s: _EXIT_BY_STATUS[s],
                   default=OutcomeStatus.UNSUPPORTED_ROOT)
        return _EXIT_BY_STATUS[best]

    best = run(op, root_choice=root_choice, p3=p3, max_shear=args.max_shear)
    if root_choice is None and args.side == "left" and \
            best.status is not OutcomeStatus.FACTORED and \
            best.status is not OutcomeStatus.UNSUPPORTED_ROOT:
        # report every root branch when nothing factored outright
        outcomes = factor_all_roots(op, args.max_shear)
        if args.format == "structured":
            print(json.dumps([outcome_structured(o) for o in outcomes], indent=2))
        else:
            for i, o in enumerate(outcomes):
                if i:
                    print()
                print(outcome_str(o, args.format))
    else:
        print(outcome_str(best, args.format))
    return _EXIT_BY_STATUS[best.status]


def _cmd_compose(args) -> int:
    params = _params(args)
    ops = [_read_operator(t, params) for t in args.operators]
    out = ops[0]
    for nxt in ops[1:]:
        out = out.compose(nxt)
    _print_operator(out, args.format)
    return 0


def _cmd_transpose(args) -> int:
    params = _params(args)
    op = _read_operator(args.operator, params)
    _print_operator(op.transpose(), args.format)
    return 0


def _cmd_verify(args) -> int:
    params = _params(args)
    f_op = _read_operator(args.factor, params)
    cof = _read_operator(args.cofactor, params)
    op = _read_operator(args.operator, params)
    factor = FirstOrderFactor.from_operator(f_op)
    diff = verify(factor, cof, op, side=args.side)
    if diff.is_zero():
        print("ok: product equals the operator")
        return 0
    print("mismatch:")
    _print_operator(diff, args.format)
    return 2


def _cmd_charpoly(args) -> int:
    params = _params(args)
    op = _read_operator(args.operator, params)
    p = char_poly(op)
    search = find_roots(p)
    if args.format == "structured":
        doc = {
            "n": p.n,
            "coeffs": [str(c) for c in p.coeffs],
            "roots": [
                {
                    "value": None if r.at_infinity else str(r.value),
                    "multiplicity": r.multiplicity,
                    "at_infinity": r.at_infinity,
                    "extensions": list(r.extensions),
                }
                for r in search.roots
            ],
            "unresolved": [str(c) for c in search.unresolved],
        }
        print(json.dumps(doc, indent=2))
        return 0
    print(f"P({'w'}) = {charpoly_str(p, args.format)}")
    for r in search.roots:
        print(f"root: {r}")
    if search.unresolved:
        print("unresolved factor coefficients: "
              + ", ".join(str(c) for c in search.unresolved))
    return 0


_COMMANDS = {
    "factor": _cmd_factor,
    "compose": _cmd_compose,
    "transpose": _cmd_transpose,
    "verify": _cmd_verify,
    "charpoly": _cmd_charpoly,
}


def main(argv=None) -> int:
    parser = _build()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
