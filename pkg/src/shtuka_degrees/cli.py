"""Command-line entry point.

Exit codes: 0 ok, 2 parse or usage error, 3 failed invariant, 4 unresolved
census, 5 value not rational.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .bundles import HermitianPair, selfdual_classes
from .curve_zeta import CoverData
from .eisenstein import degenerate_rank2_closed_form, degenerate_rank2_coefficient, restriction_tag
from .errors import InvariantError, SpecParseError, UnresolvedCensusError, UnsupportedError
from .exact_algebra import ExpFraction, NotRationalError
from .intersection import (
    BCLInput,
    asw_degree,
    dkernel_coefficient,
    gkz_rhs,
    u1_cycle_degree,
    z2_intersection_degree,
)
from .picard import Character, LineBundleClass, matches_restriction
from .verify import Workspace, load_workspace, verify_all

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_CENSUS, EXIT_NOT_RATIONAL = 0, 2, 3, 4, 5


def _emit(args, record: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=False))
    else:
        for line in lines:
            print(line)


def _series_json(f) -> dict | list:
    if isinstance(f, ExpFraction):
        return {"num": f.num.to_pairs(), "den": f.den.to_pairs()}
    return f.to_pairs()


def _pick(items: list, index: int, what: str):
    if not 0 <= index < len(items):
        raise ValueError(f"{what} index {index} out of range (0..{len(items) - 1})")
    return items[index]


def _e1(ws: Workspace, args) -> LineBundleClass:
    return _pick(ws.pic.xp_classes(args.deg_e1), args.e1_index, "--e1-index")


def _e2(ws: Workspace, args) -> LineBundleClass:
    return _pick(selfdual_classes(ws.cover), args.e2_index, "--e2-index")


def _chi(ws: Workspace, args, restriction: str = "trivial") -> Character:
    if args.chi is None:
        return _pick(ws.characters[restriction], args.chi_index, "--chi-index")
    try:
        exps = tuple(Fraction(v) for v in args.chi.split(","))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"--chi expects comma-separated fractions, got {args.chi!r}") from None
    if len(exps) != 1 + len(ws.pic.Xp.orders):
        raise ValueError(f"--chi needs {1 + len(ws.pic.Xp.orders)} exponents (degree, then Pic^0 generators)")
    chi = Character(exps, tag=restriction)
    if not matches_restriction(ws.pic, chi, restriction):
        raise ValueError(f"{chi.describe()} does not restrict to {restriction} on Pic(X)")
    return chi


def _cover_header(cover: CoverData) -> dict:
    return {"label": cover.label, "mode": cover.mode, "q": cover.q, "genus": cover.genus}


# ----------------------------------------------------------------------------
# subcommands


def cmd_zeta(args) -> int:
    ws = load_workspace(args.spec)
    c = ws.cover
    record = {
        **_cover_header(c),
        "degOmega": c.deg_omega,
        "zetaX": c.zeta_x.to_pairs(),
        "zetaXprime": c.zeta_xprime.to_pairs(),
        "etaL": c.eta_l.to_pairs(),
    }
    _emit(
        args,
        record,
        [
            f"curve      {c.label} ({c.mode} mode)",
            f"q, genus   {c.q}, {c.genus}",
            f"P_X        {c.zeta_x}",
            f"P_X'       {c.zeta_xprime}",
            f"L(s,eta)   {c.eta_l}",
            f"deg omega  {c.deg_omega}",
        ],
    )
    return EXIT_OK


def cmd_chars(args) -> int:
    ws = load_workspace(args.spec, args.max_order)
    records = []
    lines = []
    for tag in ("trivial", "eta"):
        for i, chi in enumerate(ws.characters[tag]):
            records.append({"index": i, **chi.to_json()})
            lines.append(f"{tag:8s} {i:3d}  order {chi.order}  {chi.describe()}")
    record = {**_cover_header(ws.cover), "maxOrder": args.max_order, "characters": records}
    if ws.cover.mode == "model":
        record["picXprime"] = list(ws.pic.Xp.orders)
        lines.insert(0, f"Pic^0(X') invariant factors {list(ws.pic.Xp.orders)}")
    _emit(args, record, lines)
    return EXIT_OK


def cmd_eis_coeff(args) -> int:
    ws = load_workspace(args.spec)
    c = ws.cover
    E1, E2 = _e1(ws, args), _e2(ws, args)
    chi = _chi(ws, args, args.restriction)
    coeff = degenerate_rank2_coefficient(E1, E2, chi, c)
    record = {
        "inputs": {"E1": str(E1), "E2": str(E2), "chi": chi.describe(), "restriction": args.restriction},
        "coefficient": _series_json(coeff),
    }
    lines = [f"E~(s) = {coeff}"]
    if restriction_tag(chi, c) == "trivial":
        closed = degenerate_rank2_closed_form(E1, E2, chi, c)
        record["closedForm"] = closed.to_pairs()
        record["agree"] = closed == coeff
        lines.append(f"closed form agrees: {closed == coeff}")
    _emit(args, record, lines)
    return EXIT_OK


def cmd_genus_drop_check(args) -> int:
    ws = load_workspace(args.spec)
    c = ws.cover
    cases, failures = 0, []
    for d in range(args.deg_min, args.deg_max + 1):
        for E1 in ws.pic.xp_classes(d):
            for E2 in selfdual_classes(c):
                for chi in ws.trivial_characters:
                    cases += 1
                    if degenerate_rank2_coefficient(E1, E2, chi, c) != degenerate_rank2_closed_form(E1, E2, chi, c):
                        failures.append({"E1": str(E1), "E2": str(E2), "chi": chi.describe()})
    record = {"cases": cases, "failures": failures, "passed": not failures}
    _emit(args, record, [f"{cases} cases, {len(failures)} mismatches"])
    if failures:
        print(f"error: genus-drop-dual-path failed on {len(failures)} cases", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_degree(args) -> int:
    ws = load_workspace(args.spec)
    c = ws.cover
    E1, E2, chi = _e1(ws, args), _e2(ws, args), _chi(ws, args)
    main = z2_intersection_degree(E1, args.a1, E2, chi, c, args.r)
    results = [main]
    if args.verify:
        if args.a1 == "zero":
            results.append(asw_degree(HermitianPair(E1, E2, "zero", "iso"), chi, c, args.r))
            results.append(u1_cycle_degree(E1, E2, c, args.r))
        else:
            results.append(asw_degree(HermitianPair(E1, E2, args.a1, "iso"), chi, c, args.r))
    values = {r.value for r in results}
    record = {
        "formulaPath": main.provenance,
        "value": str(main.value),
        "r": args.r,
        "inputs": main.inputs,
        "paths": [r.to_json() for r in results],
        "agree": len(values) == 1,
    }
    _emit(args, record, [f"{r.provenance:10s} {r.value}" for r in results])
    if len(values) != 1:
        raise InvariantError("degree-consistency", "formula paths disagree: " + ", ".join(str(v) for v in values))
    return EXIT_OK


def cmd_dkernel(args) -> int:
    ws = load_workspace(args.spec)
    E1, E2, chi = _e1(ws, args), _e2(ws, args), _chi(ws, args)
    value = dkernel_coefficient(E1, args.a1, E2, chi, ws.cover, args.r)
    record = {"value": value.to_json(), "r": args.r, "inputs": {"E1": str(E1), "E2": str(E2), "chi": chi.describe()}}
    _emit(args, record, [f"D = {value}"])
    return EXIT_OK


def cmd_gkz_rhs(args) -> int:
    ws = load_workspace(args.spec)
    bc = BCLInput.load(args.bcl, ws.cover.q)
    E2 = _e2(ws, args)
    value = gkz_rhs(bc, E2, ws.cover, args.m, args.r)
    record = {"value": value.to_json(), "r": args.r, "m": args.m, "inputs": {"E2": str(E2), "lpoly": bc.lpoly.to_pairs()}}
    _emit(args, record, [f"RHS = {value}"])
    return EXIT_OK


def cmd_verify_all(args) -> int:
    summary = verify_all(args.spec)
    lines = [f"{'PASS' if ch.passed else 'FAIL'}  {ch.name}  ({ch.cases} cases) {ch.detail}".rstrip() for ch in summary.checks]
    _emit(args, summary.to_json(), lines)
    if not summary.passed:
        print(f"error: check failed: {summary.first_failure}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser


def _even(value: str) -> int:
    r = int(value)
    if r < 0 or r % 2:
        raise argparse.ArgumentTypeError(f"r must be even and nonnegative, got {r}")
    return r


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shtuka-degrees",
        description="Exact L-functions, Eisenstein coefficients and special-cycle degrees over function fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="curve spec file, or builtin:NAME (f5, f3, f7, f11, f5b, genus2)")
        p.add_argument("--json", action="store_true", help="emit a JSON record")
        p.set_defaults(func=func)
        return p

    def bundles(p: argparse.ArgumentParser, r: bool = True) -> None:
        p.add_argument("--deg-e1", type=int, default=3, help="degree of E1")
        p.add_argument("--e1-index", type=int, default=0, help="index into Pic^0(X') for E1")
        p.add_argument("--e2-index", type=int, default=0, help="index into the self-dual classes for E2")
        p.add_argument("--chi-index", type=int, default=0, help="index into the enumerated characters")
        p.add_argument("--chi", help="explicit exponents a0,a1,... (degree first), overrides --chi-index")
        if r:
            p.add_argument("--r", type=_even, default=2, help="derivative order (even)")
            p.add_argument("--a1", choices=("zero", "iso", "other"), default="zero", help="block a1")

    add("zeta", cmd_zeta, "zeta numerators and L(s, eta)")
    p = add("chars", cmd_chars, "enumerate characters with trivial or eta restriction")
    p.add_argument("--max-order", type=int, default=4)
    p = add("eis-coeff", cmd_eis_coeff, "normalized coefficient at diag(0, a2)")
    bundles(p, r=False)
    p.add_argument("--restriction", choices=("trivial", "eta"), default="trivial")
    p = add("genus-drop-check", cmd_genus_drop_check, "compare both genus-drop paths over a grid")
    p.add_argument("--deg-min", type=int, default=-5)
    p.add_argument("--deg-max", type=int, default=5)
    p = add("degree", cmd_degree, "intersection degree of the special cycle")
    bundles(p)
    p.add_argument("--verify", action="store_true", help="also evaluate the independent formula paths")
    p = add("dkernel", cmd_dkernel, "coefficient of the doubling kernel")
    bundles(p)
    p = add("gkz-rhs", cmd_gkz_rhs, "right-hand side with a supplied base-change L-polynomial")
    p.add_argument("--bcl", required=True, help="JSON file with lpoly pairs and f")
    p.add_argument("--e2-index", type=int, default=0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--r", type=_even, default=2)
    add("verify-all", cmd_verify_all, "run every named check")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"error: invariant {exc.check} failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except UnresolvedCensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CENSUS
    except NotRationalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_RATIONAL
    except (UnsupportedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
