"""Command-line entry point.

Exit codes: 0 success or positive answer, 1 negative answer (invalid table,
not isotopic, search exhausted, theorem violation), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import QPredicate, QTable, min_distance, validate
from .decompose import decomposition_tree
from .errors import ParseError, PredicateError, StructureError, TheoremViolation
from .fixtures import FIXTURES
from .generate import (
    SearchExhausted,
    cyclic_table,
    plant,
    random_irreducible,
    random_isotope,
    random_quasigroup,
)
from .io import format_mdscode, format_qtable, format_theorem, format_tree, read_predicate
from .isotopy import find_isotopy, format_witness
from .theorem import corollary_check

GEN_KINDS = ("group", "random-isotope-of-group", "planted-superposition", "random-search-irreducible")


class UsageError(Exception):
    pass


def _load(path: str, fmt: str) -> QPredicate:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return read_predicate(text, fmt)


def _require_valid(pred: QPredicate):
    report = validate(pred.table)
    if not report:
        raise PredicateError(f"not a quasigroup: position {report.position} at {report.fixed} repeats {report.duplicate}")


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_check(args) -> int:
    pred = _load(args.path, args.format)
    report = validate(pred.table)
    if not report:
        print(f"invalid: line through position {report.position} at {report.fixed} repeats symbol {report.duplicate}")
        return 1
    dist = min_distance(pred)
    print(f"valid order={pred.order} arity={pred.table.arity} members={len(pred)} length={pred.arity} min_distance={dist}")
    return 0


def cmd_reduce(args) -> int:
    pred = _load(args.path, args.format)
    _require_valid(pred)
    sys.stdout.write(format_tree(decomposition_tree(pred)))
    return 0


def cmd_theorem1(args) -> int:
    pred = _load(args.path, args.format)
    _require_valid(pred)
    if pred.arity < 4:
        raise UsageError(f"theorem1 needs predicate arity >= 4 (table arity >= 3), got {pred.arity}")
    report = corollary_check(pred, threads=args.threads, strict=args.strict)
    print(report.summary())
    if report.decomposition is not None:
        sys.stdout.write(format_theorem(report.decomposition))
    return 0


def _parse_groups(text: str) -> list[tuple]:
    try:
        return [tuple(int(p) for p in g.split(",")) for g in text.split(";") if g.strip()]
    except ValueError:
        raise UsageError(f"bad --groups {text!r}; expected e.g. '0,4,5;1,6;2;3'") from None


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    s = args.order
    if args.kind == "group":
        table = cyclic_table(s, args.arity)
    elif args.kind == "random-isotope-of-group":
        table = random_isotope(cyclic_table(s, args.arity), rng)
    elif args.kind == "random-search-irreducible":
        table = random_irreducible(s, args.arity, rng, budget=args.budget)
    else:
        if not args.groups:
            raise UsageError("planted-superposition needs --groups")
        groups = _parse_groups(args.groups)
        if args.outer == "irreducible":
            outer = random_irreducible(s, len(groups) - 1, rng, budget=args.budget)
        elif args.outer == "random":
            outer = random_quasigroup(s, len(groups) - 1, rng)
        else:
            outer = _load(args.outer, "auto").table
        inners = [QTable.identity(s) if len(g) == 1 else random_quasigroup(s, len(g), rng) for g in groups]
        table = plant(outer.to_predicate(), groups, inners).predicate.table
    text = format_mdscode(table.to_predicate()) if args.format == "mdscode" else format_qtable(table)
    _emit(text, args.out)
    return 0


def cmd_isotopic(args) -> int:
    p1 = _load(args.path1, args.format)
    p2 = _load(args.path2, args.format)
    _require_valid(p1)
    _require_valid(p2)
    if (p1.order, p1.arity) != (p2.order, p2.arity):
        print("not isotopic (order or arity differ)")
        return 1
    iso = find_isotopy(p1, p2)
    if iso is None:
        print("not isotopic")
        return 1
    sys.stdout.write(format_witness(iso))
    return 0


def cmd_fixture(args) -> int:
    fixture = FIXTURES[args.name]()
    table = fixture.table
    text = format_mdscode(table.to_predicate()) if args.format == "mdscode" else format_qtable(table)
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nquasi", description="Finite multary quasigroups (Latin hypercubes, distance-2 MDS codes).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for retract scans (results do not depend on it)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default="auto"):
        p.add_argument("--format", choices=["auto", "qtable", "mdscode"], default=default)

    p = sub.add_parser("check", help="validate a table or code and report MDS statistics")
    p.add_argument("path")
    add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="print a decomposition tree")
    p.add_argument("path")
    add_format(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("theorem1", help="maximal irreducible retract test and reconstruction")
    p.add_argument("path")
    p.add_argument("--strict", action="store_true", help="re-check group map independence over all fixings")
    add_format(p)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--arity", type=int, default=3, help="table arity (ignored for planted-superposition)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--groups", help="planted groups over predicate positions, e.g. '0,4,5;1,6;2;3'")
    p.add_argument("--outer", default="irreducible", help="planted outer: 'irreducible', 'random' or a file")
    p.add_argument("--budget", type=int, default=2000, help="random-search candidate budget")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["qtable", "mdscode"], default="qtable")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("isotopic", help="search for an isotopy between two predicates")
    p.add_argument("path1")
    p.add_argument("path2")
    add_format(p)
    p.set_defaults(func=cmd_isotopic)

    p = sub.add_parser("fixture", help="write a bundled table")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["qtable", "mdscode"], default="qtable")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PredicateError, SearchExhausted, TheoremViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
