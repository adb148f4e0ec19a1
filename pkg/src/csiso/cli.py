"""Command line: ``csiso auto|iso|fulliso|series|verify|oracle``.

All output is canonical JSON on stdout.  Exit status 2 means an input failed
validation, 3 means an engine self-check failed.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import oracle
from .cayley import CayleyGroup, GroupError
from .io import dumps, load_group, load_series, series_to_obj
from .permgroup import EngineContractError
from .series import (
    SeriesSpec,
    bottom_up_auto,
    characteristic_series,
    comp_series_iso,
    enumerate_composition_series,
    first_composition_series,
    full_iso,
    top_down_auto,
    validate_series,
)

EXIT_INVALID = 2
EXIT_ENGINE = 3


def max_order() -> int:
    raw = os.environ.get("CSISO_MAX_ORDER", "64")
    try:
        return int(raw)
    except ValueError:
        raise GroupError(f"CSISO_MAX_ORDER must be an integer, got {raw!r}") from None


def _cap(*groups: CayleyGroup) -> None:
    limit = max_order()
    for G in groups:
        if G.order > limit:
            raise GroupError(f"group order {G.order} exceeds CSISO_MAX_ORDER={limit}")


def _group_and_series(gpath: str, spath: str | None, verify: bool) -> SeriesSpec:
    G = load_group(gpath, verify=verify)
    if spath is None:
        return first_composition_series(G)
    return load_series(spath, G, verify=verify)


def _iso_obj(res) -> dict:
    if not res.isomorphic:
        return {"isomorphic": False}
    return {"isomorphic": True, "iso": list(res.iso.image), "aut_order": str(res.solution_count)}


def cmd_auto(args) -> dict:
    spec = _group_and_series(args.group, args.series, args.verify)
    _cap(spec.group)
    solve = bottom_up_auto if args.method == "bottom-up" else top_down_auto
    X = solve(spec, engine=args.engine)
    w = X.witness.index_bound if X.witness is not None else X.order
    return {"generators": [list(g) for g in X.strong_generators], "order": str(X.order), "witness_index": w}


def cmd_iso(args) -> dict:
    s1 = _group_and_series(args.group1, args.series1, args.verify)
    s2 = _group_and_series(args.group2, args.series2, args.verify)
    _cap(s1.group, s2.group)
    return _iso_obj(comp_series_iso(s1, s2, engine=args.engine))


def cmd_fulliso(args) -> dict:
    G1 = load_group(args.group1, verify=args.verify)
    G2 = load_group(args.group2, verify=args.verify)
    _cap(G1, G2)
    return _iso_obj(full_iso(G1, G2, engine=args.engine))


def cmd_series(args) -> list:
    G = load_group(args.group, verify=args.verify)
    if args.characteristic:
        cs = characteristic_series(G)
        return [[list(S.elements) for S in cs.terms[1:]]]
    specs = enumerate_composition_series(G) if args.all else [first_composition_series(G)]
    return [series_to_obj(s)["series"] for s in specs]


def cmd_verify(args) -> dict:
    G = load_group(args.group)
    out: dict = {"order": G.order, "associative": G.is_associative()}
    if args.series is not None:
        spec = load_series(args.series, G)
        rep = validate_series(spec)
        out["series"] = {"valid": rep.ok, "composition": rep.composition, "problem": rep.problem}
    return out


def _generating_subset(elements: list[tuple[int, ...]], degree: int) -> list[list[int]]:
    gens: list[tuple[int, ...]] = []
    span = {tuple(range(degree))}
    for f in elements:
        if f not in span:
            gens.append(f)
            span = oracle.perm_closure(gens, degree)
    return [list(g) for g in gens]


def cmd_oracle(args) -> dict | list:
    if args.problem == "auto":
        spec = _group_and_series(args.group, args.series, args.verify)
        _cap(spec.group)
        auts = oracle.aut_fixing_series(spec.group, spec.term_sets())
        return {"generators": _generating_subset(auts, spec.group.order), "order": str(len(auts))}
    if args.problem == "iso":
        s1 = _group_and_series(args.group1, args.series1, args.verify)
        s2 = _group_and_series(args.group2, args.series2, args.verify)
        _cap(s1.group, s2.group)
        isos = oracle.iso_matching_series(s1.group, s1.term_sets(), s2.group, s2.term_sets())
    elif args.problem == "fulliso":
        G1 = load_group(args.group1, verify=args.verify)
        G2 = load_group(args.group2, verify=args.verify)
        _cap(G1, G2)
        isos = oracle.all_isomorphisms(G1, G2)
    else:
        G = load_group(args.group, verify=args.verify)
        _cap(G)
        found = sorted(sorted(sorted(t) for t in chain[1:]) for chain in oracle.composition_series_brute(G))
        return found
    if not isos:
        return {"isomorphic": False}
    return {"isomorphic": True, "iso": list(isos[0]), "aut_order": str(len(isos))}


def _add_common(p: argparse.ArgumentParser, engine: bool = True) -> None:
    p.add_argument("--verify", action="store_true", help="also check associativity of every table")
    if engine:
        p.add_argument("--engine", choices=("l1", "l2", "auto"), default="l2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csiso", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("auto", help="automorphisms preserving a composition series")
    p.add_argument("group")
    p.add_argument("series", nargs="?", help="series file (default: first composition series)")
    p.add_argument("--method", choices=("bottom-up", "top-down"), default="bottom-up")
    _add_common(p)
    p.set_defaults(func=cmd_auto)

    p = sub.add_parser("iso", help="isomorphism carrying one series onto another")
    for a in ("group1", "series1", "group2", "series2"):
        p.add_argument(a)
    _add_common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("fulliso", help="isomorphism test over all composition series")
    p.add_argument("group1")
    p.add_argument("group2")
    _add_common(p)
    p.set_defaults(func=cmd_fulliso)

    p = sub.add_parser("series", help="list composition or characteristic series")
    p.add_argument("group")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--all", action="store_true", help="every composition series")
    which.add_argument("--characteristic", action="store_true", help="the characteristic series")
    _add_common(p, engine=False)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="validate a group file and optionally a series file")
    p.add_argument("group")
    p.add_argument("series", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force counterparts of the solver commands")
    osub = p.add_subparsers(dest="problem", required=True)
    q = osub.add_parser("auto")
    q.add_argument("group")
    q.add_argument("series", nargs="?")
    _add_common(q, engine=False)
    q = osub.add_parser("iso")
    for a in ("group1", "series1", "group2", "series2"):
        q.add_argument(a)
    _add_common(q, engine=False)
    q = osub.add_parser("fulliso")
    q.add_argument("group1")
    q.add_argument("group2")
    _add_common(q, engine=False)
    q = osub.add_parser("series")
    q.add_argument("group")
    _add_common(q, engine=False)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except GroupError as exc:
        print(f"csiso: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EngineContractError as exc:
        print(f"csiso: engine contract violated: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
