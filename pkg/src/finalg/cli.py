"""Command-line interface.

Exit codes: 0 all checks passed, 1 semantic failure (an identity or law
fails), 2 input error (bad file, parse error, unknown name), 3 budget
refusal.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog, dsl, groups, search, verify
from .core import AlgebraError, BudgetError, validate_algebra
from .identities import (
    check_identity,
    check_suite,
    resolve_suite,
    unit_constants,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _load_algebra(path):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SystemExit2(f"cannot read {path}: {e}")
    try:
        algebras, identities = dsl.parse_file(text)
    except dsl.DslError as e:
        raise SystemExit2(f"{path}: {e}")
    if len(algebras) != 1:
        raise SystemExit2(f"{path}: expected exactly one algebra block")
    return algebras[0], identities


class SystemExit2(Exception):
    """Input error destined for exit code 2."""


def _emit_reports(reports, fmt, out):
    for r in reports:
        if fmt == "structured":
            out(json.dumps(r.to_dict()))
        else:
            out(r.line())


def cmd_check(args, out):
    alg, file_identities = _load_algebra(args.file)
    v = validate_algebra(alg)
    if not v.ok:
        raise SystemExit2(f"{args.file}: {v.detail}")
    identities = []
    if args.suite:
        units = None
        try:
            n = int(args.suite.partition(":")[2] or 1)
            units = unit_constants(alg, n)
        except AlgebraError:
            units = None
        try:
            identities.extend(resolve_suite(args.suite, units).identities)
        except KeyError as e:
            raise SystemExit2(str(e))
    by_name = {i.name: i for i in file_identities}
    for name in args.identity or []:
        if name in by_name:
            identities.append(by_name[name])
        else:
            try:
                units = None
                try:
                    n = int(name.partition(":")[2] or 1)
                    units = unit_constants(alg, n)
                except AlgebraError:
                    pass
                identities.extend(resolve_suite(name, units).identities)
            except KeyError:
                raise SystemExit2(f"unknown identity or suite {name!r}")
    if not identities:
        identities = file_identities
    if not identities:
        raise SystemExit2("nothing to check: give --suite or --identity "
                          "or put identity statements in the file")
    kw = {"mode": args.mode, "samples": args.samples, "seed": args.seed}
    if args.budget:
        kw["budget"] = args.budget
    reports = [check_identity(alg, i, **kw) for i in identities]
    _emit_reports(reports, args.format, out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


_CONSTRUCTIONS = {}


def _construction(name):
    def reg(fn):
        _CONSTRUCTIONS[name] = fn
        return fn

    return reg


@_construction("projection")
def _c_projection(args):
    return catalog.build_projection_algebra(args.m, args.n, args.i)


@_construction("semigroup")
def _c_semigroup(args):
    return catalog.build_semigroup_algebra(
        catalog.cyclic_group(args.order), args.n, args.i
    )


@_construction("group-product")
def _c_group_product(args):
    orders = [int(x) for x in args.orders.split(",")]
    indices = tuple(int(x) for x in args.indices.split(","))
    return catalog.build_group_product_algebra(
        [catalog.cyclic_group(k) for k in orders], indices, args.n
    )


@_construction("matrix-rows")
def _c_matrix(args):
    return catalog.build_matrix_row_algebra(args.q, args.n)


@_construction("bounded-monoid")
def _c_bounded(args):
    return catalog.build_bounded_monoid_algebra(
        catalog.cyclic_monoid(args.order), args.n
    )


@_construction("lattice")
def _c_lattice(args):
    if args.shape.startswith("chain:"):
        lat = catalog.chain_lattice(int(args.shape.split(":")[1]))
    elif args.shape == "2x2":
        lat = catalog.product_lattice(
            catalog.chain_lattice(2), catalog.chain_lattice(2)
        )
    else:
        raise SystemExit2(f"unknown lattice shape {args.shape!r}")
    if args.with_alphas:
        return catalog.build_lattice_v2_algebra(lat)
    return catalog.build_lattice_theta(lat, args.variant)


@_construction("boolean")
def _c_boolean(args):
    return catalog.build_boolean_protomodular(args.k)


@_construction("map-composition")
def _c_maps(args):
    return catalog.build_map_composition_algebra(args.m, args.n)


@_construction("diagonal-retractions")
def _c_retr(args):
    return catalog.build_diagonal_retraction_algebra(args.m, args.n)


@_construction("strict-semiloop")
def _c_semiloop(args):
    return catalog.build_strict_semiloop(args.m, twisted=args.twisted)


def cmd_construct(args, out):
    fn = _CONSTRUCTIONS.get(args.name)
    if fn is None:
        raise SystemExit2(
            f"unknown construction {args.name!r}; "
            f"known: {', '.join(sorted(_CONSTRUCTIONS))}"
        )
    alg = fn(args)
    text = dsl.serialize(alg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        out(text.rstrip("\n"))
    return EXIT_OK


def cmd_derive_group(args, out):
    alg, _ = _load_algebra(args.file)
    try:
        dg = groups.derive_group(alg)
    except groups.PreconditionError as e:
        out(f"REFUSED: {e}")
        if e.report is not None:
            out(e.report.line())
        return EXIT_FAIL
    out(dsl.serialize(groups.group_to_algebra(dg)).rstrip("\n"))
    out(f"# group axioms verified exhaustively on {dg.size} elements; "
        f"source hash {dg.source_hash}")
    return EXIT_OK


def cmd_to_enriched(args, out):
    alg, _ = _load_algebra(args.file)
    try:
        eg = groups.to_enriched(alg)
    except (groups.PreconditionError, groups.GroupLawError) as e:
        out(f"REFUSED: {e}")
        return EXIT_FAIL
    out(dsl.serialize(groups.enriched_to_algebra(eg)).rstrip("\n"))
    return EXIT_OK


def cmd_from_enriched(args, out):
    alg, _ = _load_algebra(args.file)
    try:
        eg = groups.algebra_to_enriched(alg)
        back = groups.from_enriched(eg)
    except (AlgebraError, groups.GroupLawError) as e:
        out(f"REFUSED: {e}")
        return EXIT_FAIL
    out(dsl.serialize(back).rstrip("\n"))
    return EXIT_OK


def cmd_malcev(args, out):
    alg, _ = _load_algebra(args.file)
    try:
        res = groups.malcev_term(alg)
    except groups.PreconditionError as e:
        out(f"REFUSED: {e}")
        return EXIT_FAIL
    entries = ", ".join(str(v) for v in res.table.entries)
    out(f"op mu/3 = [{entries}]")
    _emit_reports(res.law_reports + [res.assoc_report], args.format, out)
    return EXIT_OK if res.laws_ok else EXIT_FAIL


def cmd_search(args, out):
    try:
        with open(args.file, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SystemExit2(f"cannot read {args.file}: {e}")
    try:
        spec = search.parse_search_spec(text, mode=args.search_mode)
    except dsl.DslError as e:
        raise SystemExit2(str(e))
    result = search.search(spec, budget=args.budget or search.SEARCH_BUDGET)
    if args.format == "structured":
        out(json.dumps({
            "outcome": result.outcome,
            "count": result.count,
            "space_size": result.space_size,
            "nodes": result.nodes,
        }))
    else:
        out(result.summary())
    if result.witness is not None:
        out(dsl.serialize(result.witness).rstrip("\n"))
        return EXIT_OK
    if result.outcome == "count":
        return EXIT_OK
    return EXIT_FAIL if spec.mode == "find-first" else EXIT_OK


def cmd_verify(args, out):
    ok = verify.run_criteria(only=args.only, out=out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(
        prog="finalg",
        description="Finite universal-algebra workbench: check identities, "
        "build catalog algebras, derive groups, search small models.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--mode", choices=["exhaustive", "sampled"],
                        default="exhaustive")
        sp.add_argument("--samples", type=int, default=10000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=0)
        sp.add_argument("--format", choices=["text", "structured"],
                        default="text")

    sp = sub.add_parser("check", help="check identities/suites on an algebra")
    sp.add_argument("file")
    sp.add_argument("--suite")
    sp.add_argument("--identity", action="append")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("construct", help="emit a catalog algebra as DSL")
    sp.add_argument("name")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--orders", default="2,3")
    sp.add_argument("--indices", default="1,2")
    sp.add_argument("--shape", default="chain:2")
    sp.add_argument("--variant", default="meet-middle",
                    choices=["meet-last", "meet-middle"])
    sp.add_argument("--with-alphas", action="store_true")
    sp.add_argument("--twisted", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("derive-group",
                        help="derive and verify the group of an algebra")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_derive_group)

    sp = sub.add_parser("to-enriched", help="convert to an enriched group")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_to_enriched)

    sp = sub.add_parser("from-enriched",
                        help="convert an enriched group back to an algebra")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_from_enriched)

    sp = sub.add_parser("malcev", help="materialize and check the Mal'cev term")
    sp.add_argument("file")
    sp.add_argument("--format", choices=["text", "structured"], default="text")
    sp.set_defaults(fn=cmd_malcev)

    sp = sub.add_parser("search", help="search small models for a spec file")
    sp.add_argument("file")
    sp.add_argument("--search-mode", default="find-first",
                    choices=["find-first", "count-all", "prove-none"])
    sp.add_argument("--budget", type=int, default=0)
    sp.add_argument("--format", choices=["text", "structured"], default="text")
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("verify-paper",
                        help="run the full verification suite")
    sp.add_argument("--only")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    def out(line=""):
        print(line)

    try:
        return args.fn(args, out)
    except SystemExit2 as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except dsl.DslError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except AlgebraError as e:
        print(f"failure: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
