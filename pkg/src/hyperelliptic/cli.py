"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 mathematical validation
failure, 3 internal assertion failure.  Output is deterministic byte-for-byte
for a fixed input and flags.
"""

from __future__ import annotations

import argparse
import json
import sys

from .action import HyperellipticDatum, validate
from .albanese import (
    AlbaneseReport,
    NotASubgroup,
    PipelineInvariantError,
    run_pipeline,
)
from .catalog import UnknownEntry, get_entry, list_entries, run_entry
from .documents import (
    InputError,
    albanese_dict,
    dumps_canonical,
    invariants_dict,
    load_document,
    validation_dict,
)
from .invariants import DivisibilityViolation, canonical_report, invariants_report
from .oracle import (
    build_model,
    fiber_count_level,
    fixed_point_survey,
    oracle_fiber_count,
)

_MATH_ERRORS = (ValueError,)  # all domain errors subclass ValueError
_INTERNAL_ERRORS = (PipelineInvariantError, NotASubgroup, DivisibilityViolation, AssertionError)


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _load(path: str) -> HyperellipticDatum:
    return load_document(path)


def cmd_check(args) -> int:
    datum = _load(args.path)
    report = validate(datum)
    payload = validation_dict(report)
    if args.format == "json":
        sys.stdout.write(dumps_canonical(payload))
    else:
        for key in ("passed", "is_hyperelliptic", "group_order", "free",
                    "form_invariant", "eigenvalues_consistent", "faithful"):
            print(f"{key}: {payload[key]}")
        for failure in payload["failures"]:
            print(f"failure: {failure}")
    return 0 if report.passed else 2


def cmd_albanese(args) -> int:
    datum = _load(args.path)
    report = validate(datum)
    if not report.passed:
        return _fail(2, "invalid datum: " + "; ".join(report.failures()))
    alb = run_pipeline(datum, recurse=args.recurse)
    payload = albanese_dict(alb, datum)
    diag = canonical_report(alb, invariants_report(datum), invariants_report(alb.fiber))
    payload["canonical"] = {
        "x_order": diag.x_canonical_order,
        "fiber_order": diag.fiber_canonical_order,
        "pulled_back_from_albanese": diag.pulled_back_from_albanese,
    }
    if args.format == "json":
        sys.stdout.write(dumps_canonical(payload))
    else:
        _print_albanese_text(payload)
        print(f"canonical orders: omega_X {diag.x_canonical_order}, "
              f"fiber {diag.fiber_canonical_order}; pulled back from Albanese: "
              f"{diag.pulled_back_from_albanese}")
    return 0


def _print_albanese_text(payload: dict, indent: str = "") -> None:
    print(f"{indent}dim X = {payload['dim']}, irregularity q = {payload['q']}, "
          f"|G| = {payload['group_order']}")
    print(f"{indent}K invariant factors: {payload['k']['invariant_factors']}")
    alb = payload["albanese"]
    names = alb["factor_names"]
    base = f" on {' x '.join(names)}" if names else ""
    print(f"{indent}Albanese: dimension {alb['dim']}{base}, "
          f"isogeny factors over Lambda_0: {alb['isogeny_factors']}")
    h = payload["h"]
    print(f"{indent}H: order {h['order']}, element indices {h['element_indices']}")
    fiber = payload["fiber"]
    names = fiber["factor_names"]
    base = f" on {' x '.join(names)}" if names else ""
    print(f"{indent}fiber: {fiber['description']}{base}")
    if payload.get("fiber_report"):
        print(f"{indent}fiber report:")
        _print_albanese_text(payload["fiber_report"], indent + "  ")


def cmd_invariants(args) -> int:
    datum = _load(args.path)
    report = validate(datum)
    if not report.passed:
        return _fail(2, "invalid datum: " + "; ".join(report.failures()))
    inv = invariants_report(datum)
    payload = invariants_dict(inv)
    if args.format == "json":
        sys.stdout.write(dumps_canonical(payload))
    else:
        print(f"dim X = {inv.dim}, q = {inv.q}, |G| = {inv.group_order}, "
              f"cyclic = {inv.cyclic}")
        print(f"canonical order = {inv.canonical_order}, "
              f"chi(O_X) = {inv.euler_char_structure_sheaf}")
        print("Hodge diamond:")
        print(inv.diamond.pretty())
    return 0


def cmd_oracle(args) -> int:
    datum = _load(args.path)
    report = validate(datum)
    if not report.passed:
        return _fail(2, "invalid datum: " + "; ".join(report.failures()))
    survey = fixed_point_survey(datum, level=args.level)
    alb = run_pipeline(datum)
    level = fiber_count_level(datum, alb)
    if args.level is not None:
        if args.level % level != 0:
            return _fail(2, f"level {args.level} is not divisible by the fiber-map "
                            f"denominator {level}")
        level = args.level
    verdict = oracle_fiber_count(build_model(datum, level), alb, datum.group.order)
    payload = {
        "fixed_points": {
            "passed": survey.passed,
            "downgraded_from_formula_level": survey.downgraded,
            "checks": [
                {
                    "element": c.element_index,
                    "level": c.level,
                    "exhaustive": c.exhaustive,
                    "count": c.count,
                    "exact_has_fixed_point": c.exact_has_fixed_point,
                    "agrees": c.agrees,
                }
                for c in survey.checks
            ],
        },
        "fiber_count": {
            "passed": verdict.passed,
            "level": verdict.level,
            "fibers": verdict.fiber_count,
            "points_per_fiber": verdict.predicted_points_per_fiber,
            "witness": list(map(str, verdict.witness)) if verdict.witness else None,
        },
    }
    if args.format == "json":
        sys.stdout.write(dumps_canonical(payload))
    else:
        print(f"fixed points: {'pass' if survey.passed else 'FAIL'}"
              f"{' (reduced levels)' if survey.downgraded else ''}")
        for c in survey.checks:
            print(f"  element {c.element_index}: count {c.count} at level {c.level}"
                  f" ({'exhaustive' if c.exhaustive else 'one-sided'},"
                  f" exact={c.exact_has_fixed_point})")
        print(f"fiber count: {verdict.describe()}")
    return 0 if survey.passed and verdict.passed else 2


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in list_entries():
            print(name)
        return 0
    if args.name is None:
        return _fail(1, f"catalog {args.action} needs an entry name")
    if args.action == "run":
        diff = run_entry(args.name)
        if not diff:
            print(f"{args.name}: empty diff")
            return 0
        sys.stdout.write(dumps_canonical({"entry": args.name, "diff": diff}))
        return 2
    if args.action == "export":
        entry = get_entry(args.name)
        sys.stdout.write(dumps_canonical(entry.document))
        return 0
    return _fail(1, f"unknown catalog action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperelliptic",
        description="Exact Albanese data of hyperelliptic varieties "
        "from rational lattice presentations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a datum file")
    p.add_argument("path")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("albanese", help="compute the Albanese report")
    p.add_argument("path")
    p.add_argument("--recurse", action="store_true",
                   help="recurse into hyperelliptic fibers")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_albanese)

    p = sub.add_parser("invariants", help="irregularity, Hodge diamond, canonical order")
    p.add_argument("path")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("oracle", help="brute-force torsion-level verification")
    p.add_argument("path")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("catalog", help="built-in constructions")
    p.add_argument("action", choices=("list", "run", "export"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        return _fail(1, f"input error: {exc}")
    except UnknownEntry as exc:
        return _fail(1, f"unknown catalog entry: {exc}")
    except _INTERNAL_ERRORS as exc:
        return _fail(3, f"internal error: {exc}")
    except _MATH_ERRORS as exc:
        return _fail(2, f"invalid datum: {exc}")


if __name__ == "__main__":
    raise SystemExit(main())
