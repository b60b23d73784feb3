"""Command line surface: polyprime <command> [flags].

Every command emits a single output envelope (text, JSON, or CSV) on
stdout; diagnostics go to stderr.  Exact rationals are never coerced to
floating point in machine formats: they are rendered as "num/den".
Exit codes: 0 success, 2 usage, 3 invalid input, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from mpmath import mp

from . import artin, e8, polyhedral, ratmul, sieve_verify, stephens
from .arith import InvalidArgument

SCHEMA = "polyprime-output v1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _mpf_str(x, digits: int = 30) -> str:
    with mp.workdps(digits + 5):
        return mp.nstr(x, digits)


def cmd_stephens(args) -> dict:
    est = stephens.stephens_constant(args.nu, args.prime_bound)
    return {
        "parameters": {"nu": args.nu, "prime_bound": args.prime_bound},
        "numeric": {
            "value": _mpf_str(est.value),
            "tail_bound": _mpf_str(est.tail_bound, 6),
            "certified_digits": stephens.certified_digits(est),
        },
    }


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise InvalidArgument(f"expected comma-separated integers: {text!r}") from exc


def cmd_density(args) -> dict:
    if args.limit is not None:
        orders = _parse_ints(args.limit)
        nu = args.nu if args.nu is not None else len(orders) - 1
        result = artin.density_limit(nu, tuple(orders))
        params = {"mode": "limit", "nu": nu, "torsion_orders": orders}
    else:
        if args.a is None or not args.b:
            raise InvalidArgument("either --limit or --a with at least one --b")
        a = Fraction(args.a)
        bs = [Fraction(b) for b in args.b]
        inp = ratmul.artin_input(a, bs)
        result = artin.density_exact(inp)
        params = {"mode": "full", "a": args.a, "b": list(args.b)}
    out = {
        "parameters": params,
        "exact": {"coefficient": _frac(result.total.coeff)},
        "numeric": {"density": repr(result.numeric)},
        "table": [
            {
                "block": t.block,
                "divisors": ",".join(str(d) for d in t.divisors),
                "m": t.m,
                "n": t.n,
                "weight": t.weight,
                "coefficient": _frac(t.coeff),
            }
            for t in result.terms
        ],
    }
    if args.limit is None and args.oracle is not None:
        imax, jmax = _parse_ints(args.oracle)
        out["numeric"]["series_oracle"] = repr(
            artin.density_series_oracle(inp, imax, jmax))
    if args.limit is None and args.x_bound is not None:
        report = sieve_verify.empirical_density(
            inp, args.x_bound, predicted=result.numeric)
        out["numeric"]["empirical"] = repr(report.empirical)
        out["numeric"]["empirical_abs_diff"] = repr(report.abs_diff)
        out["parameters"]["x_bound"] = args.x_bound
    return out


def cmd_e8(args) -> dict:
    enum = e8.enumerate_all_rank8(args.cache)
    if args.action == "enumerate":
        totals = enum.type_totals()
        table = [{"type": label, "count": count}
                 for label, count in sorted(totals.items())]
        return {
            "parameters": {"action": "enumerate"},
            "numeric": {"total": len(enum.records),
                        "orbits": len(enum.orbit_sizes)},
            "table": table,
        }
    if args.action == "quotients":
        data = polyhedral.class_profiles(enum)
        seen: dict[str, str] = {}
        for cid, idxs in data.members.items():
            label = data.keys[cid][0]
            grp = str(e8.quotient_e8(enum.records[idxs[0]].simple_roots))
            if label in seen and seen[label] != grp:
                raise polyhedral.RecursionAnomaly(
                    f"type {label} has non-constant E8-quotient")
            seen[label] = grp
        table = [{"type": label, "e8_quotient": grp}
                 for label, grp in sorted(seen.items())]
        return {"parameters": {"action": "quotients"}, "table": table}
    if args.action == "containment":
        table = [{"sub": a, "super": b, "multiplicity": m}
                 for a, b, m in polyhedral.containment_edges(enum)]
        return {"parameters": {"action": "containment"}, "table": table}
    # table5
    counts = enum.class_counts()
    table = []
    for (label, invs), count in sorted(counts.items()):
        ref = polyhedral._REFERENCE_TABLE.get((label, invs))
        table.append({
            "type": label,
            "quotient": "+".join(f"Z/{f}" for f in invs),
            "count": count,
            "reference_count": ref[0] if ref else "",
            "verdict": ("match" if ref and ref[0] == count else
                        "mismatch" if ref else "absent from reference"),
        })
    return {"parameters": {"action": "table5"}, "table": table}


def cmd_polyhedral(args) -> dict:
    enum = e8.enumerate_all_rank8(args.cache)
    if args.compare_paper:
        cmp = polyhedral.compare_paper(enum=enum)
        table = []
        for v in cmp.rows:
            r = v.row
            table.append({
                "type": r.type_label,
                "quotient": str(r.quotient),
                "e8_quotient": str(r.e8_quotient),
                "count": r.count,
                "deltabar": _frac(r.deltabar.coeff),
                "reference": ("" if r.paper_value is None
                              else _frac(r.paper_value)),
                "count_verdict": v.count_verdict,
                "value_verdict": v.value_verdict,
                "evidence": v.evidence,
            })
        return {
            "parameters": {"compare_paper": True},
            "exact": {
                "aggregate_coefficient": _frac(cmp.aggregate.coeff),
                "reference_aggregate": _frac(cmp.reference_aggregate),
            },
            "numeric": {
                "aggregate": repr(cmp.aggregate_numeric),
                "reference": repr(cmp.reference_numeric),
                "aggregate_verdict": cmp.aggregate_verdict,
            },
            "table": table,
        }
    rows = polyhedral.deltabar_all(enum)
    agg, numeric = polyhedral.aggregate_density(rows)
    table = [{
        "type": r.type_label,
        "quotient": str(r.quotient),
        "e8_quotient": str(r.e8_quotient),
        "count": r.count,
        "delta": _frac(r.delta.coeff),
        "deltabar": _frac(r.deltabar.coeff),
    } for r in rows]
    return {
        "parameters": {"compare_paper": False},
        "exact": {"aggregate_coefficient": _frac(agg.coeff)},
        "numeric": {"aggregate": repr(numeric)},
        "table": table,
    }


def _emit_text(env: dict) -> None:
    print(f"# {env['command']}")
    for key, value in env.get("parameters", {}).items():
        print(f"{key} = {value}")
    for section in ("exact", "numeric"):
        for key, value in env.get(section, {}).items():
            print(f"{key}: {value}")
    table = env.get("table")
    if table:
        cols = list(table[0])
        widths = {c: max(len(c), *(len(str(row[c])) for row in table))
                  for c in cols}
        print("  ".join(c.ljust(widths[c]) for c in cols))
        for row in table:
            print("  ".join(str(row[c]).ljust(widths[c]) for c in cols))
    print(f"elapsed: {env['timing_seconds']:.3f}s")


def _emit_csv(env: dict) -> None:
    import csv

    writer = csv.writer(sys.stdout)
    table = env.get("table")
    if table:
        cols = list(table[0])
        writer.writerow(cols)
        for row in table:
            writer.writerow([row[c] for c in cols])
        return
    writer.writerow(["key", "value"])
    for section in ("parameters", "exact", "numeric"):
        for key, value in env.get(section, {}).items():
            writer.writerow([key, value])


def emit(env: dict, fmt: str) -> None:
    if fmt == "json":
        json.dump(env, sys.stdout, indent=2)
        print()
    elif fmt == "csv":
        _emit_csv(env)
    else:
        _emit_text(env)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyprime",
        description="Exact Stephens constants, multivariable Artin "
                    "densities, E8 sublattice tables, and the polyhedral "
                    "prime density.")
    parser.add_argument("--format", choices=("text", "json", "csv"),
                        default="text")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"),
                        default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stephens", parents=[common],
                       help="truncated Euler product S^(nu)")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--prime-bound", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_stephens)

    p = sub.add_parser("density", parents=[common], help="multivariable Artin density")
    p.add_argument("--a", type=str)
    p.add_argument("--b", type=str, action="append", default=[])
    p.add_argument("--nu", type=int)
    p.add_argument("--limit", type=str,
                   help="torsion orders m_a,m_b1,... for the "
                        "large-discriminant limit")
    p.add_argument("--x-bound", type=int,
                   help="also sieve primes up to this bound")
    p.add_argument("--oracle", type=str,
                   help="imax,jmax for the truncated series oracle")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("e8", parents=[common], help="root sublattice enumeration tables")
    p.add_argument("action", choices=("enumerate", "quotients",
                                      "containment", "table5"))
    p.add_argument("--cache", type=str, default=None)
    p.set_defaults(func=cmd_e8)

    p = sub.add_parser("polyhedral", parents=[common], help="deltabar table and aggregate")
    p.add_argument("--compare-paper", action="store_true")
    p.add_argument("--cache", type=str, default=None)
    p.set_defaults(func=cmd_polyhedral)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.time()
    try:
        env = args.func(args)
    except InvalidArgument as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except e8.CacheDigestError as exc:
        print(f"cache digest error: {exc}; delete the cache file to "
              "recompute", file=sys.stderr)
        return EXIT_INTERNAL
    except (artin.InternalInconsistency, ArithmeticError,
            e8.RootSystemError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    env["schema"] = SCHEMA
    env["command"] = args.command
    env["timing_seconds"] = time.time() - start
    emit(env, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
