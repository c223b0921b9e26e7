"""Command-line front end: JSON in, JSON out.

Subcommands: compute, classify, realize, witt, verify, search.  Exit
codes: 0 success, 1 usage error, 2 invalid input data, 3 target not
realizable by the implemented constructions, 4 internal verification
failure (a failing suite or an unverifiable construction).
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import fmt_rational
from .errors import (
    InvalidDataError,
    LinkformError,
    UnrealizableError,
    UnsupportedError,
    VerificationError,
)
from .linking import gram_matrix, welldefined_check
from .pairing import StandardForm, classify, classify_seifert
from .realize import exhaustive_search, realize
from .seifert import SeifertData, euler_invariant, relevant_primes, validate
from .torsion import local_orders, structure_check
from .verify import SEED_ENV, SUITES, RunConfig, run_suite
from .witt import witt_seifert

EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_UNREALIZABLE = 3
EXIT_VERIFICATION = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidDataError(f"cannot read JSON from {path}: {exc}") from exc


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if getattr(args, "json_out", None):
        with open(args.json_out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_seifert(path: str) -> SeifertData:
    S = SeifertData.from_json(_read_json(path))
    problems = validate(S)
    if problems:
        raise InvalidDataError("; ".join(problems))
    return S


def _seifert_report(S: SeifertData, prime: int | None) -> dict:
    eps = euler_invariant(S)
    primes = [prime] if prime else list(relevant_primes(S))
    out = {
        "seifert": S.to_json(),
        "euler": fmt_rational(eps),
        "h1_free_rank": 2 * S.genus + (1 if eps == 0 else 0),
        "structure": structure_check(S),
        "local": [],
    }
    total = StandardForm.empty()
    for p in primes:
        dec = local_orders(S, p)
        entry = {
            "prime": p,
            "orders": [list(o) for o in dec.orders],
            "free_rank": dec.free_rank,
        }
        if S.r >= 2:
            G = gram_matrix(S, p)
            entry["gram"] = G.to_json()
            entry["welldefined"] = welldefined_check(G)
            rep = classify(G)
            entry["classification"] = rep.to_json()
            total = total + rep.standard_form
        out["local"].append(entry)
    if S.r >= 2:
        out["standard_form"] = total.to_json()
        out["witt"] = witt_seifert(S).to_json()
    return out


def cmd_compute(args) -> int:
    S = _load_seifert(args.input)
    _emit(_seifert_report(S, args.prime), args)
    return 0


def cmd_classify(args) -> int:
    S = _load_seifert(args.input)
    if S.r < 2:
        raise UnsupportedError("classification needs r >= 2")
    primes = [args.prime] if args.prime else None
    reports = classify_seifert(S, primes)
    total = StandardForm.empty()
    for rep in reports.values():
        total = total + rep.standard_form
    _emit(
        {
            "seifert": S.to_json(),
            "per_prime": {str(p): rep.to_json() for p, rep in reports.items()},
            "standard_form": total.to_json(),
        },
        args,
    )
    return 0


def cmd_realize(args) -> int:
    target = StandardForm.from_json(_read_json(args.input))
    result = realize(target, mode=args.mode)
    out = result.to_json()
    out["target"] = target.to_json()
    _emit(out, args)
    return 0


def cmd_witt(args) -> int:
    S = _load_seifert(args.input)
    _emit(
        {
            "seifert": S.to_json(),
            "euler": fmt_rational(euler_invariant(S)),
            "witt": witt_seifert(S).to_json(),
        },
        args,
    )
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig.from_env(
        seed=args.seed,
        trials=args.trials,
        max_r=args.max_r,
        max_alpha=args.max_alpha,
        max_beta=args.max_beta,
        oracle_bound=args.oracle_bound,
    )
    report = run_suite(args.suite, cfg)
    _emit(report, args)
    return 0 if report["ok"] else EXIT_VERIFICATION


def cmd_search(args) -> int:
    target = StandardForm.from_json(_read_json(args.input))
    hits = exhaustive_search(
        target, max_r=args.max_r, max_alpha=args.max_alpha, max_beta=args.max_beta
    )
    _emit(
        {
            "target": target.to_json(),
            "bounds": {
                "max_r": args.max_r,
                "max_alpha": args.max_alpha,
                "max_beta": args.max_beta,
            },
            "count": len(hits),
            "seifert": [S.to_json() for S in hits],
        },
        args,
    )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="linkform",
        description="Torsion linking pairings of orientable Seifert fibred "
        "3-manifolds: exact computation, classification, realization, "
        "Witt classes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="path to a JSON file, or - for stdin")
        p.add_argument("--json-out", help="write the report to this path")

    p = sub.add_parser("compute", help="full report for Seifert data")
    add_common(p)
    p.add_argument("--prime", type=int, help="restrict to one prime")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("classify", help="classification of the linking pairing")
    add_common(p)
    p.add_argument("--prime", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("realize", help="Seifert data realizing a standard form")
    add_common(p)
    p.add_argument("--mode", choices=["auto", "flat", "sphere"], default="auto")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("witt", help="Witt class of the linking pairing")
    add_common(p)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("verify", help="run a seeded property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--json-out")
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--max-r", type=int, default=5)
    p.add_argument("--max-alpha", type=int, default=8)
    p.add_argument("--max-beta", type=int, default=7)
    p.add_argument("--oracle-bound", type=int, default=2**10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive bounded realization search")
    add_common(p)
    p.add_argument("--max-r", type=int, default=4)
    p.add_argument("--max-alpha", type=int, default=8)
    p.add_argument("--max-beta", type=int, default=7)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidDataError, UnsupportedError) as exc:
        print(f"invalid data: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnrealizableError as exc:
        print(f"not realizable: {exc}", file=sys.stderr)
        return EXIT_UNREALIZABLE
    except (VerificationError, LinkformError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
