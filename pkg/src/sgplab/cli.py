"""Command-line surface: JSON reports on stdout, diagnostics on stderr.

Exit codes: 0 for success (including negative verdicts), 1 when a battery
mismatch or property violation is found, 2 for usage, parse, or file errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import algebra, classes, eqsys, freeprod, smallsemi, wordeq

_USAGE_ERROR = 2


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return p.read_text()


def _load_semigroup(path: str) -> algebra.FiniteSemigroup:
    return algebra.parse_sgp(_read_text(path), name=Path(path).stem)


def _load_system(args) -> eqsys.EquationSystem:
    if getattr(args, "id", None):
        return eqsys.catalog(args.id)
    if getattr(args, "eqs", None):
        return eqsys.parse(_read_text(args.eqs))
    raise ValueError("provide an .eqs file or --id <catalog-id>")


def _verdict_json(v: eqsys.Verdict) -> dict:
    return {
        "satisfied": v.satisfied,
        "counterexample": v.counterexample,
        "witness": v.witness,
        "nodes": v.nodes,
    }


def _green_summary(g: algebra.GreenData) -> dict:
    return {
        "r_classes": [list(c) for c in g.r_classes],
        "l_classes": [list(c) for c in g.l_classes],
        "j_classes": [list(c) for c in g.j_classes],
        "h_classes": [list(c) for c in g.h_classes],
        "d_classes": [list(c) for c in g.d_classes],
        "group_h_classes": list(g.group_h_classes),
    }


def _cmd_classify(args) -> tuple[int, dict]:
    S = _load_semigroup(args.sgp)
    report = classes.classify(S)
    payload = report.to_json()
    payload["order"] = S.order
    payload["green"] = _green_summary(report.green)
    return 0, {"result": payload}


def _cmd_check(args) -> tuple[int, dict]:
    S = _load_semigroup(args.sgp)
    e = _load_system(args)
    v = eqsys.satisfies(S, e)
    payload: dict = {"result": _verdict_json(v)}
    if args.trace:
        payload["trace"] = {
            "system": eqsys.render(e),
            "sgp": algebra.format_sgp(S),
        }
    return 0, payload


_MODES = {"iso": algebra.MODE_ISOMORPHISM, "equiv": algebra.MODE_EQUIVALENCE}


def _cmd_enumerate(args) -> tuple[int, dict]:
    corpus = smallsemi.enumerate_semigroups(args.order, _MODES[args.mode], jobs=args.jobs)
    smallsemi.save_corpus(corpus, args.out)
    return 0, {"result": {"order": corpus.order, "mode": corpus.mode,
                          "count": len(corpus), "out": str(args.out)}}


def _cmd_verify(args) -> tuple[int, dict]:
    report = smallsemi.verify_battery(
        args.battery, args.max_order, corpus_dir=args.corpus, jobs=args.jobs
    )
    payload = {
        "battery": report.battery_id,
        "description": report.description,
        "max_order": report.max_order,
        "items": report.items,
        "mismatches": [m.to_json() for m in report.mismatches],
    }
    return (0 if report.passed else 1), {"result": payload}


def _cmd_allsgp(args) -> tuple[int, dict]:
    e = _load_system(args)
    budgets = wordeq.Budgets(args.max_len, args.extra_letters, args.max_order, args.len_cap)
    verdict = wordeq.holds_in_all_semigroups(e, budgets)
    payload = verdict.to_json()
    if verdict.outcome != wordeq.DOES_NOT_HOLD and verdict.parikh is None:
        point = wordeq.integer_feasible_point(wordeq._parikh_system(e), args.len_cap)
        payload["parikh_integer_point"] = point
    return 0, {"result": payload}


def _cmd_epsc(args) -> tuple[int, dict]:
    S = _load_semigroup(args.sgp)
    e = _load_system(args)
    if args.script:
        script = freeprod.parse_ws(_read_text(args.script))
        try:
            rs = freeprod.canonical_check(S, e, script)
        except (freeprod.FreeDependencyViolation, freeprod.SkeletonMismatch,
                freeprod.RunProductMismatch) as exc:
            return 1, {"result": {"ok": False, "error": type(exc).__name__, "detail": str(exc)}}
        return 0, {"result": {
            "ok": True,
            "runs": [[list(l), list(r)] for l, r in rs.equalities],
            "epsilon_c": rs.system.to_text(),
        }}
    if not args.search:
        raise ValueError("provide --script <f.ws> or --search")
    budget = freeprod.ScriptBudget(args.budget, args.budget)
    found = freeprod.search_scripts(S, e, budget, collect=args.collect)
    payload: dict = {"found": found.script is not None}
    if found.script is not None:
        payload["script"] = found.script.render()
        payload["systems"] = [s.to_text() for s in found.systems]
    return 0, {"result": payload}


def _cmd_quotients(args) -> tuple[int, dict]:
    S = _load_semigroup(args.sgp)
    items = []
    for cong, Q in algebra.congruences(S):
        items.append({
            "blocks": [list(b) for b in cong.blocks],
            "quotient": [list(row) for row in Q.table],
        })
    return 0, {"result": {"order": S.order, "count": len(items), "congruences": items}}


def _cmd_catalog(args) -> tuple[int, dict]:
    if args.id:
        e = eqsys.catalog(args.id)
        return 0, {"result": {
            "id": args.id,
            "text": eqsys.CATALOG_TEXTS[args.id],
            "desugared": eqsys.render(e),
            "prefix": [[q, list(syms)] for q, syms in e.prefix],
            "equalities": len(e.equalities),
        }}
    ids = {i: eqsys.CATALOG_TEXTS[i] for i in eqsys.catalog_ids()}
    return 0, {"result": {"systems": ids}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgplab",
        description="finite-semigroup laboratory: evaluate, classify, enumerate, verify",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="structural class report for a .sgp file")
    p.add_argument("sgp")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("check", help="evaluate an equation system on a semigroup")
    p.add_argument("sgp")
    p.add_argument("eqs", nargs="?")
    p.add_argument("--id", help="catalog system id instead of an .eqs file")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("enumerate", help="enumerate all semigroups of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mode", choices=["iso", "equiv"], default="iso")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("verify", help="run a verification battery over the corpus")
    p.add_argument("--battery", required=True)
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--corpus")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("allsgp", help="decide-when-possible: holds in all semigroups?")
    p.add_argument("eqs", nargs="?")
    p.add_argument("--id")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--extra-letters", type=int, default=2)
    p.add_argument("--max-order", type=int, default=3)
    p.add_argument("--len-cap", type=int, default=8)
    p.set_defaults(fn=_cmd_allsgp)

    p = sub.add_parser("epsc", help="check or search witness scripts and extract the run system")
    p.add_argument("sgp")
    p.add_argument("eqs", nargs="?")
    p.add_argument("--id")
    p.add_argument("--script", help="witness script file (.ws)")
    p.add_argument("--search", action="store_true")
    p.add_argument("--budget", type=int, default=2)
    p.add_argument("--collect", action="store_true",
                   help="with --search, collect every distinct extracted system")
    p.set_defaults(fn=_cmd_epsc)

    p = sub.add_parser("quotients", help="all congruences and quotients of a semigroup")
    p.add_argument("sgp")
    p.set_defaults(fn=_cmd_quotients)

    p = sub.add_parser("catalog", help="list or show the named equation systems")
    p.add_argument("--list", action="store_true")
    p.add_argument("--id")
    p.set_defaults(fn=_cmd_catalog)
    return parser


_USER_ERRORS = (
    FileNotFoundError,
    ValueError,
    KeyError,
    algebra.SgpFormatError,
    algebra.OrderBoundExceeded,
    eqsys.EquationSyntaxError,
    eqsys.UnknownId,
    smallsemi.UnknownBattery,
    freeprod.ScriptFormatError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code, payload = args.fn(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    report = {"command": args.command}
    report.update(payload)
    report["elapsed_ms"] = round(1000 * (time.perf_counter() - start), 3)
    json.dump(report, sys.stdout, indent=2)
    print()
    return code


if __name__ == "__main__":
    sys.exit(main())
