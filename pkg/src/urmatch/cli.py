"""Command-line front end.

Exit status: 0 when the checked property holds, 1 when it fails, 2 on
input, usage or budget errors.
"""

from __future__ import annotations

import argparse
import gc
import json
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .analysis import (
    PerfectStatus,
    all_max_ur,
    is_forcing_set,
    is_uniquely_restricted,
    minimum_forcing_set,
    unique_perfect_matching,
)
from .budget import DEFAULT_BUDGET
from .certificates import (
    allmax_payload,
    dump_json,
    enc_edges,
    forcing_payload,
    perfect_payload,
    ur_payload,
    verify_allmax_payload,
    verify_forcing_payload,
    verify_perfect_payload,
    verify_ur_payload,
)
from .digraph import bd_map, digraph_to_dot, extended_bd_map
from .discrepancy import DiscrepancyConfig, discrepancy_search, load_report, verify_report
from .errors import (
    BudgetExceeded,
    CyclicDigraphError,
    GraphFormatError,
    InvalidCycleError,
    InvalidMatchingError,
    NotMaximumError,
    NotPerfectError,
)
from .graph import BipartiteGraph, parse_graph, to_dot
from .matching import Matching, enumerate_maximum_matchings, parse_matching, require_valid

HOLDS, FAILS, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt_edges(edges) -> str:
    return " ".join(f"(x{x + 1},y{y + 1})" for x, y in edges)


def _fmt_pairs(items) -> str:
    return " ".join(f"(x{x},y{y})" for x, y in items)


def _emit(args: argparse.Namespace, payload: dict[str, Any], lines: list[str] | Callable[[], list[str]]) -> None:
    """Write the JSON payload or the text lines; ``lines`` may be built lazily."""
    if args.json:
        sys.stdout.write(dump_json(payload) + "\n")
    else:
        sys.stdout.write("\n".join(lines() if callable(lines) else lines) + "\n")


def _write_dot(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _load_graph(args: argparse.Namespace) -> BipartiteGraph:
    if not args.graph:
        raise UsageError("--graph is required")
    return parse_graph(Path(args.graph).read_text())


def _load_matching(args: argparse.Namespace, g: BipartiteGraph) -> Matching:
    if not getattr(args, "matching", None):
        raise UsageError(f"{args.verb} requires --matching")
    m = parse_matching(Path(args.matching).read_text(), g)
    require_valid(g, m)
    return m


def _replay(args: argparse.Namespace, check: Callable[[dict[str, Any]], list[str]]) -> int:
    payload = json.loads(Path(args.verify).read_text())
    problems = check(payload)
    result = {"command": args.verb, "verify": args.verify, "valid": not problems, "problems": problems}
    lines = [f"verify {args.verify}: " + ("certificate valid" if not problems else "certificate INVALID")]
    lines += [f"  {p}" for p in problems]
    _emit(args, result, lines)
    return HOLDS if not problems else FAILS


def cmd_check_ur(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    m = _load_matching(args, g)
    if args.verify:
        return _replay(args, lambda p: verify_ur_payload(g, m, p))
    v = is_uniquely_restricted(g, m)
    if args.dot:
        _write_dot(args.dot, digraph_to_dot(bd_map(g, m)))
    payload = {"command": "check-ur", "holds": v.uniquely_restricted, **ur_payload(v)}

    def lines() -> list[str]:
        out = [
            "check-ur: " + ("uniquely restricted" if v else "NOT uniquely restricted"),
            f"matching: {_fmt_edges(m.pairs)}",
        ]
        if v:
            out.append(f"topological order: {_fmt_edges(v.order_edges)}")
        else:
            out.append(f"digraph cycle: {_fmt_edges(m.pairs[i] for i in v.certificate.cycle)}")
            out.append(f"alternating cycle: {_fmt_edges(v.alternating_cycle)}")
        return out

    _emit(args, payload, lines)
    return HOLDS if v else FAILS


def cmd_check_unique_pm(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    m = _load_matching(args, g)
    if args.verify:
        return _replay(args, lambda p: verify_perfect_payload(g, m, p))
    v = unique_perfect_matching(g, m)
    if args.dot:
        _write_dot(args.dot, digraph_to_dot(bd_map(g, m)))
    ok = v.status is PerfectStatus.UNIQUE_PERFECT
    payload = {"command": "check-unique-pm", "holds": ok, **perfect_payload(v)}
    lines = [f"check-unique-pm: {v.status.value}", f"matching: {_fmt_edges(m.pairs)}"]
    if v.ur is not None and v.ur.uniquely_restricted:
        lines.append(f"topological order: {_fmt_edges(v.ur.order_edges)}")
    elif v.ur is not None:
        lines.append(f"alternating cycle: {_fmt_edges(v.ur.alternating_cycle)}")
    _emit(args, payload, lines)
    return HOLDS if ok else FAILS


def _allmax_lines(r, payload: dict[str, Any]) -> list[str]:
    cond = payload["conditions"]
    cert = payload["certificates"]

    def show(v):
        return "n/a" if v is None else str(v).lower()

    lines = [
        f"greedy matching: {_fmt_edges(r.base_matching.pairs)}",
        f"greedy matching uniquely restricted: {show(cond['base_ur'])}",
        f"c1: {show(cond['c1'])}  c2: {show(cond['c2'])}  c3: {show(cond['c3'])}",
        f"fast verdict (conjunctive): {show(cond['conjunctive'])}",
        f"fast verdict (disjunctive): {show(cond['disjunctive'])}",
    ]
    for v in cert.get("violations", []):
        paths = "; ".join(" -> ".join(p) for p in v["paths"])
        lines.append(f"{v['condition']} violated at {', '.join(v['nodes'])}: {paths}")
    if payload["oracle"] is not None:
        lines.append(f"oracle verdict: {show(payload['oracle'])}")
    if "oracle_witness" in cert:
        w = cert["oracle_witness"]
        wm = parse_matching(w["matching"])
        lines.append(f"witness matching: {_fmt_edges(wm.pairs)}")
        lines.append(f"witness alternating cycle: {_fmt_pairs(w['alternating_cycle'])}")
    return lines


def cmd_check_all_max_ur(args: argparse.Namespace) -> int:
    if getattr(args, "matching", None):
        raise UsageError("check-all-max-ur computes its own greedy matching; --matching is not accepted")
    g = _load_graph(args)
    if args.verify:

        def check(p: dict[str, Any]) -> list[str]:
            if parse_graph(p["graph"]) != g:
                return ["certificate was issued for a different graph"]
            return verify_allmax_payload(p)

        return _replay(args, check)
    r = all_max_ur(g, oracle=args.oracle, budget=DEFAULT_BUDGET)
    if args.dot:
        _write_dot(args.dot, digraph_to_dot(extended_bd_map(g, r.base_matching)))
    holds = r.oracle_verdict if args.oracle else r.fast_verdict_conjunctive
    payload = {"command": "check-all-max-ur", "holds": holds, **allmax_payload(g, r)}
    lines = ["check-all-max-ur: " + ("holds" if holds else "FAILS")] + _allmax_lines(r, payload)
    _emit(args, payload, lines)
    return HOLDS if holds else FAILS


def _load_set(args: argparse.Namespace, g: BipartiteGraph) -> Matching:
    if not args.set:
        return Matching()
    return parse_matching(Path(args.set).read_text(), g)


def cmd_forcing_set(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    m = _load_matching(args, g)
    if args.verify:
        return _replay(args, lambda p: verify_forcing_payload(g, m, p))
    s = _load_set(args, g)
    r = is_forcing_set(g, m, s.pairs)
    payload = {"command": "forcing-set", "holds": r.is_forcing, **forcing_payload(g, m, r)}
    cert = payload["certificate"]
    lines = [
        "forcing-set: " + ("forcing" if r.is_forcing else "NOT forcing"),
        f"set: {_fmt_edges(r.set) or '(empty)'}",
    ]
    if r.is_forcing:
        lines.append(f"residual topological order: {_fmt_pairs(cert['topological_order'])}")
    else:
        lines.append(f"residual alternating cycle: {_fmt_pairs(cert['alternating_cycle'])}")
    _emit(args, payload, lines)
    return HOLDS if r.is_forcing else FAILS


def cmd_min_forcing_set(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    m = _load_matching(args, g)
    if args.verify:
        return _replay(args, lambda p: verify_forcing_payload(g, m, p))
    s = minimum_forcing_set(g, m, DEFAULT_BUDGET)
    r = is_forcing_set(g, m, s)
    payload = {"command": "min-forcing-set", "holds": True, "size": len(s), **forcing_payload(g, m, r)}
    lines = [
        f"min-forcing-set: forcing number {len(s)}",
        f"set: {_fmt_edges(s) or '(empty)'}",
        f"residual topological order: {_fmt_pairs(payload['certificate']['topological_order'])}",
    ]
    _emit(args, payload, lines)
    return HOLDS


def cmd_enumerate(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    ms = enumerate_maximum_matchings(g, DEFAULT_BUDGET)
    payload = {
        "command": "enumerate",
        "holds": True,
        "size": len(ms[0]) if ms else 0,
        "count": len(ms),
        "matchings": [enc_edges(m.pairs) for m in ms],
    }
    lines = [f"enumerate: {len(ms)} maximum matching(s) of size {payload['size']}"]
    lines += [_fmt_edges(m.pairs) or "(empty)" for m in ms]
    _emit(args, payload, lines)
    return HOLDS


def cmd_export_dot(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    m = _load_matching(args, g) if args.matching else None
    text = to_dot(g, m.pairs if m is not None else None)
    if args.dot:
        Path(args.dot).write_text(text)
    else:
        sys.stdout.write(text)
    return HOLDS


def cmd_fuzz(args: argparse.Namespace) -> int:
    if getattr(args, "matching", None):
        raise UsageError("fuzz computes its own greedy matchings; --matching is not accepted")
    if args.verify:
        tree = load_report(Path(args.verify).read_text())
        problems = verify_report(tree)
        bad = {k: v for k, v in problems.items() if v}
        result = {"command": "fuzz", "verify": args.verify, "records": len(problems), "valid": not bad, "problems": bad}
        lines = [f"verify {args.verify}: {len(problems)} record(s), " + ("all certificates valid" if not bad else "INVALID")]
        for cls, errs in bad.items():
            lines += [f"  {cls}: {e}" for e in errs]
        _emit(args, result, lines)
        return HOLDS if not bad else FAILS
    config = DiscrepancyConfig(
        max_x=args.max_x,
        max_y=args.max_y,
        exhaustive=args.exhaustive,
        edge_prob=args.edge_prob,
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
    )
    report = discrepancy_search(config)
    sys.stdout.write(report.to_json() if args.json else report.to_yaml())
    return HOLDS if report.all_agree and report.implication_violations == 0 else FAILS


COMMANDS = {
    "check-ur": (cmd_check_ur, "decide whether a matching is uniquely restricted"),
    "check-unique-pm": (cmd_check_unique_pm, "decide whether a matching is the unique perfect matching"),
    "check-all-max-ur": (cmd_check_all_max_ur, "decide whether every maximum matching is uniquely restricted"),
    "forcing-set": (cmd_forcing_set, "decide whether a subset of a perfect matching forces it"),
    "min-forcing-set": (cmd_min_forcing_set, "smallest forcing set of a perfect matching"),
    "enumerate": (cmd_enumerate, "list every maximum matching"),
    "fuzz": (cmd_fuzz, "compare fast all-max-UR verdicts with the oracle"),
    "export-dot": (cmd_export_dot, "write the graph in DOT format"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urmatch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--verify", metavar="REPORT", help="replay the certificate in a previous report")
        if verb != "fuzz":
            p.add_argument("--graph", metavar="PATH", help="graph in 'p bip' edge-list format")
        if verb not in ("fuzz", "check-all-max-ur", "enumerate"):
            p.add_argument("--matching", metavar="PATH", help="matching in 'm x y' format")
        if verb in ("check-ur", "check-unique-pm", "check-all-max-ur", "export-dot"):
            p.add_argument("--dot", metavar="PATH", help="also write a DOT rendering here")
        if verb == "check-all-max-ur":
            p.add_argument("--oracle", action="store_true", help="also run the exhaustive oracle")
        if verb == "forcing-set":
            p.add_argument("--set", metavar="PATH", help="subset S of the matching, 'm x y' format")
        if verb == "fuzz":
            p.add_argument("--exhaustive", action="store_true", help="every edge subset of a max-x by max-y grid")
            p.add_argument("--max-x", type=int, default=3)
            p.add_argument("--max-y", type=int, default=3)
            p.add_argument("--edge-prob", type=float, default=0.5)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else HOLDS
    handler = COMMANDS[args.verb][0]
    # one-shot verbs build large acyclic structures; the cyclic collector only costs time there
    paused = args.verb != "fuzz" and gc.isenabled()
    if paused:
        gc.disable()
    try:
        return handler(args)
    except UsageError as exc:
        print(f"urmatch {args.verb}: {exc}", file=sys.stderr)
    except (GraphFormatError, InvalidMatchingError, NotMaximumError, NotPerfectError,
            InvalidCycleError, CyclicDigraphError) as exc:
        print(f"urmatch {args.verb}: input error: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"urmatch {args.verb}: refused: {exc}", file=sys.stderr)
    except (OSError, ValueError, KeyError) as exc:
        print(f"urmatch {args.verb}: {exc}", file=sys.stderr)
    finally:
        if paused:
            gc.enable()
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
