"""Command-line entry point: ``modcalc <command> [options]``."""
from __future__ import annotations

import argparse
import sys

from . import report
from .blowup import RunOptions, run_all
from .errors import ModcalcError
from .graph import enumerate_graphs, to_text
from .notation import parse_graph

ROUNDS = ("A", "AB", "ABC", "ABCD")


def _emit(args, obj) -> None:
    text = report.dumps(obj)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _options(args, record_steps: bool) -> RunOptions:
    return RunOptions(rounds=args.rounds, flags=args.flags, budget=args.budget, record_steps=record_steps)


def cmd_enumerate(args) -> int:
    graphs = [to_text(g) for g in enumerate_graphs(args.d)]
    _emit(args, {"d": args.d, "count": len(graphs), "graphs": graphs})
    return 0


def cmd_vocab(args) -> int:
    _emit(args, report.vocab_report(parse_graph(args.graph)))
    return 0


def cmd_simulate(args) -> int:
    f = run_all(parse_graph(args.graph), _options(args, True))
    rep = report.forest_report(f, with_diag="C" in args.rounds)
    _emit(args, rep)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(report.forest_dot(rep))
    return 0 if rep["verification"]["ok"] else 1


def cmd_verify(args) -> int:
    rep = report.verify_sweep(args.d_max, _options(args, False))
    if args.out:
        report.write_json(args.out, rep)
    print(report.summary_table(rep))
    return 0 if rep["ok"] else 1


def cmd_diagonalize(args) -> int:
    g = parse_graph(args.graph)
    f = run_all(g, _options(args, False))
    states = f.terminals
    if args.state:
        states = [s for s in states if s.id.startswith(args.state)]
        if not states:
            print(f"no terminal state matches {args.state!r}", file=sys.stderr)
            return 2
    reps = [report.diag_report(s, args.n) for s in states]
    _emit(args, {"graph": to_text(g), "n": args.n, "states": reps})
    return 0 if all(r["chain_ok"] for r in reps) else 1


def cmd_render(args) -> int:
    import json

    with open(args.input, encoding="utf-8") as fh:
        rep = json.load(fh)
    dot = report.forest_dot(rep)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    return 0


def _run_flags(p: argparse.ArgumentParser, rounds: str = "ABCD") -> None:
    p.add_argument("--rounds", choices=ROUNDS, default=rounds)
    p.add_argument("--flags", default="all", help="all, none, or e.g. chi=1,hyperelliptic=0")
    p.add_argument("--budget", type=int, default=None, help="step budget per round (default 2d+2)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modcalc", description="Combinatorics of modular blowups over genus-2 dual graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list weighted dual graphs of total weight d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("vocab", help="ground vocabularies of a graph")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("simulate", help="run the blowup rounds on one graph")
    p.add_argument("graph")
    _run_flags(p)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="exhaustive check over all graphs up to --d-max")
    p.add_argument("--d-max", type=int, required=True)
    _run_flags(p)
    p.add_argument("--out", default="report.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagonalize", help="diagonalize the terminal states of a graph")
    p.add_argument("graph")
    p.add_argument("--state", help="terminal state id prefix")
    p.add_argument("--n", type=int, default=1, help="ambient dimension for the local model")
    _run_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_diagonalize)

    p = sub.add_parser("render", help="DOT picture of a simulate report")
    p.add_argument("input")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModcalcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
