"""JSON and DOT serialization of runs, verification sweeps and diagonalizations.

Everything here is deterministic: states are listed in id order, dict keys
are sorted on output, and no timings or environment data are recorded.
"""
from __future__ import annotations

import json
from collections import Counter

from .blowup import BlowupState, RunOptions, TerminalForest, describe_state, run_all, verify_assumptions
from .diag import check_presentation, diagonalize, local_equations, structural_matrix
from .graph import WeightedDualGraph, enumerate_graphs, to_text
from .vocab import depth1, ground_point, reduced_vocabulary
from .words import format_vocabulary


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def vocab_report(g: WeightedDualGraph) -> dict:
    p = ground_point(g)
    return {
        "graph": to_text(g),
        "s": format_vocabulary(reduced_vocabulary(g)),
        "s_minus": format_vocabulary(p.s_minus),
        "s_plus": format_vocabulary(p.s_plus),
        "t": format_vocabulary(p.t),
        "depth": depth1(p),
    }


def diag_report(s: BlowupState, n: int | None = None) -> dict:
    r = diagonalize(structural_matrix(s.point))
    out = {"state-id": s.id, **r.to_json()}
    if n is not None and r.success:
        out["local_model"] = local_equations(r, n, s.point.graph.total_weight).to_json()
    return out


def forest_report(f: TerminalForest, with_diag: bool = True) -> dict:
    out = {
        "graph": to_text(f.graph),
        "ground": describe_state(f.ground),
        "rounds": [{"name": log.name, "stats": log.stats, "steps": log.steps} for log in f.rounds],
        "terminals": [describe_state(s) for s in f.terminals],
        "captured": [describe_state(s) for s in f.captured],
        "stats": f.stats,
        "verification": verify_assumptions(f),
    }
    if with_diag:
        out["diagonalization"] = [diag_report(s) for s in f.terminals]
        out["negative_control"] = [diag_report(s) for s in f.captured]
    return out


def _diag_summary(f: TerminalForest) -> tuple[Counter, list[dict]]:
    bad = {v.state for v in f.violations}
    c: Counter = Counter()
    fails = []
    for s in f.terminals:
        r = diagonalize(structural_matrix(s.point))
        ok = check_presentation(r)
        c["ok" if ok else "fail"] += 1
        if not ok:
            c["fail_flagged" if s.id in bad else "fail_clean"] += 1
            fails.append({"state": s.id, "history": [h.describe() for h in s.history], "witness": r.failure_witness})
    for s in f.captured:
        if diagonalize(structural_matrix(s.point)).success:
            c["control_unexpected_success"] += 1
            fails.append({"state": s.id, "history": [h.describe() for h in s.history], "witness": "pre-blowup state diagonalized"})
        else:
            c["control_fail"] += 1
    return c, fails


def verify_sweep(d_max: int, options: RunOptions | None = None, diag: bool = True) -> dict:
    """Enumerate graphs up to ``d_max``, run every round on each and collect
    violation counts plus diagonalization results."""
    options = options or RunOptions(record_steps=False)
    per_d = []
    totals: Counter = Counter()
    for d in range(d_max + 1):
        graphs = []
        sub: Counter = Counter()
        for g in enumerate_graphs(d):
            f = run_all(g, options)
            v = verify_assumptions(f)
            entry = {
                "graph": to_text(g),
                "terminals": len(f.terminals),
                "captured": len(f.captured),
                "violations": v["counts"],
            }
            sub.update({f"violation:{k}": n for k, n in v["counts"].items()})
            sub["terminals"] += len(f.terminals)
            if "C" in options.rounds and diag:
                c, fails = _diag_summary(f)
                entry["diag"] = dict(sorted(c.items()))
                if fails:
                    entry["diag_failures"] = fails
                sub.update({f"diag:{k}": n for k, n in c.items()})
            graphs.append(entry)
        per_d.append({"d": d, "graphs": len(graphs), "totals": dict(sorted(sub.items())), "detail": graphs})
        totals.update(sub)
    failures = sum(n for k, n in totals.items() if k.startswith("violation:"))
    failures += totals["diag:fail"] + totals["diag:control_unexpected_success"]
    return {
        "d_max": d_max,
        "rounds": options.rounds,
        "flags": options.flags,
        "budget": options.budget,
        "totals": dict(sorted(totals.items())),
        "failures": failures,
        "ok": failures == 0,
        "by_weight": per_d,
    }


def summary_table(report: dict) -> str:
    keys = sorted({k for row in report["by_weight"] for k in row["totals"]})
    head = ["d", "graphs"] + keys
    rows = [[str(r["d"]), str(r["graphs"])] + [str(r["totals"].get(k, 0)) for k in keys] for r in report["by_weight"]]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    lines.append(f"failures: {report['failures']}")
    return "\n".join(lines)


# DOT

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def forest_dot(report: dict) -> str:
    """Prefix tree of branch histories of the terminal states (and captured
    pre-blowup states, drawn dashed) of a simulate report."""
    nodes: dict[tuple, str] = {(): "ground"}
    edges: set[tuple[tuple, tuple]] = set()
    leaves: dict[tuple, tuple[str, bool]] = {}
    for group, dashed in (("terminals", False), ("captured", True)):
        for st in report.get(group, []):
            h = tuple(st["history"])
            for i in range(1, len(h) + 1):
                nodes.setdefault(h[:i], h[i - 1])
                edges.add((h[: i - 1], h[:i]))
            leaves[h] = (st["id"], dashed)
    ids = {k: f"n{i}" for i, k in enumerate(sorted(nodes))}
    out = ["digraph forest {", f"  label={_quote(report.get('graph', ''))};", "  node [shape=box, fontsize=10];"]
    for k in sorted(nodes):
        label = nodes[k]
        attrs = [f"label={_quote(label)}"]
        if k in leaves:
            sid, dashed = leaves[k]
            attrs = [f"label={_quote(label + chr(10) + sid)}", "style=dashed" if dashed else "style=bold"]
        out.append(f"  {ids[k]} [{', '.join(attrs)}];")
    for a, b in sorted(edges):
        out.append(f"  {ids[a]} -> {ids[b]};")
    out.append("}")
    return "\n".join(out) + "\n"
