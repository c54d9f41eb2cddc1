"""The ten acceptance criteria, one test each.

Each test records a PASS/FAIL line (printed in the terminal summary) and
then asserts.  The exhaustive sweep over d <= 4 is computed once and shared
by criteria 4 to 7.
"""
import time
from collections import Counter

import pytest

import modcalc.blowup as B
from modcalc.cli import main
from modcalc.diag import primary_dimension
from modcalc.graph import enumerate_graphs
from modcalc.notation import parse_graph
from modcalc.report import verify_sweep
from modcalc.vocab import ground_point, reduced_vocabulary, signed_vocabularies
from modcalc.words import initials, perfect_indices, tail

from conftest import EX1, EX2, EX3, W, bag, record, vbag

D_MAX = 4


def _check(n, ok, detail):
    record(n, ok, detail)
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    t0 = time.time()
    rep = verify_sweep(D_MAX)
    return rep, time.time() - t0


def _count(rep, *prefixes):
    tot = rep["totals"]
    return {k: v for k, v in tot.items() if any(k.startswith(p) for p in prefixes) and v}


# 1

def test_c01_golden_vocabularies():
    t0 = time.time()
    g1, g2, g3 = parse_graph(EX1), parse_graph(EX2), parse_graph(EX3)
    s1 = bag("a", "aa", "bc", "bcbc", "bcbcbc", "bd", "bdbd")
    m2, p2 = signed_vocabularies(g2)
    m3, p3 = signed_vocabularies(g3)
    checks = {
        "ex1 s": vbag(reduced_vocabulary(g1)) == s1,
        "ex1 s-": vbag(signed_vocabularies(g1)[0]) == s1,
        "ex1 s+": vbag(signed_vocabularies(g1)[1]) == s1,
        "ex1 t": vbag(ground_point(g1).t) == s1,
        "ex2 s-": vbag(m2) == bag("a", "aa", "bq", "bbq"),
        "ex2 s+": vbag(p2) == bag("aq", "aaq", "b", "bb"),
        "ex2 t": vbag(ground_point(g2).t) == bag("a", "aa", "bq", "bbq", "aq", "aaq", "b", "bb"),
        "ex3 s-": vbag(m3) == bag("a1", "a2", "q1", "q1q2b"),
        "ex3 s+": vbag(p3) == bag("q2q1a1", "q2q1a2", "q2", "b"),
        "ex3 t": vbag(ground_point(g3).t)
        == bag("a1", "a2", "q1", "q1q2b", "q2q1a1", "q2q1a2", "q2", "b"),
    }
    dt = time.time() - t0
    bad = [k for k, v in checks.items() if not v]
    _check(1, not bad and dt < 1, f"golden vocabularies, mismatches={bad}, {dt:.2f}s")


# 2

def test_c02_five_initials():
    n = len(initials(ground_point(parse_graph(EX3)).t))
    _check(2, n == 5, f"ex3 initials = {n}")


# 3

def _frontier(text):
    f = B.run_all(parse_graph(text), B.RunOptions(rounds="A"))
    return {frozenset(vbag(s.point.t).items()) for s in f.terminals if len(perfect_indices(s.point.t)) == 1}


def _close(shapes, swap):
    out = set(shapes)
    if swap:
        x, y = (tail(n) for n in swap)
        ren = {x: y, y: x}
        for s in shapes:
            out.add(frozenset((tuple(ren.get(c, c) for c in w), n) for w, n in s))
    return out


def _listed(*cases):
    return {frozenset(bag(*c).items()) for c in cases}


# the printed cases, with the exceptional letter misprints corrected
EX1_CASES = _listed(
    ["e2", "e2e2", "e2bc", "e2bce2bc", "e2bce2bce2bc", "e2bd", "e2bde2bd"],
    ["e2e3", "e2e3e2e3", "e2e3c", "e2e3ce2e3c", "e2e3ce2e3ce2e3c", "e2e3d", "e2e3de2e3d"],
    ["e2e3a", "e2e3ae2e3a", "e2e3", "e2e3e2e3", "e2e3e2e3e2e3", "e2e3d", "e2e3de2e3d"],
    ["e2e3a", "e2e3ae2e3a", "e2e3c", "e2e3ce2e3c", "e2e3ce2e3ce2e3c", "e2e3", "e2e3e2e3"],
)
EX2_CASES = _listed(["e2", "e2e2", "e2bq", "e2be2bq", "e2q", "e2e2q", "e2b", "e2be2b"])
EX3_CASES = _listed(
    ["e5", "e5a2", "e5q1", "e5q1e5q2e5b", "e5q2e5q1e5", "e5q2e5q1e5a2", "e5q2", "e5b"],
    ["e5a1", "e5a2", "e5", "e5e5q2e5b", "e5q2e5e5a1", "e5q2e5e5a2", "e5q2", "e5b"],
    ["e5a1", "e5a2", "e5q1", "e5q1e5q2e5", "e5q2e5q1e5a1", "e5q2e5q1e5a2", "e5q2", "e5"],
    ["e5a1", "e5a2", "e5q1", "e5q1e5e5b", "e5e5q1e5a1", "e5e5q1e5a2", "e5", "e5b"],
)


def test_c03_round_a_frontier():
    t0 = time.time()
    res = {}
    for name, text, cases, swap in (
        ("ex1", EX1, EX1_CASES, None),
        ("ex2", EX2, EX2_CASES, ("a", "b")),
        ("ex3", EX3, EX3_CASES, ("a1", "a2")),
    ):
        got = _close(_frontier(text), swap)
        want = _close(cases, swap)
        res[name] = (len(got - want), len(want - got))
    dt = time.time() - t0
    ok = all(v == (0, 0) for v in res.values()) and dt < 10
    detail = ", ".join(f"{k}: extra={a} missing={b}" for k, (a, b) in res.items())
    _check(3, ok, f"round-A frontier {detail}, {dt:.1f}s")


# 4 - 7 share the sweep

def test_c04_excellent_words(sweep):
    rep, dt = sweep
    bad = _count(rep, "violation:excellent-")
    _check(4, not bad and dt < 600, f"d<={D_MAX}: {bad or 'no violations'}, sweep {dt:.0f}s")


def test_c05_letters_not_initial(sweep):
    rep, _ = sweep
    bad = _count(rep, "violation:letter-initial-")
    _check(5, not bad, f"d<={D_MAX}: {bad or 'no violations'}")


def test_c06_depth_and_admissibility(sweep):
    rep, _ = sweep
    bad = _count(rep, "violation:admissibility-", "violation:depth-jump-", "violation:order-")
    _check(6, not bad, f"d<={D_MAX}: {bad or 'no violations'}")


def test_c07_diagonalizable(sweep):
    rep, _ = sweep
    tot = rep["totals"]
    fails = tot.get("diag:fail", 0)
    leaks = tot.get("diag:control_unexpected_success", 0)
    ok = fails == 0 and leaks == 0 and tot.get("diag:control_fail", 0) > 0
    _check(
        7,
        ok,
        f"d<={D_MAX}: terminals ok={tot.get('diag:ok', 0)} fail={fails} "
        f"(clean={tot.get('diag:fail_clean', 0)}), controls failing={tot.get('diag:control_fail', 0)} leaking={leaks}",
    )


# 8

def test_c08_primary_dimension():
    want = {(1, 3): 8, (4, 3): 14, (2, 5): 13}
    got = {k: primary_dimension(*k) for k in want}
    formula = {(n, d): d * (n + 1) - n + 3 for n, d in want}
    ok = got == want and got == formula
    _check(8, ok, f"computed {got}, listed {want}")


# 9

def test_c09_oracle_equivalence():
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    from oracle_enum import oracle_graphs

    m = categorical_node_match("label", None)
    per_d = {}
    for d in range(4):
        ours = []
        for g in enumerate_graphs(d):
            h = nx.Graph()
            h.add_nodes_from((v.id, {"label": (v.genus, v.weight)}) for v in g.vertices)
            h.add_edges_from(g.edges)
            ours.append(h)
        theirs = oracle_graphs(d)
        matched = all(sum(nx.is_isomorphic(h, k, node_match=m) for k in ours) == 1 for h in theirs)
        per_d[d] = (len(ours), len(theirs), matched and len(ours) == len(theirs))
    ok = all(v[2] for v in per_d.values())
    _check(9, ok, "counts " + ", ".join(f"d={d}: {a}/{b}" for d, (a, b, _) in per_d.items()))


# 10

def test_c10_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--d-max", "3", "--out", str(a)])
    main(["verify", "--d-max", "3", "--out", str(b)])
    ok = a.read_bytes() == b.read_bytes()
    _check(10, ok, f"verify --d-max 3 twice, {a.stat().st_size} bytes, identical={ok}")
