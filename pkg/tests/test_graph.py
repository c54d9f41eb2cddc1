import pytest
from hypothesis import given, settings, strategies as st

from modcalc.errors import GenusSumNot2, NotATailVertex, NotATree, Unstable
from modcalc.graph import (
    Order,
    Vertex,
    WeightedDualGraph,
    canonical_form,
    core,
    enumerate_graphs,
    tail_order,
    to_text,
    validate,
)
from modcalc.notation import parse_graph

from conftest import EX1, EX2, EX3


def G(vs, es):
    return WeightedDualGraph(tuple(Vertex(*v) for v in vs), tuple(es))


def test_smooth_genus_two_is_valid():
    validate(G([("o", 2, 0)], []))


def test_two_elliptic_curves_valid():
    validate(G([("x", 1, 0), ("y", 1, 0)], [("x", "y")]))


def test_unstable_rational_leaf():
    with pytest.raises(Unstable):
        validate(G([("o", 2, 0), ("a", 0, 0)], [("o", "a")]))


def test_genus_sum():
    with pytest.raises(GenusSumNot2):
        validate(G([("o", 1, 0)], []))


def test_cycle_rejected():
    with pytest.raises(NotATree):
        validate(G([("o", 2, 0), ("a", 0, 1), ("b", 0, 1)], [("o", "a"), ("a", "b"), ("b", "o")]))


def test_genus_one_tail_is_allowed():
    g = G([("x", 1, 0), ("m", 1, 1), ("z", 0, 1)], [("x", "m"), ("m", "z")])
    validate(g)


def test_rational_bridge_between_elliptic_roots():
    g = G([("x", 1, 0), ("m", 0, 1), ("y", 1, 0)], [("x", "m"), ("m", "y")])
    validate(g)
    with pytest.raises(GenusSumNot2):
        validate(G([("x", 1, 0), ("m", 2, 0), ("y", 1, 0)], [("x", "m"), ("m", "y")]))


def test_core_single_root(ex1):
    assert core(ex1).root_vertices == ("o",)


def test_core_chain(ex3):
    c = core(ex3)
    assert c.root_vertices == ("o-", "o1", "o+")
    assert c.root_edges == (("o-", "o1"), ("o1", "o+"))


def test_tail_order(ex1):
    assert tail_order(ex1, "b", "c") is Order.LESS
    assert tail_order(ex1, "c", "b") is Order.GREATER
    assert tail_order(ex1, "a", "c") is Order.INCOMPARABLE
    assert tail_order(ex1, "c", "c") is Order.INCOMPARABLE
    with pytest.raises(NotATailVertex):
        tail_order(ex1, "o", "a")


def test_canonical_relabel_invariant():
    g = parse_graph(EX1)
    h = parse_graph("g2(0)[x(0)[z(2), y(3)], w(2)]")
    assert canonical_form(g) == canonical_form(h)


def test_canonical_chain_reversal():
    g = parse_graph(EX3)
    h = parse_graph("g1(0)[b(1)] - 0(1) - g1(0)[a2(1), a1(1)]")
    assert canonical_form(g) == canonical_form(h)


def test_canonical_distinguishes_examples():
    assert canonical_form(parse_graph(EX1)) != canonical_form(parse_graph(EX2))


# oracle counts, frozen from tests/oracle_enum.py
@pytest.mark.parametrize("d,count", [(0, 2), (1, 6), (2, 28), (3, 128)])
def test_enumeration_counts(d, count):
    assert len(enumerate_graphs(d)) == count


def test_enumerated_graphs_validate():
    for g in enumerate_graphs(2):
        validate(g)
        assert g.total_weight == 2


def test_oracle_agrees_small():
    from oracle_enum import oracle_graphs

    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    for d in (0, 1, 2):
        ours = []
        for g in enumerate_graphs(d):
            h = nx.Graph()
            for v in g.vertices:
                h.add_node(v.id, label=(v.genus, v.weight))
            h.add_edges_from(g.edges)
            ours.append(h)
        theirs = oracle_graphs(d)
        assert len(ours) == len(theirs)
        m = categorical_node_match("label", None)
        for h in theirs:
            assert sum(nx.is_isomorphic(h, k, node_match=m) for k in ours) == 1


_ALL3 = [g for d in range(4) for g in enumerate_graphs(d)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_ALL3))
def test_parse_print_round_trip(g):
    h = parse_graph(to_text(g))
    assert canonical_form(h) == canonical_form(g)
    assert to_text(h) == to_text(g)
