"""Weighted genus-2 dual graphs: validation, core structure, canonical forms
and exhaustive enumeration.

A graph is a tree whose vertices carry a genus in {0, 1, 2} and a weight
(number of marked points).  The core is the minimal subtree of total genus
two; its vertices are the roots and every other vertex is a tail vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from itertools import product

from .errors import BadCoreShape, GenusSumNot2, NotATailVertex, NotATree, Unstable


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int
    weight: int


@dataclass(frozen=True)
class CoreDescriptor:
    """Roots ordered from o_- to o_+ and the chain edges q_1..q_{l+1}."""

    root_vertices: tuple[str, ...]
    root_edges: tuple[tuple[str, str], ...]

    @property
    def is_single(self) -> bool:
        return len(self.root_vertices) == 1


class Order(Enum):
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class WeightedDualGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...]

    @cached_property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return {k: tuple(v) for k, v in adj.items()}

    @property
    def total_weight(self) -> int:
        return sum(v.weight for v in self.vertices)

    def valence(self, v: str) -> int:
        return len(self.adjacency[v])

    def __str__(self) -> str:
        return to_text(self)


def _path(g: WeightedDualGraph, start: str, goal: str) -> list[str]:
    prev = {start: None}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w not in prev:
                prev[w] = u
                stack.append(w)
    out = [goal]
    while out[-1] != start:
        out.append(prev[out[-1]])
    return out[::-1]


def validate(g: WeightedDualGraph) -> None:
    ids = [v.id for v in g.vertices]
    if not ids or len(set(ids)) != len(ids):
        raise NotATree("vertex ids must be nonempty and distinct")
    for v in g.vertices:
        if v.genus not in (0, 1, 2) or v.weight < 0:
            raise NotATree(f"bad labels on vertex {v.id!r}")
    if len(g.edges) != len(ids) - 1:
        raise NotATree("a tree on n vertices has n-1 edges")
    known = set(ids)
    for u, w in g.edges:
        if u not in known or w not in known or u == w:
            raise NotATree(f"bad edge {u}-{w}")
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        for w in g.adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(ids):
        raise NotATree("graph is disconnected")
    if sum(v.genus for v in g.vertices) != 2:
        raise GenusSumNot2("sum of genera must be 2")
    for v in g.vertices:
        if v.genus == 0 and v.weight == 0 and g.valence(v.id) < 3:
            raise Unstable(v.id)
    ones = [v.id for v in g.vertices if v.genus == 1]
    if ones:
        inner = _path(g, ones[0], ones[1])[1:-1]
        if any(g.by_id[v].genus != 0 for v in inner):
            raise BadCoreShape("core chain interior must have genus 0")


def core(g: WeightedDualGraph) -> CoreDescriptor:
    twos = [v.id for v in g.vertices if v.genus == 2]
    if twos:
        return CoreDescriptor((twos[0],), ())
    ones = [v.id for v in g.vertices if v.genus == 1]
    if len(ones) != 2:
        raise BadCoreShape("expected one genus-2 or two genus-1 vertices")
    path = tuple(_path(g, ones[0], ones[1]))
    return CoreDescriptor(path, tuple(zip(path, path[1:])))


def tail_parents(g: WeightedDualGraph) -> dict[str, tuple[str, str]]:
    """Map each tail vertex to (parent vertex, root it hangs from)."""
    roots = set(core(g).root_vertices)
    out: dict[str, tuple[str, str]] = {}
    for r in core(g).root_vertices:
        stack = [(w, r) for w in g.adjacency[r] if w not in roots]
        while stack:
            v, parent = stack.pop()
            out[v] = (parent, r)
            stack.extend((w, v) for w in g.adjacency[v] if w != parent)
    return out


def path_to_core(g: WeightedDualGraph, v: str) -> list[str]:
    """Tail vertices from the core-adjacent one down to v (empty for roots)."""
    parents = tail_parents(g)
    out = []
    while v in parents:
        out.append(v)
        v = parents[v][0]
    return out[::-1]


def tail_order(g: WeightedDualGraph, v: str, w: str) -> Order:
    parents = tail_parents(g)
    for x in (v, w):
        if x not in parents:
            raise NotATailVertex(x)
    if v == w:
        return Order.INCOMPARABLE
    if v in path_to_core(g, w):
        return Order.LESS
    if w in path_to_core(g, v):
        return Order.GREATER
    return Order.INCOMPARABLE


# canonical forms

def _tail_code(g: WeightedDualGraph, v: str, parent: str) -> str:
    kids = sorted(_tail_code(g, w, v) for w in g.adjacency[v] if w != parent)
    return f"{g.by_id[v].weight}[{','.join(kids)}]"


def _root_code(g: WeightedDualGraph, r: str, roots: set[str]) -> str:
    kids = sorted(_tail_code(g, w, r) for w in g.adjacency[r] if w not in roots)
    vx = g.by_id[r]
    return f"g{vx.genus}:{vx.weight}[{','.join(kids)}]"


@lru_cache(maxsize=4096)
def canonical_form(g: WeightedDualGraph) -> bytes:
    c = core(g)
    roots = set(c.root_vertices)
    codes = [_root_code(g, r, roots) for r in c.root_vertices]
    return "|".join(min(codes, codes[::-1])).encode()


# text notation

def to_text(g: WeightedDualGraph) -> str:
    c = core(g)
    roots = set(c.root_vertices)

    def tail(v: str, parent: str) -> str:
        kids = [tail(w, v) for w in g.adjacency[v] if w != parent]
        body = f"{v}({g.by_id[v].weight})"
        return body + (f"[{', '.join(kids)}]" if kids else "")

    parts = []
    for r in c.root_vertices:
        vx = g.by_id[r]
        head = f"g{vx.genus}({vx.weight})" if vx.genus else f"0({vx.weight})"
        kids = [tail(w, r) for w in g.adjacency[r] if w not in roots]
        parts.append(head + (f"[{', '.join(kids)}]" if kids else ""))
    return " - ".join(parts)


# enumeration
# A tail tree is (weight, children) with children a sorted tuple of tail trees.

TAIL_NAMES = "abcdfghijkmnprsuvwxyz"


@lru_cache(maxsize=None)
def _tails(total: int, depth: int) -> tuple:
    """Tail trees of exactly this total weight and height at most depth."""
    if depth <= 0 or total <= 0:
        return ()
    out = []
    for w in range(total + 1):
        for kids in _forests(total - w, depth - 1):
            if w == 0 and len(kids) < 2:
                continue
            out.append((w, kids))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _forests(total: int, depth: int, floor: tuple | None = None) -> tuple:
    """Sorted multisets of tail trees with given total weight, each >= floor."""
    if total == 0:
        return ((),)
    out = []
    for k in range(1, total + 1):
        for tree in _tails(k, depth):
            if floor is not None and tree < floor:
                continue
            for rest in _forests(total - k, depth, tree):
                out.append((tree,) + rest)
    return tuple(out)


def _build(segments: list[tuple[int, int, tuple]]) -> WeightedDualGraph:
    names = iter(TAIL_NAMES)
    vertices: list[Vertex] = []
    edges: list[tuple[str, str]] = []
    if len(segments) == 1:
        root_ids = ["o"]
    else:
        root_ids = ["o-"] + [f"o{i}" for i in range(1, len(segments) - 1)] + ["o+"]

    def add_tail(tree, parent):
        name = next(names)
        vertices.append(Vertex(name, 0, tree[0]))
        edges.append((parent, name))
        for kid in tree[1]:
            add_tail(kid, name)

    for rid, (genus, weight, kids) in zip(root_ids, segments):
        vertices.append(Vertex(rid, genus, weight))
    for a, b in zip(root_ids, root_ids[1:]):
        edges.append((a, b))
    for rid, (_, _, kids) in zip(root_ids, segments):
        for kid in kids:
            add_tail(kid, rid)
    return WeightedDualGraph(tuple(vertices), tuple(edges))


def _root_options(total: int, depth: int, genus: int):
    for w in range(total + 1):
        for kids in _forests(total - w, depth):
            if genus == 0 and w == 0 and not kids:
                continue
            yield (genus, w, kids)


def enumerate_graphs(d: int, max_tail_depth: int | None = None) -> list[WeightedDualGraph]:
    """All isomorphism classes of valid graphs of total weight d, sorted by
    canonical form.  Tail height is bounded by d (stability forces this)."""
    depth = d if max_tail_depth is None else max_tail_depth
    found: dict[bytes, WeightedDualGraph] = {}

    def keep(segments):
        g = _build(segments)
        found.setdefault(canonical_form(g), g)

    for seg in _root_options(d, depth, 2):
        keep([seg])
    # chains: two genus-1 ends and up to d interior rational roots
    for interior in range(d + 1):
        slots = [1] + [0] * interior + [1]
        budgets = _splits(d, len(slots))
        for split in budgets:
            options = [list(_root_options(b, depth, gen)) for gen, b in zip(slots, split)]
            for combo in product(*options):
                keep(list(combo))
    return [found[k] for k in sorted(found)]


def _splits(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest

