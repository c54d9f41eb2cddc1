"""Parser for the bracket notation of weighted dual graphs.

    graph := root ('-' root)*
    root  := ('g2' | 'g1' | '0') '(' int ')' [children]
    tail  := name ['(' int ')'] [children]
    children := '[' tail (',' tail)* ']'
"""
from __future__ import annotations

import re

from .errors import GraphSyntaxError
from .graph import Vertex, WeightedDualGraph, validate

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[()\[\],-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise GraphSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.vertices: list[Vertex] = []
        self.edges: list[tuple[str, str]] = []

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None) -> str:
        k, v, pos = self.peek()
        if (value is not None and v != value) or (kind is not None and k != kind):
            want = value or kind
            raise GraphSyntaxError(f"expected {want!r}, found {v or 'end of input'!r}", pos)
        self.i += 1
        return v

    def weight(self) -> int:
        self.take("(")
        w = int(self.take(kind="num"))
        self.take(")")
        return w

    def children(self, parent: str) -> None:
        if self.peek()[1] != "[":
            return
        self.take("[")
        while True:
            self.tail(parent)
            if self.peek()[1] == ",":
                self.take(",")
                continue
            self.take("]")
            return

    def tail(self, parent: str) -> None:
        k, v, pos = self.peek()
        if k != "name":
            raise GraphSyntaxError("expected a tail vertex name", pos)
        self.take()
        w = self.weight() if self.peek()[1] == "(" else 0
        self.vertices.append(Vertex(v, 0, w))
        self.edges.append((parent, v))
        self.children(v)

    def root(self, rid: str) -> None:
        k, v, pos = self.peek()
        if v in ("g2", "g1"):
            genus = int(v[1])
        elif k == "num" and v == "0":
            genus = 0
        else:
            raise GraphSyntaxError("expected g2, g1 or 0", pos)
        self.take()
        self.vertices.append(Vertex(rid, genus, self.weight()))
        self.children(rid)

    def parse(self) -> WeightedDualGraph:
        heads = []
        while True:
            rid = f"#{len(heads)}"
            heads.append(rid)
            self.root(rid)
            if self.peek()[1] == "-":
                self.take("-")
                continue
            break
        if self.peek()[0] != "end":
            raise GraphSyntaxError("trailing input", self.peek()[2])
        names = ["o"] if len(heads) == 1 else ["o-"] + [f"o{i}" for i in range(1, len(heads) - 1)] + ["o+"]
        rename = dict(zip(heads, names))
        for v in self.vertices:
            if v.id in names:
                raise GraphSyntaxError(f"tail name {v.id!r} is reserved", 0)
        verts = [Vertex(rename.get(v.id, v.id), v.genus, v.weight) for v in self.vertices]
        # roots first, in chain order
        verts.sort(key=lambda v: (v.id not in names, names.index(v.id) if v.id in names else 0))
        edges = [(a, b) for a, b in zip(names, names[1:])]
        edges += [(rename.get(a, a), rename.get(b, b)) for a, b in self.edges]
        return WeightedDualGraph(tuple(verts), tuple(edges))


def parse_graph(text: str) -> WeightedDualGraph:
    g = _Parser(text).parse()
    validate(g)
    return g
