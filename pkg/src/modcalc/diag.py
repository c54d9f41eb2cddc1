"""Structural monomial matrices and their diagonalization.

A column of the 2 x m structural matrix carries one unit coefficient per
row and one monomial per row, the monomial being the multiplicity vector of
the corresponding signed word.  Coefficients are never numeric; the only
information about them is the tag on each 2 x 2 minor.

Elimination uses a pivot (row s, column a_i) whose monomial p1 divides every
entry.  After clearing row s and column a_i, the remaining row s' has entry

    c'_b m'_b - (c'_ai m'_ai / c_ai m_ai) c_b m_b

at column b.  A second pivot a_j works when p2 = m'_aj divides all of
these.  At b = a_j the two terms have monomials m'_aj and
m'_ai m_aj / m_ai; if the second is a proper multiple of the first the
entry is a unit times p2, and if they are equal the unit factor is the
coefficient minor of (a_i, a_j) divided by c_ai.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InconsistentFlags, NotDiagonalized
from .graph import path_to_core
from .vocab import DecoratedPoint, MinorTag, Slot
from .words import Letter, Word, edge, multiplicity, tail

Monomial = Counter


def divides(a: Monomial, b: Monomial) -> bool:
    return all(b.get(k, 0) >= n for k, n in a.items() if n)


def mono_str(m: Monomial) -> str:
    parts = []
    for x, n in sorted((k, v) for k, v in m.items() if v):
        parts.append(x.name if n == 1 else f"{x.name}^{n}")
    return "*".join(parts) if parts else "1"


def mono_dict(m: Monomial) -> dict[str, int]:
    return {x.name: n for x, n in sorted(m.items()) if n}


def _same(a: Monomial, b: Monomial) -> bool:
    return +a == +b


@dataclass(frozen=True)
class Column:
    slot: Slot
    exp_minus: Monomial
    exp_plus: Monomial

    def row(self, s: str) -> Monomial:
        return self.exp_minus if s == "-" else self.exp_plus


@dataclass(frozen=True)
class MonomialMatrix:
    """The structural homomorphism; ``zero_column`` stands for the section
    split off as a permanent zero column."""

    columns: tuple[Column, ...]
    minors: tuple[MinorTag, ...] = ()
    zero_column: bool = True

    def minor(self, a: Slot, b: Slot) -> MinorTag | None:
        for m in self.minors:
            if set(m.pair) == {a, b}:
                return m
        return None


_REASON_FLAG = {
    "ConjugatePoints": "core_conjugate_pair",
    "WeierstrassChain": "chi",
    "ConjugateChains": "chi",
    "Hyperelliptic": "hyperelliptic_core",
}
_LETTER_FLAG = {"L": "chi", "T": "hyperelliptic_core"}


def structural_matrix(p: DecoratedPoint) -> MonomialMatrix:
    for m in p.minors:
        need = _REASON_FLAG.get(m.reason) if m.status == "vanishes" else _LETTER_FLAG.get(m.letter)
        if m.status != "generic" and (need is None or getattr(p.flags, need) is not True):
            raise InconsistentFlags(f"minor {m.status} {m.reason or m.letter} without its flag")
    cols = tuple(
        Column(k, multiplicity(p.s_minus[k]), multiplicity(p.s_plus[k])) for k in p.s_minus.keys()
    )
    return MonomialMatrix(cols, p.minors)


@dataclass
class DiagonalReport:
    success: bool
    pivots: tuple[Monomial, ...] = ()
    pair: tuple[Slot, ...] = ()
    row: str = ""
    trace: list[str] = field(default_factory=list)
    failure_witness: str = ""

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "pivots": [mono_dict(p) for p in self.pivots],
            "pair": [str(s) for s in self.pair],
            "row": self.row,
            "chain_ok": check_presentation(self),
            "trace": list(self.trace),
            "failure_witness": self.failure_witness,
        }


def _other(s: str) -> str:
    return "+" if s == "-" else "-"


@dataclass(frozen=True)
class _Entry:
    """A reduced entry: a unit times ``mono`` when ``unit``, otherwise
    divisible exactly by the monomials in ``parts``."""

    unit: bool
    mono: Monomial
    parts: tuple[Monomial, ...]


def _reduced(m: MonomialMatrix, s: str, i: int, b: int) -> _Entry:
    cols = m.columns
    ci, cb = cols[i], cols[b]
    t = _other(s)
    p1 = ci.row(s)
    first = cb.row(t)
    second = ci.row(t) + cb.row(s) - p1
    if _same(first, second):
        tag = m.minor(ci.slot, cb.slot)
        if tag is None or tag.status == "generic":
            return _Entry(True, first, (first,))
        if tag.status == "vanishes":
            return _Entry(False, first, (first,))
        mono = first + multiplicity(tag.det)
        return _Entry(True, mono, (mono,))
    if divides(first, second):
        return _Entry(True, first, (first,))
    if divides(second, first):
        return _Entry(True, +second, (+second,))
    return _Entry(False, first, (first, +second))


def _try(m: MonomialMatrix, s: str, i: int, j: int) -> tuple[Monomial | None, str]:
    """Second pivot for the choice (row s, a_i, a_j), or None and a reason."""
    cols = m.columns
    ej = _reduced(m, s, i, j)
    if not ej.unit:
        tag = m.minor(cols[i].slot, cols[j].slot)
        if tag is not None and tag.status == "vanishes" and len(ej.parts) == 1:
            return None, f"minor of {cols[i].slot},{cols[j].slot} vanishes ({tag.reason})"
        return None, f"entry at {cols[j].slot} is not a unit times a monomial"
    p2 = ej.mono
    for b, cb in enumerate(cols):
        if b in (i, j):
            continue
        for part in _reduced(m, s, i, b).parts:
            if not divides(p2, part):
                return None, f"{mono_str(p2)} does not divide {mono_str(part)} at {cb.slot}"
    return p2, "unit entry"


def diagonalize(m: MonomialMatrix) -> DiagonalReport:
    cols = m.columns
    n = len(cols)
    if n == 0:
        return DiagonalReport(True, (), trace=["empty matrix"])
    rows = ("-", "+")
    # first pivots: entries dividing everything
    firsts = []
    for i, ci in enumerate(cols):
        for s in rows:
            p1 = ci.row(s)
            if all(divides(p1, c.row(r)) for c in cols for r in rows):
                firsts.append((i, s))
    if not firsts:
        return DiagonalReport(False, trace=["no entry divides every entry"], failure_witness="no first pivot")
    if n == 1:
        i, s = firsts[0]
        p1 = cols[i].row(s)
        return DiagonalReport(True, (p1,), (cols[i].slot,), s, [f"pivot {s}{cols[i].slot} = {mono_str(p1)}"])
    trace = []
    last = ""
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for s in rows:
                if (i, s) not in firsts:
                    continue
                p2, why = _try(m, s, i, j)
                if p2 is None:
                    last = why
                    trace.append(f"reject {s}{cols[i].slot},{cols[j].slot}: {why}")
                    continue
                p1 = cols[i].row(s)
                trace.append(f"pivot {s}{cols[i].slot} = {mono_str(p1)}")
                trace.append(f"pivot {_other(s)}{cols[j].slot} = {mono_str(p2)} ({why})")
                return DiagonalReport(True, (p1, p2), (cols[i].slot, cols[j].slot), s, trace)
    return DiagonalReport(False, trace=trace, failure_witness=last)


def chain_ok(pivots) -> bool:
    return all(divides(a, b) for a, b in zip(pivots, pivots[1:]))


def check_presentation(d: DiagonalReport) -> bool:
    return d.success and chain_ok(d.pivots)


@dataclass(frozen=True)
class LocalModel:
    n: int
    d: int
    equations: tuple[str, ...]
    primary_equations: tuple[str, ...]
    primary_dim: int
    nonunit_pivots: tuple[str, ...]
    components: int

    @property
    def smooth(self) -> bool:
        return not self.nonunit_pivots

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "equations": list(self.equations),
            "primary_equations": list(self.primary_equations),
            "primary_dim": self.primary_dim,
            "nonunit_pivots": list(self.nonunit_pivots),
            "components": self.components,
        }


def primary_dimension(n: int, d: int) -> int:
    return d * (n + 1) - n + 3


def local_equations(report: DiagonalReport, n: int, d: int) -> LocalModel:
    if not report.success:
        raise NotDiagonalized(report.failure_witness or "no diagonal presentation")
    pivots = list(report.pivots) + [Counter()] * (2 - len(report.pivots))
    eqs = []
    prim = []
    for i in range(1, n + 1):
        for k, z in enumerate(pivots[:2], start=1):
            w = f"w{k}_{i}"
            z_s = mono_str(z)
            eqs.append(f"{w} = 0" if z_s == "1" else f"{z_s}*{w} = 0")
            prim.append(f"{w} = 0")
    nonunit = tuple(mono_str(z) for z in pivots[:2] if +z)
    letters = {x for z in pivots[:2] for x in +z}
    return LocalModel(n, d, tuple(eqs), tuple(prim), primary_dimension(n, d), nonunit, 1 + len(letters))


def first_order_form(p: DecoratedPoint, vertex: str, side: str) -> Monomial:
    """Node-path product from a marked point on ``vertex`` to the core,
    continued along the root chain to the end named by ``side``."""
    g = p.graph
    letters: list[Letter] = [tail(v) for v in path_to_core(g, vertex)]
    info = next(s for s in p.slots if s.home == vertex) if vertex not in p.core.root_vertices else None
    roots = p.core.root_vertices
    pos = roots.index(vertex) if info is None else info.root_pos
    if len(roots) == 2:
        if (side == "-") != (pos == 0):
            letters.append(edge(0))
    elif len(roots) > 2:
        last = len(roots) - 1
        rng = range(1, pos + 1) if side == "-" else range(pos + 1, last + 1)
        letters.extend(edge(j) for j in rng)
    return multiplicity(letters)
