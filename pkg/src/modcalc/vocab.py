"""Vocabularies attached to a decorated point and the depth functions that
schedule the blowup rounds."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple

from .graph import CoreDescriptor, WeightedDualGraph, core, path_to_core, tail_parents, validate
from .words import (
    EMPTY,
    Kind,
    Letter,
    Vocabulary,
    Word,
    edge,
    excellent_indices,
    format_word,
    initials,
    is_linear,
    minimal_indices,
    multiplicity,
    perfect_indices,
    residual,
    tail,
)


class Slot(NamedTuple):
    """One unit of weight: the k-th marked point on a vertex."""

    vertex: str
    k: int

    def __str__(self) -> str:
        return f"{self.vertex}#{self.k}"


@dataclass(frozen=True)
class SlotInfo:
    slot: Slot
    home: str
    root: str
    root_pos: int
    on_root: bool


@dataclass(frozen=True)
class DegeneracyFlags:
    chi: bool | None = None
    hyperelliptic_core: bool | None = None
    core_conjugate_pair: bool | None = None


@dataclass(frozen=True)
class MinorTag:
    """Tag on the coefficient minor of a column pair.

    status is "generic", "vanishes" or "unit_times"; for "unit_times" the
    letter names the principalizing divisor and ``det`` is the word the
    determinant currently factors as (rewritten by later substitutions).
    """

    pair: tuple[Slot, Slot]
    status: str
    reason: str = ""
    letter: str = ""
    det: Word = EMPTY


@dataclass(frozen=True)
class DecoratedPoint:
    graph: WeightedDualGraph
    core: CoreDescriptor
    slots: tuple[SlotInfo, ...]
    s_minus: Vocabulary
    s_plus: Vocabulary
    registry: frozenset
    t3: Vocabulary | None = None
    t3_letter: Letter | None = None
    flags: DegeneracyFlags = field(default_factory=DegeneracyFlags)
    minors: tuple[MinorTag, ...] = ()

    @property
    def one_root(self) -> bool:
        return self.core.is_single

    @cached_property
    def info(self) -> dict[Slot, SlotInfo]:
        return {s.slot: s for s in self.slots}

    @cached_property
    def t(self) -> Vocabulary:
        return derived_vocabulary(self)

    @cached_property
    def t2(self):
        return secondary_derived(self)

    @cached_property
    def ell2(self):
        return _depth2(self)

    def key(self) -> str:
        """Content key; equal keys mean the same combinatorial stratum."""
        return self._key

    @cached_property
    def _key(self) -> str:
        parts = [
            ";".join(format_word(w) for w in self.s_minus.words()),
            ";".join(format_word(w) for w in self.s_plus.words()),
        ]
        if self.t3 is not None:
            parts.append("t3:" + ";".join(f"{_key_str(k)}={format_word(w)}" for k, w in self.t3.items()))
        f = self.flags
        parts.append(f"chi={f.chi},hyp={f.hyperelliptic_core},conj={f.core_conjugate_pair}")
        for m in self.minors:
            parts.append(f"m:{m.pair[0]},{m.pair[1]}:{m.status}:{m.reason}:{m.letter}:{format_word(m.det)}")
        return "|".join(parts)

    def with_changes(self, **kw) -> "DecoratedPoint":
        return replace(self, **kw)


def _key_str(k) -> str:
    if isinstance(k, tuple) and len(k) == 2 and isinstance(k[1], tuple):
        return f"{k[0]}{k[1][0]}#{k[1][1]}"
    return str(k)


# ground construction

def _slots(g: WeightedDualGraph) -> list[SlotInfo]:
    c = core(g)
    roots = c.root_vertices
    parents = tail_parents(g)
    out: list[SlotInfo] = []
    for pos, r in enumerate(roots):
        out.extend(SlotInfo(Slot(r, k), r, r, pos, True) for k in range(1, g.by_id[r].weight + 1))
        # tails of this root in depth-first order
        stack = [w for w in reversed(g.adjacency[r]) if w not in roots]
        while stack:
            v = stack.pop()
            out.extend(SlotInfo(Slot(v, k), v, r, pos, False) for k in range(1, g.by_id[v].weight + 1))
            stack.extend(w for w in reversed(g.adjacency[v]) if w != parents[v][0])
    return out


def reduced_vocabulary(g: WeightedDualGraph) -> Vocabulary:
    validate(g)
    words: dict[Slot, Word] = {}
    longest: dict[str, Word] = {}

    def chain_word(v: str) -> Word:
        # longest word among the tail ancestors of v
        best: Word = EMPTY
        for u in path_to_core(g, v)[:-1]:
            if len(longest.get(u, EMPTY)) > len(best):
                best = longest[u]
        return best

    for info in _slots(g):
        v = info.home
        if info.on_root:
            words[info.slot] = EMPTY
            continue
        base = tuple(tail(u) for u in path_to_core(g, v))
        w = chain_word(v) + base * info.slot.k
        words[info.slot] = w
        if len(w) > len(longest.get(v, EMPTY)):
            longest[v] = w
    return Vocabulary((info.slot, words[info.slot]) for info in _slots(g))


def signed_vocabularies(g: WeightedDualGraph) -> tuple[Vocabulary, Vocabulary]:
    s = reduced_vocabulary(g)
    c = core(g)
    info = {i.slot: i for i in _slots(g)}
    n = len(c.root_vertices)
    if n == 1:
        return s, s
    if n == 2:
        q = (edge(0),)
        minus = Vocabulary((k, w if info[k].root_pos == 0 else w + q) for k, w in s.items())
        plus = Vocabulary((k, w + q if info[k].root_pos == 0 else w) for k, w in s.items())
        return minus, plus
    last = n - 1  # = l + 1

    def pre_minus(i: int) -> Word:
        return tuple(edge(j) for j in range(1, i + 1))

    def pre_plus(i: int) -> Word:
        return tuple(edge(j) for j in range(last, i, -1))

    minus = Vocabulary((k, pre_minus(info[k].root_pos) + w) for k, w in s.items())
    plus = Vocabulary((k, pre_plus(info[k].root_pos) + w) for k, w in s.items())
    return minus, plus


def ground_point(g: WeightedDualGraph, flags: DegeneracyFlags | None = None) -> DecoratedPoint:
    minus, plus = signed_vocabularies(g)
    letters = minus.letters() | plus.letters()
    minors: tuple[MinorTag, ...] = ()
    flags = flags or DegeneracyFlags()
    c = core(g)
    slots = tuple(_slots(g))
    if flags.core_conjugate_pair:
        core_slots = [s.slot for s in slots if s.on_root]
        if not c.is_single or len(core_slots) < 2:
            from .errors import InconsistentFlags

            raise InconsistentFlags("core_conjugate_pair needs two points on a genus-2 core")
        minors = (MinorTag((core_slots[0], core_slots[1]), "vanishes", "ConjugatePoints"),)
    return DecoratedPoint(g, c, slots, minus, plus, frozenset(letters), flags=flags, minors=minors)


# derived vocabularies

def derived_vocabulary(p: DecoratedPoint) -> Vocabulary:
    if p.one_root:
        return Vocabulary.trusted(tuple((("0", k), w) for k, w in p.s_minus.items()))
    return Vocabulary.trusted(
        tuple((("-", k), w) for k, w in p.s_minus.items()) + tuple((("+", k), w) for k, w in p.s_plus.items())
    )


def signed(p: DecoratedPoint, side: str) -> Vocabulary:
    src = p.s_minus if side == "-" else p.s_plus
    return Vocabulary.trusted(tuple(((side, k), w) for k, w in src.items()))


def has_excellent(v: Vocabulary | None) -> bool:
    return bool(v is not None and len(v) and excellent_indices(v))


def depth1(p: DecoratedPoint) -> int:
    t = p.t
    if not len(t) or excellent_indices(t):
        return 0
    return len(initials(t))


@dataclass(frozen=True)
class Selection:
    case: int
    removed: tuple


def secondary_derived(p: DecoratedPoint) -> tuple[Vocabulary, Selection] | None:
    t = p.t
    if not len(t):
        return None
    if p.one_root:
        exc = excellent_indices(t)
        if len(exc) == 1:
            return t.without(exc[0]), Selection(1, (exc[0],))
        return None
    perf = perfect_indices(t)
    if not perf:
        return None
    sides = {k[0] for k in perf}
    if len(sides) == 1:
        side = sides.pop()
        slots = [k[1] for k in perf]
        pos = [p.info[s].root_pos for s in slots]
        if side == "-":
            a0 = slots[pos.index(min(pos))]
            other = "+"
        else:
            # mirror image of the rule: nearest to o_+
            a0 = slots[len(pos) - 1 - pos[::-1].index(max(pos))]
            other = "-"
        return signed(p, other).without((other, a0)), Selection(2, ((other, a0),))
    if len(perf) == 2 and perf[0][1] == perf[1][1]:
        return t.without(*perf), Selection(3, tuple(perf))
    return None


def epsilon_count(v: Vocabulary) -> int:
    """Largest number of distinguished letter occurrences in a distinguished
    minimal word of the residual of v."""
    if not len(v):
        return 0
    r = residual(v)
    best = 0
    for k in minimal_indices(r):
        w = r[k]
        n = sum(1 for x in w if x.distinguished)
        best = max(best, n)
    return best


def depth2(p: DecoratedPoint) -> tuple[int, int] | None:
    return p.ell2


def _depth2(p: DecoratedPoint) -> tuple[int, int] | None:
    sec = p.t2
    if sec is None or not len(sec[0]):
        return None
    t2 = sec[0]
    return len(initials(t2)), epsilon_count(t2)


def pi_b_key(alpha: tuple[int, int]) -> tuple[int, int]:
    i, j = alpha
    return (i, -j)


def in_pi_b(alpha: tuple[int, int], d: int) -> bool:
    i, j = alpha
    return 0 <= j < i <= d


def third_derived(p: DecoratedPoint) -> Vocabulary | None:
    return p.t3


def depth3(p: DecoratedPoint) -> int | None:
    if p.t3 is None or not len(p.t3):
        return None
    return len(initials(p.t3))


# admissibility

@dataclass(frozen=True)
class Admissibility:
    p1: bool
    p2: bool
    p3: bool
    p4: bool
    stable: bool = True

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.p4 and self.stable


def _is_original(w: Word) -> bool:
    return all(x.original for x in w)


def _is_tail(w: Word) -> bool:
    return all(x.tail for x in w)


def admissibility_of(v: Vocabulary, stable: bool = True) -> Admissibility:
    if not len(v):
        return Admissibility(True, True, True, True, stable)
    mins = [v[k] for k in minimal_indices(v)]
    orig = [w for w in mins if _is_original(w)]
    p1 = all(is_linear(w) for w in orig)
    p2 = True
    for i, a in enumerate(orig):
        for b in orig[i + 1:]:
            if a and b and a[0] != b[0] and set(a) & set(b):
                p2 = False
    p3 = True
    for w in mins:
        if _is_tail(w):
            continue
        n = 0
        while n < len(w) and not w[n].tail:
            n += 1
        if not _is_tail(w[n:]):
            p3 = False
    p4 = True
    for w in orig:
        if len(w) < 2:
            continue
        if not any(len(u) >= 2 and u[0] == w[0] and u[1] != w[1] for u in orig):
            p4 = False
    return Admissibility(p1, p2, p3, p4, stable)


def admissibility(p: DecoratedPoint, which: str = "t") -> Admissibility:
    """Check (P1)-(P4) on the residual of t, t' or t'' (which = t/t2/t3)."""
    try:
        validate(p.graph)
        stable = True
    except Exception:
        stable = False
    if which == "t":
        v = p.t
    elif which == "t2":
        v = p.t2[0] if p.t2 else Vocabulary()
    else:
        v = p.t3 if p.t3 is not None else Vocabulary()
    return admissibility_of(residual(v) if len(v) else v, stable)


# criticality

def is_critical(p: DecoratedPoint) -> bool:
    t = p.t
    if not len(t):
        return False
    sec = p.t2
    if sec is None:
        return len(perfect_indices(t)) == 2
    t2 = sec[0]
    return len(t2) > 0 and len(excellent_indices(t)) == 1 and len(excellent_indices(t2)) == 1


def critical_pair(p: DecoratedPoint) -> tuple | None:
    """The two t-indices whose coefficient minor decides criticality."""
    if not is_critical(p):
        return None
    t = p.t
    sec = p.t2
    if sec is None:
        a, b = perfect_indices(t)
        return a, b
    return excellent_indices(t)[0], excellent_indices(sec[0])[0]


def is_modified(p: DecoratedPoint) -> bool:
    return any(x.kind not in (Kind.TAIL, Kind.ROOT_EDGE) for x in p.registry)


def is_first_order_critical(p: DecoratedPoint) -> bool:
    t = p.t
    if is_modified(p) or not len(t):
        return False
    perf = perfect_indices(t)
    return len(perf) == 2 and all(t[k] == EMPTY for k in perf)


def core_weight(p: DecoratedPoint) -> int:
    return sum(p.graph.by_id[r].weight for r in p.core.root_vertices)


def letters_of(p: DecoratedPoint) -> set[Letter]:
    out = p.s_minus.letters() | p.s_plus.letters()
    if p.t3 is not None:
        out |= p.t3.letters()
    for m in p.minors:
        out |= set(m.det)
    return out


def vector_str(w: Word) -> dict[str, int]:
    return {x.name: n for x, n in sorted(multiplicity(w).items())}
