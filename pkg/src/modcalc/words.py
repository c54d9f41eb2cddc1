"""Letters, words and indexed vocabularies.

Words are tuples of ``Letter``.  They compare by multiplicity vectors
(componentwise order) but are stored as sequences, since prefixes and
pivots depend on letter order.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Mapping

from .errors import EmptyVocabulary


class Kind(IntEnum):
    TAIL = 0
    ROOT_EDGE = 1
    EXC1 = 2
    EXC2 = 3
    LAMBDA = 4
    EXC3 = 5
    THETA = 6
    EXC4 = 7


@dataclass(frozen=True)
class Letter:
    kind: Kind
    index: str | int

    @property
    def distinguished(self) -> bool:
        return self.kind != Kind.TAIL

    @property
    def original(self) -> bool:
        return self.kind in (Kind.TAIL, Kind.ROOT_EDGE)

    @property
    def tail(self) -> bool:
        return self.kind == Kind.TAIL

    def __lt__(self, other: "Letter") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        idx = self.index
        return (int(self.kind), isinstance(idx, str), idx if isinstance(idx, str) else f"{idx:06d}")

    @cached_property
    def name(self) -> str:
        k, i = self.kind, self.index
        if k == Kind.TAIL:
            return str(i)
        if k == Kind.ROOT_EDGE:
            return "q" if i == 0 else f"q{i}"
        if k == Kind.LAMBDA:
            return "L"
        if k == Kind.THETA:
            return "T"
        primes = {Kind.EXC1: "", Kind.EXC2: "'", Kind.EXC3: "''", Kind.EXC4: "'''"}[k]
        return f"e{primes}{i}"

    def __repr__(self) -> str:
        return self.name


def tail(name: str) -> Letter:
    return Letter(Kind.TAIL, name)


def edge(i: int = 0) -> Letter:
    """Root-edge letter; index 0 is the lone q of a two-root core."""
    return Letter(Kind.ROOT_EDGE, i)


LAMBDA = Letter(Kind.LAMBDA, 0)
THETA = Letter(Kind.THETA, 0)

Word = tuple[Letter, ...]
EMPTY: Word = ()


def multiplicity(w: Iterable[Letter]) -> Counter:
    return Counter(w)


@lru_cache(maxsize=1 << 16)
def _mult(w: Word) -> dict:
    # shared, read-only
    return dict(Counter(w))


def vec_leq(a: Mapping, b: Mapping) -> bool:
    return all(b.get(k, 0) >= n for k, n in a.items())


def word_leq(w1: Word, w2: Word) -> bool:
    return vec_leq(_mult(tuple(w1)), _mult(tuple(w2)))


def is_linear(w: Word) -> bool:
    return len(set(w)) == len(w)


def pivot(w: Word) -> Letter | None:
    return w[0] if w else None


def format_word(w: Word) -> str:
    if not w:
        return "~"
    names = [x.name for x in w]
    sep = "" if all(len(n) == 1 for n in names) else "."
    return sep.join(names)


# without dots each letter is one character plus optional primes and digits
_UNDOTTED = re.compile(r"[A-Za-z_]'*\d*")


def parse_word(text: str, letters: Iterable[Letter] = ()) -> Word:
    """Parse the word literal syntax.  Tail names not found in ``letters``
    are read as tail letters."""
    text = text.strip()
    if text in ("~", ""):
        return EMPTY
    table = {x.name: x for x in letters}
    tokens = text.split(".") if "." in text else _UNDOTTED.findall(text)
    return tuple(_letter_from_token(tok, table) for tok in tokens)


def _letter_from_token(tok: str, table: Mapping[str, Letter]) -> Letter:
    if tok in table:
        return table[tok]
    if tok == "L":
        return LAMBDA
    if tok == "T":
        return THETA
    if tok == "q":
        return edge(0)
    if tok[0] == "q" and tok[1:].isdigit():
        return edge(int(tok[1:]))
    if tok[0] == "e":
        rest = tok[1:]
        primes = len(rest) - len(rest.lstrip("'"))
        digits = rest[primes:]
        if digits.isdigit():
            kind = (Kind.EXC1, Kind.EXC2, Kind.EXC3, Kind.EXC4)[primes]
            return Letter(kind, int(digits))
    return tail(tok)


class Vocabulary:
    """Immutable map from hashable indices to words."""

    __slots__ = ("_items", "_prefix")

    def __init__(self, items: Mapping[Hashable, Word] | Iterable[tuple[Hashable, Word]] = ()):
        pairs = items.items() if isinstance(items, dict) else items
        self._items: tuple[tuple[Hashable, Word], ...] = tuple(
            (k, w if type(w) is tuple else tuple(w)) for k, w in pairs
        )
        self._prefix: Word | None = None

    @classmethod
    def trusted(cls, pairs: tuple) -> "Vocabulary":
        """Wrap pairs whose words are already tuples, without copying."""
        v = cls.__new__(cls)
        v._items = pairs
        v._prefix = None
        return v

    @classmethod
    def of(cls, *words: Word) -> "Vocabulary":
        return cls(enumerate(words))

    def items(self):
        return self._items

    def keys(self):
        return [k for k, _ in self._items]

    def words(self) -> list[Word]:
        return [w for _, w in self._items]

    def __getitem__(self, key) -> Word:
        for k, w in self._items:
            if k == key:
                return w
        raise KeyError(key)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def without(self, *keys) -> "Vocabulary":
        drop = set(keys)
        return Vocabulary.trusted(tuple((k, w) for k, w in self._items if k not in drop))

    def replace(self, key, word: Word) -> "Vocabulary":
        return Vocabulary((k, word if k == key else w) for k, w in self._items)

    def multiset(self) -> Counter:
        return Counter(self.words())

    def letters(self) -> set[Letter]:
        return {x for w in self.words() for x in w}

    def __repr__(self) -> str:
        return format_vocabulary(self)


def format_vocabulary(v: Vocabulary) -> str:
    if not len(v):
        return "{}"
    p, r = factored_form(v)
    body = ", ".join(format_word(w) for w in r.words())
    return (format_word(p) if p else "") + "{" + body + "}"


def _require(v: Vocabulary) -> None:
    if not len(v):
        raise EmptyVocabulary("operation needs a nonempty vocabulary")


def common_prefix(v: Vocabulary) -> Word:
    _require(v)
    if v._prefix is None:
        words = v.words()
        k = 0
        for col in zip(*words):
            c = col[0]
            if any(x is not c and x != c for x in col):
                break
            k += 1
        v._prefix = words[0][:k]
    return v._prefix


def factored_form(v: Vocabulary) -> tuple[Word, Vocabulary]:
    p = common_prefix(v)
    n = len(p)
    return p, Vocabulary.trusted(tuple((k, w[n:]) for k, w in v.items()))


def residual(v: Vocabulary) -> Vocabulary:
    return factored_form(v)[1]


def excellent_indices(v: Vocabulary) -> list:
    n = len(common_prefix(v))
    return [k for k, w in v.items() if len(w) == n]


def minimal_indices(v: Vocabulary) -> list:
    _require(v)
    vecs = [(k, _mult(w)) for k, w in v.items()]
    out = []
    for k, m in vecs:
        # minimal: no other word strictly below it
        if not any(j != k and vec_leq(n, m) and n != m for j, n in vecs):
            out.append(k)
    return out


def perfect_indices(v: Vocabulary) -> list:
    _require(v)
    vecs = [(k, _mult(w)) for k, w in v.items()]
    # m is below every word iff it is below their componentwise minimum
    low = dict(vecs[0][1])
    for _, n in vecs[1:]:
        low = {x: min(c, n[x]) for x, c in low.items() if x in n}
    return [k for k, m in vecs if vec_leq(m, low)]


def is_perfect(v: Vocabulary) -> bool:
    vecs = [(k, _mult(w)) for k, w in v.items()]
    for a, ma in vecs:
        if not all(vec_leq(ma, n) for j, n in vecs if j != a):
            continue
        for b, mb in vecs:
            if b != a and all(vec_leq(mb, n) for j, n in vecs if j not in (a, b)):
                return True
    return False


def initials(v: Vocabulary) -> set[Letter]:
    """Pivots of the nonempty words of the residual of v."""
    return {w[0] for w in residual(v).words() if w}


def secondary_excellent(v: Vocabulary):
    exc = excellent_indices(v)
    if len(exc) != 1 or len(v) < 2:
        return None
    rest = v.without(exc[0])
    second = excellent_indices(rest)
    return second[0] if second else None
