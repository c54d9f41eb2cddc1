from collections import Counter

import pytest

from modcalc.notation import parse_graph
from modcalc.words import Vocabulary, parse_word

EX1 = "g2(0)[a(2), b(0)[c(3), d(2)]]"
EX2 = "g1(0)[a(2)] - g1(0)[b(2)]"
EX3 = "g1(0)[a1(1), a2(1)] - 0(1) - g1(0)[b(1)]"


def W(text):
    return parse_word(text)


def bag(*texts):
    """Multiset of words written in literal syntax."""
    return Counter(W(t) for t in texts)


def vbag(v: Vocabulary):
    return Counter(v.words())


@pytest.fixture
def ex1():
    return parse_graph(EX1)


@pytest.fixture
def ex2():
    return parse_graph(EX2)


@pytest.fixture
def ex3():
    return parse_graph(EX3)


# one line per acceptance criterion, printed after the run
CRITERIA: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    CRITERIA[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
