"""Symbolic execution of the four rounds of modular blowups.

A state is a combinatorial stratum: a decorated point together with the
branch history that produced it.  Each blowup step replaces every center
state by one child per proper subset T of the relevant initials, via
:func:`substitute`.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import (
    ChiOnForcedZero,
    FlagOnNonCritical,
    FreshCollision,
    NotProperSubset,
    OrderRegression,
    StepBudgetExceeded,
)
from .graph import WeightedDualGraph, canonical_form, path_to_core
from .vocab import (
    DecoratedPoint,
    DegeneracyFlags,
    MinorTag,
    admissibility,
    core_weight,
    critical_pair,
    depth1,
    depth2,
    ground_point,
    has_excellent,
    in_pi_b,
    is_critical,
    is_first_order_critical,
    pi_b_key,
)
from .words import LAMBDA, THETA, EMPTY, Kind, Letter, Vocabulary, Word, excellent_indices, format_word, initials, perfect_indices


@dataclass(frozen=True)
class BranchChoice:
    round: str
    step: int
    T: tuple[str, ...] = ()
    fresh: str = ""
    bit: str = ""

    def describe(self) -> str:
        if self.bit:
            return f"{self.round}:{self.bit}"
        return f"{self.round}{self.step}:T={{{','.join(self.T)}}}:{self.fresh}"


@dataclass(frozen=True)
class BlowupState:
    point: DecoratedPoint
    history: tuple[BranchChoice, ...] = ()

    @cached_property
    def id(self) -> str:
        raw = canonical_form(self.point.graph) + b"/" + self.point.key().encode()
        return hashlib.sha256(raw).hexdigest()[:16]

    def child(self, point: DecoratedPoint, choice: BranchChoice) -> "BlowupState":
        return BlowupState(point, self.history + (choice,))


def _rewrite(w: Word, inis: frozenset, keep: frozenset, fresh: Letter) -> Word:
    if inis.isdisjoint(w):
        return w
    out: list[Letter] = []
    for x in w:
        if x not in inis:
            out.append(x)
        elif x in keep:
            out.extend((fresh, x))
        else:
            out.append(fresh)
    return tuple(out)


def substitute(p: DecoratedPoint, inis, T, fresh: Letter) -> DecoratedPoint:
    inis = frozenset(inis)
    T = frozenset(T)
    if not T < inis:
        raise NotProperSubset(f"{sorted(T)} is not a proper subset of {sorted(inis)}")
    if fresh in p.registry:
        raise FreshCollision(fresh.name)

    def vocab(v: Vocabulary) -> Vocabulary:
        return Vocabulary.trusted(tuple((k, _rewrite(w, inis, T, fresh)) for k, w in v.items()))

    return p.with_changes(
        s_minus=vocab(p.s_minus),
        s_plus=vocab(p.s_plus),
        t3=vocab(p.t3) if p.t3 is not None else None,
        minors=tuple(
            MinorTag(m.pair, m.status, m.reason, m.letter, _rewrite(m.det, inis, T, fresh)) for m in p.minors
        ),
        registry=(p.registry - (inis - T)) | {fresh},
    )


def proper_subsets(inis) -> list[frozenset]:
    letters = sorted(inis)
    out = []
    for r in range(len(letters)):
        out.extend(frozenset(c) for c in combinations(letters, r))
    return out


# run bookkeeping

@dataclass
class Violation:
    check: str
    state: str
    detail: str


@dataclass
class RoundLog:
    name: str
    steps: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)


@dataclass
class RunOptions:
    rounds: str = "ABCD"
    flags: str = "all"
    budget: int | None = None
    core_weight_2_only: bool = True
    record_steps: bool = True


@dataclass
class TerminalForest:
    graph: WeightedDualGraph
    ground: BlowupState
    rounds: list[RoundLog]
    populations: dict[str, list[BlowupState]]
    terminals: list[BlowupState]
    captured: list[BlowupState]
    violations: list[Violation]
    stats: dict


class _Recorder:
    def __init__(self, options: RunOptions):
        self.options = options
        self.violations: list[Violation] = []
        self.captured: list[BlowupState] = []

    def violation(self, check: str, state: BlowupState, detail: str) -> None:
        self.violations.append(Violation(check, state.id, detail))

    def step(self, log: RoundLog, step: int, centers, children, extra=None) -> None:
        if not self.options.record_steps:
            return
        entry = {
            "step": step,
            "centers": [c.id for c in centers],
            "children": [
                {"parent": par.id, "T": list(ch.history[-1].T), "fresh": ch.history[-1].fresh, "state": ch.id}
                for par, ch in children
            ],
        }
        if extra:
            entry.update(extra)
        log.steps.append(entry)


def _dedupe(states: list[BlowupState]) -> list[BlowupState]:
    seen: dict[str, BlowupState] = {}
    for s in states:
        seen.setdefault(s.id, s)
    return [seen[k] for k in sorted(seen)]


def _check_adm(rec: _Recorder, states, which: str, label: str) -> None:
    for s in states:
        a = admissibility(s.point, which)
        if not a.ok:
            rec.violation(f"admissibility-{label}", s, repr(a))


def _budget(g: WeightedDualGraph, options: RunOptions) -> int:
    return options.budget if options.budget is not None else 2 * g.total_weight + 2


# round A

def round_a(states: list[BlowupState], rec: _Recorder, budget: int, log: RoundLog) -> list[BlowupState]:
    frontier = list(states)
    _check_adm(rec, frontier, "t", "A")
    m = 1
    max_depth = 0
    while True:
        pending = [s for s in frontier if len(s.point.t) and not has_excellent(s.point.t)]
        # a pending state below the current step is a depth regression; it is
        # reported when produced and left alone afterwards
        live = [s for s in pending if depth1(s.point) >= m]
        if not live:
            break
        max_depth = max([max_depth] + [depth1(s.point) for s in live])
        if m > budget:
            raise StepBudgetExceeded(f"round A exceeded {budget} steps")
        centers = [s for s in live if depth1(s.point) == m]
        ids = {c.id for c in centers}
        rest = [s for s in frontier if s.id not in ids]
        children: list[tuple[BlowupState, BlowupState]] = []
        if m > 1:
            fresh = Letter(Kind.EXC1, m)
            for c in centers:
                inis = initials(c.point.t)
                for T in proper_subsets(inis):
                    pt = substitute(c.point, inis, T, fresh)
                    choice = BranchChoice("A", m, tuple(x.name for x in sorted(T)), fresh.name)
                    children.append((c, c.child(pt, choice)))
            for _, ch in children:
                dep = depth1(ch.point)
                if not has_excellent(ch.point.t) and dep < m + 1:
                    rec.violation("depth-jump-A", ch, f"depth {dep} after step {m}")
            _check_adm(rec, [ch for _, ch in children], "t", "A")
            rec.step(log, m, centers, children)
            frontier = _dedupe(rest + [ch for _, ch in children])
        m += 1
    log.stats.update(steps=m - 1, max_depth=max_depth)
    return frontier


# round B

def _round_b_pending(s: BlowupState) -> bool:
    sec = s.point.t2
    return sec is not None and len(sec[0]) > 0 and not excellent_indices(sec[0])


def round_b(states: list[BlowupState], rec: _Recorder, budget: int, log: RoundLog, d: int) -> list[BlowupState]:
    """Walk the secondary depths in increasing order, each value once.

    A child whose depth does not exceed the value just processed is
    recorded and left in place; the schedule never returns to it."""
    frontier = list(states)
    last = None
    m = 0
    visited = []
    stuck = 0
    while True:
        pending = [s for s in frontier if _round_b_pending(s)]
        live = [s for s in pending if last is None or pi_b_key(depth2(s.point)) > pi_b_key(last)]
        if not live:
            stuck = len(pending)
            break
        _check_adm(rec, live, "t2", "B")
        alpha = min((depth2(s.point) for s in live), key=pi_b_key)
        if last is not None and pi_b_key(alpha) <= pi_b_key(last):
            raise OrderRegression(f"round B revisits {alpha} after {last}")
        m += 1
        if m > budget:
            raise StepBudgetExceeded(f"round B exceeded {budget} steps")
        visited.append(alpha)
        centers = [s for s in live if depth2(s.point) == alpha]
        ids = {c.id for c in centers}
        rest = [s for s in frontier if s.id not in ids]
        children = []
        fresh = Letter(Kind.EXC2, m)
        for c in centers:
            inis = initials(c.point.t2[0])
            for T in proper_subsets(inis):
                pt = substitute(c.point, inis, T, fresh)
                choice = BranchChoice("B", m, tuple(x.name for x in sorted(T)), fresh.name)
                children.append((c, c.child(pt, choice)))
        for _, ch in children:
            if _round_b_pending(ch) and pi_b_key(depth2(ch.point)) <= pi_b_key(alpha):
                rec.violation("order-B", ch, f"depth {depth2(ch.point)} after {alpha}")
        rec.step(log, m, centers, children, {"alpha": list(alpha), "in_pi_b": in_pi_b(alpha, d)})
        frontier = _dedupe(rest + [ch for _, ch in children])
        last = alpha
    log.stats.update(
        steps=m,
        alphas=[list(a) for a in visited],
        outside_pi_b=[list(a) for a in visited if not in_pi_b(a, d)],
        stuck=stuck,
    )
    return frontier


# round C

def _chi_free(p: DecoratedPoint, pair) -> tuple[bool, str]:
    """Whether chi may be 1 for the critical pair, and the vanishing reason."""
    info = [p.info[k[1]] for k in pair]
    if any(i.on_root for i in info):
        return False, ""
    if not p.one_root:
        last = len(p.core.root_vertices) - 1
        if info[0].root != info[1].root or info[0].root_pos not in (0, last):
            return False, ""
    tops = [path_to_core(p.graph, i.home)[0] for i in info]
    return True, ("WeierstrassChain" if tops[0] == tops[1] else "ConjugateChains")


def attach_lambda(p: DecoratedPoint) -> DecoratedPoint:
    """Install t'' with the lambda letter appended to the critical word.

    The signed words are left alone: lambda enters the structural matrix
    only through the determinant of the critical minor, which after the
    blowup is a unit times lambda."""
    k1, k2 = critical_pair(p)
    t = p.t
    if p.t2 is None:
        t3 = Vocabulary([(k, w) for k, w in t.items() if k not in (k1, k2)] + [(k1, t[k1] + (LAMBDA,))])
    else:
        t3 = t.replace(k2, t[k2] + (LAMBDA,)).without(k1)
    minors = tuple(m for m in p.minors if set(m.pair) != {k1[1], k2[1]})
    if k1[1] != k2[1]:
        minors += (MinorTag((k1[1], k2[1]), "unit_times", "", "L", (LAMBDA,)),)
    return p.with_changes(
        t3=t3,
        t3_letter=LAMBDA,
        registry=p.registry | {LAMBDA},
        flags=DegeneracyFlags(True, p.flags.hyperelliptic_core, p.flags.core_conjugate_pair),
        minors=minors,
    )


def pre_lambda(p: DecoratedPoint, reason: str) -> DecoratedPoint:
    """The chi = 1 critical point before the lambda blowup."""
    k1, k2 = critical_pair(p)
    minors = tuple(m for m in p.minors if set(m.pair) != {k1[1], k2[1]})
    if k1[1] != k2[1]:
        minors += (MinorTag((k1[1], k2[1]), "vanishes", reason),)
    return p.with_changes(
        flags=DegeneracyFlags(True, p.flags.hyperelliptic_core, p.flags.core_conjugate_pair), minors=minors
    )


def _flag_choices(policy: str, name: str) -> tuple[bool, ...]:
    if policy == "all":
        return (False, True)
    if policy == "none":
        return (False,)
    alias = {"hyperelliptic": "hyp", "hyperelliptic_core": "hyp"}
    settings = {}
    for part in policy.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            settings[alias.get(k.strip(), k.strip())] = v
    if name not in settings:
        return (False, True)
    return (settings[name].strip().lower() in ("1", "true", "yes"),)


def _third_round(states, rec: _Recorder, budget: int, log: RoundLog, letter: Letter, kind: Kind, label: str):
    """Inductive substitution driven by the initials of t'' while ``letter``
    is one of them, with centers at depth k for k = 1, 2, ... in turn.

    Depth 1 means ``letter`` is the only initial: the center is the divisor
    itself, which is renamed as the new exceptional divisor.  Such states
    are renamed whenever they occur; any other state whose depth falls
    below the current step is recorded and left in place."""
    frontier = list(states)

    def pending(s: BlowupState) -> bool:
        t3 = s.point.t3
        return s.point.t3_letter == letter and t3 is not None and len(t3) > 0 and letter in initials(t3)

    def depth(s: BlowupState) -> int:
        return len(initials(s.point.t3))

    k = 1
    late = 0
    while True:
        todo = [s for s in frontier if pending(s)]
        live = [s for s in todo if depth(s) >= k or depth(s) == 1]
        if not live:
            break
        if k > budget:
            raise StepBudgetExceeded(f"round {label} exceeded {budget} steps")
        _check_adm(rec, live, "t3", label)
        centers = [s for s in live if depth(s) in (k, 1)]
        if not centers:
            k += 1
            continue
        late += sum(1 for s in centers if depth(s) == 1 and k > 1)
        ids = {c.id for c in centers}
        rest = [s for s in frontier if s.id not in ids]
        fresh = Letter(kind, k)
        children = []
        for c in centers:
            inis = initials(c.point.t3)
            for T in proper_subsets(inis):
                pt = substitute(c.point, inis, T, fresh)
                choice = BranchChoice(label, k, tuple(x.name for x in sorted(T)), fresh.name)
                children.append((c, c.child(pt, choice)))
        for _, ch in children:
            if pending(ch) and 1 < depth(ch) <= k:
                rec.violation(f"depth-jump-{label}", ch, f"depth {depth(ch)} after step {k}")
        rec.step(log, k, centers, children, {"depth": k})
        frontier = _dedupe(rest + [ch for _, ch in children])
        k += 1
    log.stats.update(
        steps=k - 1,
        late_divisorial_steps=late,
        stuck=sum(1 for s in frontier if pending(s)),
    )
    return frontier


def round_c(states, rec: _Recorder, budget: int, log: RoundLog, policy: str = "all"):
    out = []
    branched = 0
    for s in states:
        p = s.point
        if not is_critical(p):
            out.append(s)
            continue
        pair = critical_pair(p)
        free, reason = _chi_free(p, pair)
        if not free:
            out.append(s.child(p.with_changes(flags=_set_chi(p.flags, False)), BranchChoice("C", 0, bit="chi=0*")))
            continue
        for bit in _flag_choices(policy, "chi"):
            if not bit:
                out.append(s.child(p.with_changes(flags=_set_chi(p.flags, False)), BranchChoice("C", 0, bit="chi=0")))
                continue
            branched += 1
            rec.captured.append(s.child(pre_lambda(p, reason), BranchChoice("C", 0, bit="chi=1,pre")))
            out.append(s.child(attach_lambda(p), BranchChoice("C", 0, bit="chi=1")))
    log.stats["chi_branches"] = branched
    return _third_round(_dedupe(out), rec, budget, log, LAMBDA, Kind.EXC3, "C")


def request_chi(p: DecoratedPoint) -> DecoratedPoint:
    """Attach lambda to a critical point, refusing forced-zero cases."""
    if not is_critical(p):
        raise FlagOnNonCritical("chi is defined only at critical points")
    free, _ = _chi_free(p, critical_pair(p))
    if not free:
        raise ChiOnForcedZero("chi is forced to 0 here")
    return attach_lambda(p)


def _set_chi(f: DegeneracyFlags, v: bool) -> DegeneracyFlags:
    return DegeneracyFlags(v, f.hyperelliptic_core, f.core_conjugate_pair)


# round D

def _hyper_free(p: DecoratedPoint, pair) -> bool:
    if p.one_root:
        return True
    a, b = (p.info[k[1]] for k in pair)
    return a.root == b.root


def attach_theta(p: DecoratedPoint) -> DecoratedPoint:
    t = p.t
    perf = perfect_indices(t)
    if not is_first_order_critical(p):
        raise FlagOnNonCritical("hyperelliptic flag needs a first-order critical point")
    drop, keep = perf[0], perf[1]
    t3 = t.without(drop).replace(keep, (THETA,))
    minors = tuple(m for m in p.minors if set(m.pair) != {drop[1], keep[1]})
    if drop[1] != keep[1]:
        minors += (MinorTag((drop[1], keep[1]), "unit_times", "", "T", (THETA,)),)
    return p.with_changes(
        t3=t3,
        t3_letter=THETA,
        registry=p.registry | {THETA},
        flags=DegeneracyFlags(p.flags.chi, True, p.flags.core_conjugate_pair),
        minors=minors,
    )


def pre_theta(p: DecoratedPoint) -> DecoratedPoint:
    perf = perfect_indices(p.t)
    pair = (perf[0][1], perf[1][1])
    minors = tuple(m for m in p.minors if set(m.pair) != set(pair))
    if pair[0] != pair[1]:
        minors += (MinorTag(pair, "vanishes", "Hyperelliptic"),)
    return p.with_changes(flags=DegeneracyFlags(p.flags.chi, True, p.flags.core_conjugate_pair), minors=minors)


def round_d(states, rec: _Recorder, budget: int, log: RoundLog, core_weight_2_only: bool = True, policy: str = "all"):
    out = []
    branched = 0
    for s in states:
        p = s.point
        if not is_first_order_critical(p) or (core_weight_2_only and core_weight(p) != 2):
            out.append(s)
            continue
        pair = perfect_indices(p.t)
        if not _hyper_free(p, pair):
            out.append(s.child(p.with_changes(flags=_set_hyp(p.flags, False)), BranchChoice("D", 0, bit="hyp=0*")))
            continue
        for bit in _flag_choices(policy, "hyp"):
            if not bit:
                out.append(s.child(p.with_changes(flags=_set_hyp(p.flags, False)), BranchChoice("D", 0, bit="hyp=0")))
                continue
            branched += 1
            rec.captured.append(s.child(pre_theta(p), BranchChoice("D", 0, bit="hyp=1,pre")))
            out.append(s.child(attach_theta(p), BranchChoice("D", 0, bit="hyp=1")))
    log.stats["hyperelliptic_branches"] = branched
    return _third_round(_dedupe(out), rec, budget, log, THETA, Kind.EXC4, "D")


def _set_hyp(f: DegeneracyFlags, v: bool) -> DegeneracyFlags:
    return DegeneracyFlags(f.chi, v, f.core_conjugate_pair)


# terminal propositions

def check_terminals(round_name: str, states, rec: _Recorder) -> None:
    for s in states:
        p = s.point
        t = p.t
        if round_name in "AB" and len(t) and not has_excellent(t):
            rec.violation(f"excellent-t-{round_name}", s, "t has no excellent word")
        if round_name == "B":
            sec = p.t2
            if sec is not None and len(sec[0]) and not has_excellent(sec[0]):
                rec.violation("excellent-t2-B", s, "t' has no excellent word")
        if round_name in "CD" and p.t3_letter is not None and p.t3 is not None and len(p.t3):
            want = LAMBDA if round_name == "C" else THETA
            if p.t3_letter == want and want in initials(p.t3):
                rec.violation(f"letter-initial-{round_name}", s, f"{want.name} is an initial of t''")


def run_all(g: WeightedDualGraph, options: RunOptions | None = None) -> TerminalForest:
    options = options or RunOptions()
    rec = _Recorder(options)
    budget = _budget(g, options)
    ground = BlowupState(ground_point(g))
    states = [ground]
    logs: list[RoundLog] = []
    pops: dict[str, list[BlowupState]] = {"ground": states}
    d = g.total_weight
    for name in options.rounds:
        log = RoundLog(name)
        if name == "A":
            states = round_a(states, rec, budget, log)
        elif name == "B":
            # secondary depths are pairs, so the step count is quadratic
            states = round_b(states, rec, budget * budget, log, d)
        elif name == "C":
            states = round_c(states, rec, budget, log, options.flags)
        elif name == "D":
            states = round_d(states, rec, budget, log, options.core_weight_2_only, options.flags)
        check_terminals(name, states, rec)
        log.stats["population"] = len(states)
        logs.append(log)
        pops[name] = states
    stats = {
        "weight": d,
        "terminals": len(states),
        "captured": len(rec.captured),
        "violations": len(rec.violations),
        "rounds": {log.name: log.stats for log in logs},
    }
    return TerminalForest(g, ground, logs, pops, states, _dedupe(rec.captured), rec.violations, stats)


def verify_assumptions(forest: TerminalForest) -> dict:
    counts: dict[str, int] = {}
    for v in forest.violations:
        counts[v.check] = counts.get(v.check, 0) + 1
    return {
        "ok": not forest.violations,
        "counts": dict(sorted(counts.items())),
        "failures": [{"check": v.check, "state": v.state, "detail": v.detail} for v in forest.violations],
    }


def describe_state(s: BlowupState) -> dict:
    p = s.point
    out = {
        "id": s.id,
        "history": [c.describe() for c in s.history],
        "s_minus": [format_word(w) for w in p.s_minus.words()],
        "s_plus": [format_word(w) for w in p.s_plus.words()],
        "t": repr(p.t) if len(p.t) else "{}",
        "flags": {
            "chi": p.flags.chi,
            "hyperelliptic_core": p.flags.hyperelliptic_core,
            "core_conjugate_pair": p.flags.core_conjugate_pair,
        },
    }
    if p.t2 is not None:
        out["t2"] = repr(p.t2[0])
    if p.t3 is not None:
        out["t3"] = repr(p.t3)
    return out
