"""Forward execution of a program as a nondeterministic dynamic system.

A state is a multiset of linear resources plus a set of persistent ones. A
rule fires by consuming distinct linear occurrences (persistent members may
be matched any number of times without being consumed) and producing its
instantiated right-hand side. Search explores the resulting transition graph
breadth-first, depth-first or by iterative deepening.
"""
from __future__ import annotations

import enum
import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .program import Program, Query, Rule
from .terms import (
    ARITH_FUNCTORS,
    Compound,
    NonGround,
    NotNumeric,
    Seq,
    State,
    Var,
    apply_subst,
    as_segment,
    canonical_key,
    contains_functor,
    eval_guard,
    instantiate,
    is_ground,
    match,
    sort_key,
    unifiers,
)

__all__ = [
    "GuardNotGround", "Match", "ReplayMismatch", "SearchConfig", "SearchResult",
    "Solution", "State", "Status", "Transition", "goal_match", "initial_state",
    "matches", "reachable_levels", "reachable_set", "replay", "solve", "step",
    "successors",
]


class GuardNotGround(Exception):
    pass


class ReplayMismatch(Exception):
    def __init__(self, index: int, reason: str):
        self.index = index
        super().__init__(f"step {index}: {reason}")


class Status(str, enum.Enum):
    SOLVED = "solved"
    DEPTH_EXHAUSTED = "depth_exhausted"
    PROVED_EXHAUSTED = "proved_exhausted"


@dataclass(frozen=True)
class Match:
    substitution: tuple  # sorted (name, term) pairs
    consumed: tuple  # canonical order

    @property
    def bindings(self) -> dict:
        return dict(self.substitution)


@dataclass(frozen=True)
class Transition:
    rule_id: int
    substitution: tuple
    consumed: tuple
    produced: tuple  # (ground resource, persistent) pairs

    @property
    def bindings(self) -> dict:
        return dict(self.substitution)


@dataclass(frozen=True)
class SearchConfig:
    strategy: str = "bfs"
    max_depth: int = 64
    max_solutions: int | None = 1  # None enumerates everything within the bound
    mode: str | None = None  # overrides Query.mode when set
    dedupe: bool = True
    # at the depth bound, only build children that could satisfy the query
    prune_leaves: bool = True

    def __post_init__(self):
        if self.strategy not in ("bfs", "dfs", "iddfs"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be positive")
        if self.mode not in (None, "partial", "exhaustive"):
            raise ValueError(f"unknown match mode {self.mode!r}")


@dataclass(frozen=True)
class Solution:
    answer: tuple  # (name, term) pairs, query variables only, in query order
    trace: tuple
    state: State

    @property
    def depth(self) -> int:
        return len(self.trace)

    @property
    def bindings(self) -> dict:
        return dict(self.answer)


@dataclass
class SearchResult:
    status: Status
    solutions: list = field(default_factory=list)
    states_expanded: int = 0
    transitions_fired: int = 0


def initial_state(program: Program) -> State:
    return State.of([f.term for f in program.initial if not f.persistent],
                    [f.term for f in program.initial if f.persistent])


# -- matching -----------------------------------------------------------------

def _assign(patterns, st: State, s: dict, require_all: bool = False):
    """Injectively map patterns to linear occurrences or persistent members.

    Yields (substitution, consumed resources, slot per pattern); persistent
    slots are numbered after the linear ones. Equal linear occurrences are
    interchangeable, so only the first unused copy of each value is tried.
    """
    linear = st.linear
    used = [False] * len(linear)
    offset = len(linear)
    several = offset > 1

    def go(k, s, consumed, slots):
        if k == len(patterns):
            if not require_all or all(used):
                yield s, consumed, slots
            return
        pat = patterns[k]
        tried = set()
        for idx, res in enumerate(linear):
            if used[idx]:
                continue
            if several:
                if res in tried:
                    continue
                tried.add(res)
            for s2 in match(pat, res, s):
                used[idx] = True
                yield from go(k + 1, s2, consumed + (res,), slots + (idx,))
                used[idx] = False
        for idx, res in enumerate(st.persistent):
            for s2 in match(pat, res, s):
                yield from go(k + 1, s2, consumed, slots + (offset + idx,))

    yield from go(0, s, (), ())


def _guards_hold(rule: Rule, s: dict) -> bool:
    for g in rule.guards:
        try:
            if not eval_guard(instantiate(g, s)):
                return False
        except NonGround as exc:
            raise GuardNotGround(f"rule#{rule.id}: {exc}") from exc
        except NotNumeric:
            # a symbol where a number is compared: the law does not apply
            return False
    return True


def _make_match(s: dict, consumed: tuple) -> Match:
    if len(consumed) > 1:
        consumed = tuple(sorted(consumed, key=sort_key))
    return Match(tuple(sorted(s.items())), consumed)


def matches(st: State, rule: Rule) -> Iterator[Match]:
    # the same match can only recur when a value is both linear and persistent
    seen = set() if st.persistent else None
    for s, consumed, _ in _assign(rule.consumed, st, {}):
        if not _guards_hold(rule, s):
            continue
        m = _make_match(s, consumed)
        if seen is not None:
            if m in seen:
                continue
            seen.add(m)
        yield m


@functools.lru_cache(maxsize=None)
def _branching_segments(rule: Rule) -> tuple:
    """Per consumed pattern, the segment variables it binds, in binding order."""
    seen: set[str] = set()
    out = []

    def walk(t, acc):
        if isinstance(t, Var):
            seen.add(t.name)
        elif isinstance(t, Compound):
            for a in t.args:
                walk(a, acc)
        elif isinstance(t, Seq):
            for item in t.items:
                if isinstance(item, Var) and item.name not in seen:
                    seen.add(item.name)
                    acc.append(item.name)

    for pat in rule.consumed:
        acc: list[str] = []
        walk(pat, acc)
        out.append(tuple(acc))
    return tuple(out)


def _seeded_matches(st: State, rule: Rule, seeds) -> list[Match]:
    """Matches extending any of ``seeds``, in the order :func:`matches` would give them.

    The unseeded enumeration is lexicographic in (slot, segment lengths) per
    pattern, so that tuple recovers each match's position.
    """
    segvars = _branching_segments(rule)
    best: dict = {}
    resources = None
    for seed, required in seeds:
        if required:
            # the seed fixes these consumed resources outright; cheap rejection
            if resources is None:
                resources = set(st.linear).union(st.persistent)
            if not all(r in resources for r in required):
                continue
        for s, consumed, slots in _assign(rule.consumed, st, dict(seed)):
            if not _guards_hold(rule, s):
                continue
            key = tuple((slot, tuple(len(as_segment(s[v])) for v in names))
                        for slot, names in zip(slots, segvars))
            m = _make_match(s, consumed)
            if m not in best or key < best[m]:
                best[m] = key
    return sorted(best, key=best.__getitem__)


def step(st: State, rule: Rule, m: Match) -> tuple[State, Transition]:
    s = dict(m.substitution)
    produced = tuple((instantiate(pat, s), persistent) for pat, persistent in rule.produced)
    linear = list(st.linear)
    for res in m.consumed:
        linear.remove(res)
    linear.extend(t for t, persistent in produced if not persistent)
    new_persistent = [t for t, persistent in produced if persistent]
    if len(linear) > 1:
        linear.sort(key=sort_key)
    persistent = st.persistent
    if new_persistent:
        persistent = tuple(sorted(set(persistent).union(new_persistent), key=sort_key))
    return State(tuple(linear), persistent), Transition(rule.id, m.substitution, m.consumed, produced)


def successors(program: Program, st: State) -> Iterator[tuple[State, Transition]]:
    for rule in program.rules:
        for m in matches(st, rule):
            yield step(st, rule, m)


def _has_successor(program: Program, st: State) -> bool:
    return any(True for rule in program.rules for _ in matches(st, rule))


def goal_match(st: State, query: Query, mode: str | None = None) -> Iterator[tuple]:
    """Answers (query-variable bindings, in query order) under which the goals hold."""
    mode = mode or query.mode
    names = query.variables
    seen = set()
    for s, _, _ in _assign(query.goals, st, {}, require_all=(mode == "exhaustive")):
        answer = tuple((n, s[n]) for n in names)
        if answer not in seen:
            seen.add(answer)
            yield answer


# -- search -------------------------------------------------------------------

class _Node:
    __slots__ = ("state", "depth", "parent", "transition")

    def __init__(self, state, depth=0, parent=None, transition=None):
        self.state = state
        self.depth = depth
        self.parent = parent
        self.transition = transition

    def trace(self) -> tuple:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.transition)
            node = node.parent
        return tuple(reversed(out))


class _Search:
    def __init__(self, program: Program, query: Query, cfg: SearchConfig):
        self.program = program
        self.query = query
        self.cfg = cfg
        self.mode = cfg.mode or query.mode
        self.result = SearchResult(Status.PROVED_EXHAUSTED)
        self.emitted: set = set()
        self.truncated = False
        self._seeds: dict = {}
        # query variables are renamed apart from rule variables before unifying
        self._renamed_goals = [_rename(g, "?") for g in query.goals]

    @property
    def done(self) -> bool:
        limit = self.cfg.max_solutions
        return limit is not None and len(self.result.solutions) >= limit

    def check_goal(self, node: _Node, only_new_depth: int | None = None) -> None:
        for answer in goal_match(node.state, self.query, self.mode):
            if self.cfg.dedupe:
                key = (node.state, answer)
                if key in self.emitted:
                    continue
                self.emitted.add(key)
            elif only_new_depth is not None and node.depth != only_new_depth:
                continue
            self.result.solutions.append(Solution(answer, node.trace(), node.state))
            if self.done:
                return

    def note_frontier(self, st: State) -> None:
        if not self.truncated and _has_successor(self.program, st):
            self.truncated = True

    def seeds(self, rule: Rule, goal_index: int):
        """Bindings any child of ``rule`` must extend to satisfy the goal, or None if unknown."""
        key = (rule.id, goal_index)
        if key not in self._seeds:
            self._seeds[key] = _goal_seeds(rule, self._renamed_goals[goal_index])
        return self._seeds[key]

    def leaf_children(self, node: _Node) -> list[_Node]:
        """Children at the depth bound, omitting those that cannot satisfy the query.

        If some goal matches nothing in the parent, a satisfying child must get
        it from a produced resource; unifying each produced pattern with that
        goal yields seed bindings that restrict the rule matches to try.
        """
        st = node.state
        if not self.cfg.prune_leaves:
            return self.children(node)
        resources = st.linear + st.persistent
        fresh = [k for k, g in enumerate(self.query.goals)
                 if not any(next(match(g, r, {}), None) is not None for r in resources)]
        if not fresh:
            return self.children(node)
        self.result.states_expanded += 1
        out = []
        for rule in self.program.rules:
            seeds = self.seeds(rule, fresh[0])
            found = matches(st, rule) if seeds is None else _seeded_matches(st, rule, seeds)
            for m in found:
                child, tr = step(st, rule, m)
                self.result.transitions_fired += 1
                out.append(_Node(child, node.depth + 1, node, tr))
        if not self.truncated:
            # pruned children still count towards "the bound cut the search"
            for child, _tr in successors(self.program, st):
                self.note_frontier(child)
                if self.truncated:
                    break
        return out

    def children(self, node: _Node) -> list[_Node]:
        self.result.states_expanded += 1
        out = []
        for child, tr in successors(self.program, node.state):
            self.result.transitions_fired += 1
            out.append(_Node(child, node.depth + 1, node, tr))
        return out

    def bfs(self) -> None:
        max_depth = self.cfg.max_depth
        expanded: set = set()
        level = [_Node(initial_state(self.program))]
        for depth in range(max_depth + 1):
            current = []
            for node in level:
                if self.cfg.dedupe:
                    if node.state in expanded:
                        continue
                    expanded.add(node.state)
                current.append(node)
                self.check_goal(node)
                if self.done:
                    return
            if depth == max_depth:
                for node in current:
                    self.note_frontier(node.state)
                return
            if depth + 1 == max_depth:
                # the last level is goal-checked as it is generated and never stored
                for node in current:
                    for child in self.leaf_children(node):
                        if self.cfg.dedupe and child.state in expanded:
                            continue
                        self.check_goal(child)
                        if self.done:
                            return
                        self.note_frontier(child.state)
                return
            level = [child for node in current for child in self.children(node)]
            if not level:
                return

    def dfs(self, bound: int, new_depth: int | None = None) -> None:
        best: dict = {}
        stack = [_Node(initial_state(self.program))]
        while stack:
            node = stack.pop()
            if self.cfg.dedupe:
                prev = best.get(node.state)
                if prev is not None and prev <= node.depth:
                    continue
                best[node.state] = node.depth
            self.check_goal(node, new_depth)
            if self.done:
                return
            if node.depth == bound:
                self.note_frontier(node.state)
                continue
            if node.depth + 1 == bound:
                kids = self.leaf_children(node)
                # leaves are handled in place, in the order they would be popped
                for child in kids:
                    if self.cfg.dedupe:
                        prev = best.get(child.state)
                        if prev is not None and prev <= child.depth:
                            continue
                    self.check_goal(child, new_depth)
                    if self.done:
                        return
                    self.note_frontier(child.state)
                continue
            stack.extend(reversed(self.children(node)))

    def iddfs(self) -> None:
        for bound in range(self.cfg.max_depth + 1):
            self.truncated = False
            self.dfs(bound, new_depth=bound)
            if self.done or not self.truncated:
                return

    def run(self) -> SearchResult:
        if self.cfg.strategy == "bfs":
            self.bfs()
        elif self.cfg.strategy == "dfs":
            self.dfs(self.cfg.max_depth)
        else:
            self.iddfs()
        if self.result.solutions:
            self.result.status = Status.SOLVED
        elif self.truncated:
            self.result.status = Status.DEPTH_EXHAUSTED
        return self.result


def _rename(t, prefix: str):
    if isinstance(t, Var):
        return Var(prefix + t.name)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_rename(a, prefix) for a in t.args))
    if isinstance(t, Seq) and not t.ground:
        return Seq(tuple(Var(prefix + i.name) if isinstance(i, Var) else i for i in t.items))
    return t


def _seq_vars(t) -> set[str]:
    if isinstance(t, Compound):
        return set().union(*(_seq_vars(a) for a in t.args))
    if isinstance(t, Seq):
        return {i.name for i in t.items if isinstance(i, Var)}
    return set()


def _plain_vars(t) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Compound):
        return set().union(*(_plain_vars(a) for a in t.args))
    return set()


def _goal_seeds(rule: Rule, goal) -> list | None:
    """Ground bindings of rule variables forced by some produced pattern matching ``goal``.

    Each seed comes with the consumed patterns it makes ground, which must be
    present for any match to exist. Returns None when a produced pattern cannot be analysed (arithmetic, or
    sequences with variables on both sides), meaning every match must be tried.
    """
    seeds: list = []
    patterns = rule.consumed + tuple(p for p, _ in rule.produced)
    in_seq = set().union(*(_seq_vars(p) for p in patterns))
    plain = set().union(*(_plain_vars(p) for p in patterns))
    mixed = in_seq & plain

    def usable(v, t):
        if v.startswith("?") or not is_ground(t):
            return False
        # a one-symbol segment and the bare symbol splice alike but compare unequal
        ambiguous = type(t) is str or (isinstance(t, Seq) and len(t.items) == 1)
        return not (ambiguous and v in mixed)

    for pat, _persistent in rule.produced:
        if contains_functor(pat, ARITH_FUNCTORS):
            return None
        try:
            for theta in unifiers(pat, goal):
                seed = tuple(sorted((v, t) for v, t in theta.items() if usable(v, t)))
                if not seed:
                    return None
                if seed not in seeds:
                    seeds.append(seed)
        except ValueError:
            return None
    out = []
    for seed in seeds:
        instances = [apply_subst(p, dict(seed)) for p in rule.consumed]
        out.append((seed, tuple(t for t in instances if is_ground(t))))
    return out


def solve(program: Program, query: Query, cfg: SearchConfig | None = None) -> SearchResult:
    return _Search(program, query, cfg or SearchConfig()).run()


# -- replay and reachability ----------------------------------------------------

def replay(program: Program, trace) -> State:
    st = initial_state(program)
    for k, tr in enumerate(trace):
        if not 1 <= tr.rule_id <= len(program.rules):
            raise ReplayMismatch(k, f"no rule#{tr.rule_id}")
        rule = program.rules[tr.rule_id - 1]
        if Counter(tr.consumed) - Counter(st.linear):
            raise ReplayMismatch(k, "consumed resources are not in the state")
        for m in matches(st, rule):
            if m.substitution == tr.substitution and m.consumed == tr.consumed:
                st, redone = step(st, rule, m)
                if redone.produced != tr.produced:
                    raise ReplayMismatch(k, "produced resources differ")
                break
        else:
            raise ReplayMismatch(k, f"rule#{tr.rule_id} does not apply with the recorded match")
    return st


def reachable_levels(program: Program, depth: int) -> list[list[State]]:
    """States grouped by the depth at which BFS first reaches them."""
    start = initial_state(program)
    seen = {start}
    levels = [[start]]
    for _ in range(depth):
        nxt = []
        for st in levels[-1]:
            for child, _tr in successors(program, st):
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        if not nxt:
            break
        levels.append(nxt)
    return levels


def reachable_set(program: Program, depth: int, dedupe: bool = True) -> set:
    if dedupe:
        return {canonical_key(st) for level in reachable_levels(program, depth) for st in level}
    frontier = [initial_state(program)]
    out = {canonical_key(frontier[0])}
    for _ in range(depth):
        frontier = [child for st in frontier for child, _tr in successors(program, st)]
        out.update(canonical_key(st) for st in frontier)
    return out

