"""Parametric timed automata with exact rational semantics.

Guards compare a single clock against a natural constant or a parameter.
A parameter valuation fixes the semantics; membership of a timed word is
decided by simulating the set of reachable global states along the word,
tracking each clock by its last reset time (a finite canonical
representation along a fixed word).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Union

from .errors import EnumerationLimitError
from .timedwords import TimedWord, rat

Bound = Union[int, str]  # a natural constant or a parameter name

_RELATIONS = ("<", "<=", "=", ">=", ">")


def _compare(value: Fraction, relation: str, bound: Fraction) -> bool:
    if relation == "<":
        return value < bound
    if relation == "<=":
        return value <= bound
    if relation == "=":
        return value == bound
    if relation == ">=":
        return value >= bound
    if relation == ">":
        return value > bound
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class ConstraintAtom:
    """A single comparison ``clock ~ bound``."""

    clock: str
    relation: str
    bound: Bound

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if isinstance(self.bound, int) and self.bound < 0:
            raise ValueError("constant bounds must be natural numbers")


@dataclass(frozen=True)
class ClockConstraint:
    """A conjunction of comparisons; the empty conjunction is true."""

    atoms: tuple[ConstraintAtom, ...] = ()

    @classmethod
    def of(cls, *triples: tuple[str, str, Bound]) -> "ClockConstraint":
        return cls(tuple(ConstraintAtom(c, r, b) for c, r, b in triples))

    def clocks(self) -> frozenset[str]:
        return frozenset(a.clock for a in self.atoms)

    def parameters(self) -> frozenset[str]:
        return frozenset(a.bound for a in self.atoms if isinstance(a.bound, str))


TRUE_GUARD = ClockConstraint()


@dataclass(frozen=True)
class Edge:
    source: str
    symbol: str
    guard: ClockConstraint
    resets: frozenset[str]
    target: str


@dataclass(frozen=True)
class Pta:
    """A parametric timed automaton."""

    alphabet: tuple[str, ...]
    locations: tuple[str, ...]
    initial: frozenset[str]
    clocks: tuple[str, ...]
    parameters: tuple[str, ...]
    edges: tuple[Edge, ...]
    final: frozenset[str]

    def __post_init__(self):
        locations = set(self.locations)
        alphabet = set(self.alphabet)
        clocks = set(self.clocks)
        parameters = set(self.parameters)
        if not self.initial <= locations:
            raise ValueError("initial locations must be declared locations")
        if not self.final <= locations:
            raise ValueError("final locations must be declared locations")
        for edge in self.edges:
            if edge.source not in locations or edge.target not in locations:
                raise ValueError(f"edge endpoints undeclared: {edge}")
            if edge.symbol not in alphabet:
                raise ValueError(f"edge symbol undeclared: {edge}")
            if not edge.resets <= clocks:
                raise ValueError(f"edge resets undeclared clocks: {edge}")
            for atom in edge.guard.atoms:
                if atom.clock not in clocks:
                    raise ValueError(f"guard uses undeclared clock {atom.clock!r}")
                if isinstance(atom.bound, str) and atom.bound not in parameters:
                    raise ValueError(f"guard uses undeclared parameter {atom.bound!r}")

    def edges_from(self, location: str, symbol: str) -> tuple[Edge, ...]:
        return tuple(
            e for e in self.edges if e.source == location and e.symbol == symbol
        )


@dataclass(frozen=True)
class GlobalState:
    """A location together with a clock valuation (clock name, value) pairs,
    sorted by clock name."""

    location: str
    valuation: tuple[tuple[str, Fraction], ...]

    @classmethod
    def make(cls, location: str, values: Mapping[str, Fraction]) -> "GlobalState":
        return cls(location, tuple(sorted((c, rat(v)) for c, v in values.items())))

    def value(self, clock: str) -> Fraction:
        for name, v in self.valuation:
            if name == clock:
                return v
        raise KeyError(clock)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.valuation)


@dataclass(frozen=True)
class PtaRun:
    """A run: an initial global state plus (symbol, delay, successor) steps."""

    initial: GlobalState
    steps: tuple[tuple[str, Fraction, GlobalState], ...] = ()

    def __post_init__(self):
        for _, delay, _ in self.steps:
            if delay < 0:
                raise ValueError("delays must be non-negative")


def constraint_sat(
    valuation: Mapping[str, Fraction],
    parameters: Mapping[str, Fraction],
    constraint: ClockConstraint,
) -> bool:
    """Whether the clock and parameter valuations satisfy the constraint.

    Raises KeyError when the constraint mentions an undeclared clock or
    parameter.
    """
    for atom in constraint.atoms:
        if atom.clock not in valuation:
            raise KeyError(f"undeclared clock {atom.clock!r}")
        value = valuation[atom.clock]
        if isinstance(atom.bound, str):
            if atom.bound not in parameters:
                raise KeyError(f"undeclared parameter {atom.bound!r}")
            bound = parameters[atom.bound]
        else:
            bound = Fraction(atom.bound)
        if not _compare(value, atom.relation, bound):
            return False
    return True


def step(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    state: GlobalState,
    event: tuple[str, Fraction],
) -> frozenset[GlobalState]:
    """All successor global states on (symbol, delay); empty when no edge fires."""
    symbol, delay = event[0], rat(event[1])
    if delay < 0:
        raise ValueError("delay must be non-negative")
    elapsed = {clock: value + delay for clock, value in state.valuation}
    successors = set()
    for edge in automaton.edges_from(state.location, symbol):
        if constraint_sat(elapsed, parameters, edge.guard):
            after = {
                clock: (Fraction(0) if clock in edge.resets else value)
                for clock, value in elapsed.items()
            }
            successors.add(GlobalState.make(edge.target, after))
    return frozenset(successors)


def run_word(run: PtaRun) -> TimedWord:
    """The timed word associated with a run: timestamps are prefix sums of delays."""
    if not run.steps:
        raise ValueError("a run with no steps has no associated timed word")
    events = []
    clock = Fraction(0)
    for symbol, delay, _ in run.steps:
        clock += delay
        events.append((symbol, clock))
    return TimedWord(events)


def initial_states(automaton: Pta) -> frozenset[GlobalState]:
    zero = {clock: Fraction(0) for clock in automaton.clocks}
    return frozenset(GlobalState.make(loc, zero) for loc in sorted(automaton.initial))


# Frontier states during word simulation: (location, per-clock last reset time).
_Frontier = frozenset


def _frontier_successors(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    frontier: frozenset[tuple[str, tuple[Fraction, ...]]],
    symbol: str,
    now: Fraction,
) -> frozenset[tuple[str, tuple[Fraction, ...]]]:
    clocks = automaton.clocks
    found = set()
    for location, resets in frontier:
        values = {clock: now - reset_at for clock, reset_at in zip(clocks, resets)}
        for edge in automaton.edges_from(location, symbol):
            if constraint_sat(values, parameters, edge.guard):
                updated = tuple(
                    now if clock in edge.resets else reset_at
                    for clock, reset_at in zip(clocks, resets)
                )
                found.add((edge.target, updated))
    return frozenset(found)


def membership_trace(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    word: TimedWord,
) -> list[frozenset[tuple[str, tuple[Fraction, ...]]]]:
    """Reachable-state frontiers after each event of the word.

    Entry 0 is the initial frontier (all clocks reset at time 0); entry i is
    the frontier after the i-th event.
    """
    for symbol in word.symbols:
        if symbol not in automaton.alphabet:
            raise ValueError(f"symbol {symbol!r} not in the automaton's alphabet")
    zero = tuple(Fraction(0) for _ in automaton.clocks)
    frontier = frozenset((loc, zero) for loc in automaton.initial)
    trace = [frontier]
    for symbol, time in word:
        frontier = _frontier_successors(automaton, parameters, frontier, symbol, time)
        trace.append(frontier)
        if not frontier:
            break
    return trace


def membership(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    word: TimedWord,
) -> bool:
    """Whether some successful run of the automaton is associated with the word."""
    trace = membership_trace(automaton, parameters, word)
    if len(trace) != len(word) + 1:
        return False
    return any(location in automaton.final for location, _ in trace[-1])


def constraint_feasible(constraint: ClockConstraint) -> bool:
    """Whether some non-negative clock/parameter valuation satisfies the constraint.

    Decided exactly as a difference-constraint system over the variables
    (clocks, parameters, and a zero node) with strict/non-strict bookkeeping:
    the system is infeasible iff the constraint graph has a cycle of total
    weight below zero, or exactly zero containing a strict edge.  Strictness
    is folded into the weights lexicographically (each strict edge costs an
    infinitesimal), so both cycle kinds keep the Bellman-Ford relaxation
    running and are caught by the standard still-relaxable test.  Guards
    define rational polyhedra, so feasibility over the rationals coincides
    with feasibility over the reals.
    """
    ZERO = object()
    nodes: set = {ZERO}
    # an edge (u, v, c, strict) encodes  v - u <= c  (or < c when strict)
    edges: list[tuple[object, object, Fraction, bool]] = []

    def add(u, v, c: int | Fraction, strict: bool):
        edges.append((u, v, Fraction(c), strict))

    # variables are unified by name: the same identifier on the clock side
    # and the bound side denotes one variable
    for atom in constraint.atoms:
        x = atom.clock
        nodes.add(x)
        if isinstance(atom.bound, str):
            p = atom.bound
            nodes.add(p)
            rel = atom.relation
            if rel in ("<", "<="):
                add(p, x, 0, rel == "<")  # x - p <= 0
            elif rel in (">", ">="):
                add(x, p, 0, rel == ">")  # p - x <= 0
            else:
                add(p, x, 0, False)
                add(x, p, 0, False)
        else:
            c = atom.bound
            rel = atom.relation
            if rel in ("<", "<="):
                add(ZERO, x, c, rel == "<")  # x - 0 <= c
            elif rel in (">", ">="):
                add(x, ZERO, -c, rel == ">")  # 0 - x <= -c
            else:
                add(ZERO, x, c, False)
                add(x, ZERO, -c, False)
    for node in nodes:
        if node is not ZERO:
            add(node, ZERO, 0, False)  # non-negativity: 0 - v <= 0

    # Bellman-Ford from an implicit super-source; a strict edge contributes
    # (c, -1), a non-strict one (c, 0), compared lexicographically.
    dist: dict = {node: (Fraction(0), 0) for node in nodes}
    weighted = [(u, v, (c, -1 if strict else 0)) for u, v, c, strict in edges]

    for _ in range(len(nodes)):
        changed = False
        for u, v, (c, eps) in weighted:
            du = dist[u]
            candidate = (du[0] + c, du[1] + eps)
            if candidate < dist[v]:
                dist[v] = candidate
                changed = True
        if not changed:
            return True
    for u, v, (c, eps) in weighted:
        du = dist[u]
        if (du[0] + c, du[1] + eps) < dist[v]:
            return False  # still relaxable: negative (or zero-strict) cycle
    return True


def conjoin(first: ClockConstraint, second: ClockConstraint) -> ClockConstraint:
    return ClockConstraint(first.atoms + second.atoms)


def is_deterministic(automaton: Pta) -> bool:
    """Single initial location, and no two same-source same-label edges with
    jointly satisfiable guards under any valuation."""
    if len(automaton.initial) != 1:
        return False
    edges = automaton.edges
    for i, first in enumerate(edges):
        for second in edges[i + 1 :]:
            if first.source == second.source and first.symbol == second.symbol:
                if constraint_feasible(conjoin(first.guard, second.guard)):
                    return False
    return True


def _min_events_to_final(automaton: Pta) -> dict[str, int]:
    """Lower bound on events needed to reach a final location, ignoring guards.

    Safe for pruning: ignoring guards can only underestimate.
    """
    INF = len(automaton.locations) + 1
    bound = {loc: (0 if loc in automaton.final else INF) for loc in automaton.locations}
    queue = deque(sorted(automaton.final))
    while queue:
        location = queue.popleft()
        for edge in automaton.edges:
            if edge.target == location and bound[edge.source] > bound[location] + 1:
                bound[edge.source] = bound[location] + 1
                queue.append(edge.source)
    return bound


def iter_accepted(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    grid: Fraction,
    horizon: Fraction,
    max_events: int,
    strict: bool = False,
    prefix_filter=None,
) -> Iterator[TimedWord]:
    """Lazily yield every accepted word with timestamps on multiples of ``grid``,
    at most ``max_events`` events, all timestamps at most ``horizon``.

    Deterministic depth-first order: events are extended by (time, symbol)
    ascending.  With ``strict`` the search is limited to strictly monotonic
    words (repeated timestamps are skipped).  ``prefix_filter``, when given,
    is called on every candidate prefix (a TimedWord); returning False skips
    the prefix and its whole subtree, so the filter must only reject prefixes
    whose extensions are all irrelevant to the caller.
    """
    grid = rat(grid)
    horizon = rat(horizon)
    if grid <= 0:
        raise ValueError("grid must be positive")
    if max_events < 1:
        return
    symbols = sorted(automaton.alphabet)
    min_left = _min_events_to_final(automaton)
    finals = automaton.final
    zero = tuple(Fraction(0) for _ in automaton.clocks)
    start = frozenset((loc, zero) for loc in automaton.initial)
    by_key: dict[tuple[str, str], list[Edge]] = {}
    for edge in automaton.edges:
        by_key.setdefault((edge.source, edge.symbol), []).append(edge)

    ticks = []
    t = Fraction(0)
    while t <= horizon:
        ticks.append(t)
        t += grid

    clocks = automaton.clocks

    def successors(frontier, symbol, now):
        found = set()
        for location, resets in frontier:
            edges = by_key.get((location, symbol))
            if not edges:
                continue
            values = {clock: now - reset_at for clock, reset_at in zip(clocks, resets)}
            for edge in edges:
                if constraint_sat(values, parameters, edge.guard):
                    found.add(
                        (
                            edge.target,
                            tuple(
                                now if clock in edge.resets else reset_at
                                for clock, reset_at in zip(clocks, resets)
                            ),
                        )
                    )
        return found

    def recurse(events: list, frontier, last_time: Fraction | None):
        if events and any(loc in finals for loc, _ in frontier):
            yield TimedWord(list(events))
        if len(events) == max_events:
            return
        remaining = max_events - len(events)
        for time in ticks:
            if last_time is not None:
                if strict and time <= last_time:
                    continue
                if time < last_time:
                    continue
            for symbol in symbols:
                nxt = successors(frontier, symbol, time)
                if not nxt:
                    continue
                if min(min_left[loc] for loc, _ in nxt) > remaining - 1 and not any(
                    loc in finals for loc, _ in nxt
                ):
                    continue
                events.append((symbol, time))
                if prefix_filter is None or prefix_filter(TimedWord(list(events))):
                    yield from recurse(events, nxt, time)
                events.pop()

    yield from recurse([], start, None)


def enumerate_accepted(
    automaton: Pta,
    parameters: Mapping[str, Fraction],
    grid: Fraction,
    horizon: Fraction,
    max_events: int,
    strict: bool = False,
    max_words: Optional[int] = None,
) -> frozenset[TimedWord]:
    """Exhaustively collect the accepted words within the given bounds.

    Raises EnumerationLimitError (carrying the partial result) when more than
    ``max_words`` accepted words are found.
    """
    found: set[TimedWord] = set()
    for word in iter_accepted(automaton, parameters, grid, horizon, max_events, strict):
        found.add(word)
        if max_words is not None and len(found) > max_words:
            raise EnumerationLimitError(
                f"more than {max_words} accepted words within bounds",
                partial=frozenset(found),
                nodes=len(found),
            )
    return frozenset(found)
