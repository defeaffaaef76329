"""Channel machines: finite control over an unbounded fifo channel.

Labels are ``m!`` (append m to the tail), ``m?`` (consume m from the head),
and ``eps`` (test the channel for emptiness).  Besides the exact step
relation there is a faulty superset in which extra messages may appear on
the channel around a step (insertion errors).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ComputationValidationError

EPS = "eps"


def send_label(message: str) -> str:
    return message + "!"


def recv_label(message: str) -> str:
    return message + "?"


def label_kind(label: str) -> tuple[str, Optional[str]]:
    """Classify a label as ('send', m), ('recv', m), or ('empty', None)."""
    if label == EPS:
        return ("empty", None)
    if label.endswith("!"):
        return ("send", label[:-1])
    if label.endswith("?"):
        return ("recv", label[:-1])
    raise ValueError(f"malformed label {label!r}")


@dataclass(frozen=True)
class ChannelMachine:
    states: tuple[str, ...]
    initial: str
    messages: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states:
            raise ValueError("initial state must be a declared state")
        # encodings classify events by symbol, so names must keep the symbol
        # classes apart
        names = list(self.states) + list(self.messages)
        if len(set(names)) != len(names):
            raise ValueError("state and message names must be distinct")
        for name in names:
            if name in ("#", "*", EPS) or name.endswith(("!", "?")):
                raise ValueError(f"name {name!r} collides with a reserved spelling")
        valid = self.labels()
        for source, label, target in self.transitions:
            if source not in states or target not in states:
                raise ValueError(f"transition endpoints undeclared: {(source, label, target)}")
            if label not in valid:
                raise ValueError(f"transition label undeclared: {label!r}")

    def labels(self) -> tuple[str, ...]:
        out = []
        for m in self.messages:
            out.append(send_label(m))
            out.append(recv_label(m))
        out.append(EPS)
        return tuple(out)


@dataclass(frozen=True)
class Configuration:
    state: str
    channel: tuple[str, ...] = ()


@dataclass(frozen=True)
class Computation:
    """An initial configuration followed by labelled steps."""

    initial: Configuration
    steps: tuple[tuple[str, Configuration], ...] = ()

    @property
    def configurations(self) -> tuple[Configuration, ...]:
        return (self.initial,) + tuple(c for _, c in self.steps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.steps)

    @property
    def final(self) -> Configuration:
        return self.steps[-1][1] if self.steps else self.initial


def subword(shorter: Sequence[str], longer: Sequence[str]) -> bool:
    """Whether ``shorter`` embeds into ``longer`` by a strictly increasing
    symbol-preserving index map."""
    position = 0
    for symbol in shorter:
        while position < len(longer) and longer[position] != symbol:
            position += 1
        if position == len(longer):
            return False
        position += 1
    return True


def step_exact(
    machine: ChannelMachine, config: Configuration, label: str
) -> frozenset[Configuration]:
    """Successors under the exact step relation; empty when nothing applies."""
    kind, message = label_kind(label)
    found = set()
    for source, lab, target in machine.transitions:
        if source != config.state or lab != label:
            continue
        if kind == "send":
            found.add(Configuration(target, config.channel + (message,)))
        elif kind == "recv":
            if config.channel and config.channel[0] == message:
                found.add(Configuration(target, config.channel[1:]))
        else:  # empty test
            if config.channel == ():
                found.add(Configuration(target, ()))
    return frozenset(found)


def step_insertion(
    machine: ChannelMachine,
    before: Configuration,
    label: str,
    after: Configuration,
) -> bool:
    """Whether (before, label, after) is a step of the faulty relation.

    Uses closed forms equivalent to the existential definition (some exact
    step between a superword of ``before`` and a subword of ``after``):

      send m:  before.channel + m  embeds into  after.channel
      recv m:  before.channel      embeds into  m + after.channel
      empty:   before.channel is empty (after unconstrained)

    The equivalence is checked against a brute-force oracle in the test
    suite.
    """
    kind, message = label_kind(label)
    if not any(
        source == before.state and lab == label and target == after.state
        for source, lab, target in machine.transitions
    ):
        return False
    if kind == "send":
        return subword(before.channel + (message,), after.channel)
    if kind == "recv":
        return subword(before.channel, (message,) + after.channel)
    return before.channel == ()


def is_valid_computation(machine: ChannelMachine, computation: Computation) -> bool:
    """Every step lies in the faulty step relation."""
    current = computation.initial
    for label, nxt in computation.steps:
        if not step_insertion(machine, current, label, nxt):
            return False
        current = nxt
    return True


def is_error_free(machine: ChannelMachine, computation: Computation) -> bool:
    """Whether every step is exact.  Raises on invalid computations."""
    if not is_valid_computation(machine, computation):
        raise ComputationValidationError("not a computation of the machine")
    current = computation.initial
    for label, nxt in computation.steps:
        if nxt not in step_exact(machine, current, label):
            return False
        current = nxt
    return True


def max_channel(computation: Computation) -> int:
    """Maximum channel length over all configurations."""
    return max(len(c.channel) for c in computation.configurations)


@dataclass(frozen=True)
class SearchResult:
    computation: Optional[Computation]
    truncated: bool  # True when some branch was cut by the bounds

    @property
    def found(self) -> bool:
        return self.computation is not None


def search_error_free(
    machine: ChannelMachine,
    target: str,
    max_steps: int,
    max_channel_len: int,
) -> SearchResult:
    """Breadth-first search for a shortest error-free computation from the
    initial configuration to the target control state.

    When no computation is found, ``truncated`` distinguishes a search cut
    off by the bounds from one that exhausted the whole reachable space.
    """
    if target not in machine.states:
        raise ValueError(f"target state {target!r} undeclared")
    start = Configuration(machine.initial, ())
    if start.state == target:
        return SearchResult(Computation(start), truncated=False)
    parents: dict[Configuration, tuple[Configuration, str]] = {}
    seen = {start}
    queue = deque([(start, 0)])
    truncated = False
    while queue:
        config, depth = queue.popleft()
        if depth == max_steps:
            # only a genuine cut if an unexplored successor exists
            if any(
                nxt not in seen
                for label in machine.labels()
                for nxt in step_exact(machine, config, label)
            ):
                truncated = True
            continue
        for label in machine.labels():
            for nxt in sorted(step_exact(machine, config, label), key=lambda c: c.channel):
                if nxt in seen:
                    continue
                if len(nxt.channel) > max_channel_len:
                    truncated = True
                    continue
                seen.add(nxt)
                parents[nxt] = (config, label)
                if nxt.state == target:
                    steps = []
                    node = nxt
                    while node != start:
                        previous, lab = parents[node]
                        steps.append((lab, node))
                        node = previous
                    steps.reverse()
                    return SearchResult(Computation(start, tuple(steps)), truncated=False)
                queue.append((nxt, depth + 1))
    return SearchResult(None, truncated=truncated)


def enumerate_error_free(
    machine: ChannelMachine,
    target: str,
    max_steps: int,
    max_channel_len: int,
) -> list[Computation]:
    """All error-free computations from the initial configuration whose last
    configuration is the first visit to the target state, within the bounds.

    Computations stop at the target (a visit to the target ends the
    computation); this matches what the timed-word encoding can express.
    """
    if target not in machine.states:
        raise ValueError(f"target state {target!r} undeclared")
    start = Configuration(machine.initial, ())
    results: list[Computation] = []

    def recurse(config: Configuration, steps: list[tuple[str, Configuration]]):
        if config.state == target:
            results.append(Computation(start, tuple(steps)))
            return
        if len(steps) == max_steps:
            return
        for label in machine.labels():
            for nxt in sorted(step_exact(machine, config, label), key=lambda c: (c.state, c.channel)):
                if len(nxt.channel) > max_channel_len:
                    continue
                steps.append((label, nxt))
                recurse(nxt, steps)
                steps.pop()

    recurse(start, [])
    return results
