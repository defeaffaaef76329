"""Text formats: timed words, MTL formulas, channel machines, automata.

Parsing and serialization round-trip: parse(serialize(v)) == v for every
value, and serialize(parse(t)) is the canonical spelling of t.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .channel import ChannelMachine
from .errors import ParseError
from .mtl import (
    FULL,
    And,
    Atom,
    Eventually,
    FalseConst,
    Formula,
    Globally,
    Implies,
    Interval,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
)
from .pta import ClockConstraint, ConstraintAtom, Edge, Pta
from .timedwords import TimedWord, rat


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return rat(text.strip())
    except (ValueError, ZeroDivisionError, TypeError) as error:
        raise ParseError(f"bad rational {text!r}: {error}") from error


# -- timed words: whitespace-separated symbol@rational tokens ----------------


def parse_timed_word(text: str) -> TimedWord:
    events = []
    for token in text.split():
        if "@" not in token:
            raise ParseError(f"bad event token {token!r}: expected symbol@time")
        symbol, _, time = token.rpartition("@")
        if not symbol:
            raise ParseError(f"bad event token {token!r}: empty symbol")
        events.append((symbol, parse_rational(time)))
    if not events:
        raise ParseError("a timed word needs at least one event")
    try:
        return TimedWord(events)
    except ValueError as error:
        raise ParseError(str(error)) from error


def serialize_timed_word(word: TimedWord) -> str:
    return " ".join(f"{symbol}@{format_rational(time)}" for symbol, time in word)


# -- MTL formulas -------------------------------------------------------------
#
# Atoms are identifiers, optionally with an immediately attached ! or ?
# (transition labels), plus the literal tokens # and *.  Operators: ! & | ->
# U X F G, interval suffixes like [1,2], (0,1), [0,inf), [=2]; `true` and
# `false`; parentheses for grouping.  Precedence: unary > & > | > -> > U.

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*[!?]?)|(?P<num>\d+)"
    r"|(?P<arrow>->)|(?P<punct>[()\[\],&|!#*=]))"
)
_RESERVED_WORDS = {"true", "false", "U", "X", "F", "G", "inf"}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            match = _TOKEN.match(text, position)
            if match is None:
                rest = text[position:].lstrip()
                if not rest:
                    break
                raise ParseError(f"unexpected character {rest[0]!r}", column=position + 1)
            position = match.end()
            if match.lastgroup == "ident":
                self.items.append(("ident", match.group("ident"), match.start()))
            elif match.lastgroup == "num":
                self.items.append(("num", match.group("num"), match.start()))
            elif match.lastgroup == "arrow":
                self.items.append(("op", "->", match.start()))
            else:
                self.items.append(("op", match.group("punct"), match.start()))
        self.index = 0

    def peek(self) -> Optional[tuple[str, str]]:
        if self.index < len(self.items):
            kind, value, _ = self.items[self.index]
            return kind, value
        return None

    def next(self) -> tuple[str, str]:
        if self.index >= len(self.items):
            raise ParseError("unexpected end of formula")
        kind, value, _ = self.items[self.index]
        self.index += 1
        return kind, value

    def expect(self, value: str) -> None:
        got = self.peek()
        if got is None or got[1] != value:
            found = got[1] if got else "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}")
        self.next()


def _parse_interval(tokens: _Tokens) -> Optional[Interval]:
    """Try to read an interval suffix; restores the position on failure."""
    start = tokens.index
    got = tokens.peek()
    if got is None or got[1] not in ("[", "("):
        return None
    lower_closed = got[1] == "["
    tokens.next()
    got = tokens.peek()
    try:
        if got is not None and got[1] == "=":
            tokens.next()
            kind, value = tokens.next()
            if kind != "num":
                raise ParseError("expected a number after '='")
            tokens.expect("]")
            return Interval.point(int(value))
        kind, value = tokens.next()
        if kind != "num":
            raise ParseError("expected a number")
        lower = int(value)
        tokens.expect(",")
        kind, value = tokens.next()
        if kind == "num":
            upper: Optional[int] = int(value)
        elif kind == "ident" and value == "inf":
            upper = None
        else:
            raise ParseError("expected a number or inf")
        got = tokens.peek()
        if got is None or got[1] not in ("]", ")"):
            raise ParseError("expected ] or ) to close the interval")
        upper_closed = got[1] == "]"
        tokens.next()
        return Interval(lower, upper, lower_closed, upper_closed)
    except ParseError:
        tokens.index = start
        return None


def _parse_unary(tokens: _Tokens) -> Formula:
    got = tokens.peek()
    if got is None:
        raise ParseError("unexpected end of formula")
    kind, value = got
    if value == "!" and kind == "op":
        tokens.next()
        return Not(_parse_unary(tokens))
    if kind == "ident" and value in ("X", "F", "G"):
        tokens.next()
        interval = _parse_interval(tokens) or FULL
        operand = _parse_unary(tokens)
        if value == "X":
            return Next(interval, operand)
        if value == "F":
            return Eventually(interval, operand)
        return Globally(interval, operand)
    if value == "(" and kind == "op":
        tokens.next()
        inner = _parse_until(tokens)
        tokens.expect(")")
        return inner
    if kind == "ident":
        tokens.next()
        if value == "true":
            return TrueConst()
        if value == "false":
            return FalseConst()
        if value == "U":
            raise ParseError("'U' is an operator, not an atom")
        if value == "inf":
            raise ParseError("'inf' is reserved for interval endpoints")
        return Atom(value)
    if value in ("#", "*") and kind == "op":
        tokens.next()
        return Atom(value)
    raise ParseError(f"unexpected token {value!r}")


def _parse_and(tokens: _Tokens) -> Formula:
    node = _parse_unary(tokens)
    while True:
        got = tokens.peek()
        if got is not None and got == ("op", "&"):
            tokens.next()
            node = And(node, _parse_unary(tokens))
        else:
            return node


def _parse_or(tokens: _Tokens) -> Formula:
    node = _parse_and(tokens)
    while True:
        got = tokens.peek()
        if got is not None and got == ("op", "|"):
            tokens.next()
            node = Or(node, _parse_and(tokens))
        else:
            return node


def _parse_implies(tokens: _Tokens) -> Formula:
    node = _parse_or(tokens)
    got = tokens.peek()
    if got is not None and got == ("op", "->"):
        tokens.next()
        return Implies(node, _parse_implies(tokens))  # right-associative
    return node


def _parse_until(tokens: _Tokens) -> Formula:
    node = _parse_implies(tokens)
    got = tokens.peek()
    if got is not None and got == ("ident", "U"):
        tokens.next()
        interval = _parse_interval(tokens) or FULL
        return Until(interval, node, _parse_until(tokens))  # right-associative
    return node


def parse_formula(text: str) -> Formula:
    tokens = _Tokens(text)
    node = _parse_until(tokens)
    leftover = tokens.peek()
    if leftover is not None:
        raise ParseError(f"trailing input starting at {leftover[1]!r}")
    return node


def serialize_interval(interval: Interval) -> str:
    if interval.is_full:
        return ""
    if interval.upper is not None and interval.lower == interval.upper:
        return f"[={interval.lower}]"
    left = "[" if interval.lower_closed else "("
    right = "]" if interval.upper_closed else ")"
    upper = "inf" if interval.upper is None else str(interval.upper)
    return f"{left}{interval.lower},{upper}{right}"


# precedence: unary 4 > & 3 > | 2 > -> 1 > U 0
def _render(node: Formula, parent: int) -> str:
    if isinstance(node, Atom):
        return node.name
    if isinstance(node, TrueConst):
        return "true"
    if isinstance(node, FalseConst):
        return "false"
    if isinstance(node, Not):
        return "!" + _render(node.operand, 4)
    if isinstance(node, (Next, Eventually, Globally)):
        op = {Next: "X", Eventually: "F", Globally: "G"}[type(node)]
        text = f"{op}{serialize_interval(node.interval)} {_render(node.operand, 4)}"
        return f"({text})" if parent > 4 else text
    if isinstance(node, And):
        text = f"{_render(node.left, 3)} & {_render(node.right, 4)}"
        return f"({text})" if parent > 3 else text
    if isinstance(node, Or):
        text = f"{_render(node.left, 2)} | {_render(node.right, 3)}"
        return f"({text})" if parent > 2 else text
    if isinstance(node, Implies):
        text = f"{_render(node.left, 2)} -> {_render(node.right, 1)}"
        return f"({text})" if parent > 1 else text
    if isinstance(node, Until):
        text = (
            f"{_render(node.left, 1)} U{serialize_interval(node.interval)} "
            f"{_render(node.right, 0)}"
        )
        return f"({text})" if parent > 0 else text
    raise TypeError(f"unknown formula node {node!r}")


def serialize_formula(formula: Formula) -> str:
    return _render(formula, 0)


# -- channel machines ---------------------------------------------------------


def parse_machine(text: str) -> tuple[ChannelMachine, Optional[str]]:
    """Parse a machine description; returns the machine and the optional
    target state from a ``final:`` line."""
    states: list[str] = []
    initial: Optional[str] = None
    messages: list[str] = []
    transitions: list[tuple[str, str, str]] = []
    final: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: values', got {line!r}", line=number)
        key, _, rest = line.partition(":")
        key = key.strip()
        fields = rest.split()
        if key == "states":
            states.extend(fields)
        elif key == "init":
            if len(fields) != 1:
                raise ParseError("init needs exactly one state", line=number)
            initial = fields[0]
        elif key == "messages":
            messages.extend(fields)
        elif key == "trans":
            if len(fields) != 3:
                raise ParseError("trans needs 'source label target'", line=number)
            transitions.append((fields[0], fields[1], fields[2]))
        elif key == "final":
            if len(fields) != 1:
                raise ParseError("final needs exactly one state", line=number)
            final = fields[0]
        else:
            raise ParseError(f"unknown key {key!r}", line=number)
    if initial is None:
        raise ParseError("missing init: line")
    try:
        machine = ChannelMachine(tuple(states), initial, tuple(messages), tuple(transitions))
    except ValueError as error:
        raise ParseError(str(error)) from error
    return machine, final


def serialize_machine(machine: ChannelMachine, final: Optional[str] = None) -> str:
    lines = [
        "states: " + " ".join(machine.states),
        f"init: {machine.initial}",
        "messages: " + " ".join(machine.messages),
    ]
    lines.extend(f"trans: {s} {l} {t}" for s, l, t in machine.transitions)
    if final is not None:
        lines.append(f"final: {final}")
    return "\n".join(lines) + "\n"


# -- clock constraints and automata -------------------------------------------

_GUARD_ATOM = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(<=|>=|=|<|>)\s*([A-Za-z0-9_]+)\s*$")


def parse_guard(text: str) -> ClockConstraint:
    text = text.strip()
    if not text:
        return ClockConstraint()
    atoms = []
    for part in text.split("&"):
        match = _GUARD_ATOM.match(part)
        if match is None:
            raise ParseError(f"bad guard atom {part.strip()!r}")
        clock, relation, bound = match.groups()
        atoms.append(
            ConstraintAtom(clock, relation, int(bound) if bound.isdigit() else bound)
        )
    return ClockConstraint(tuple(atoms))


def serialize_guard(guard: ClockConstraint) -> str:
    return " & ".join(f"{a.clock}{a.relation}{a.bound}" for a in guard.atoms)


_EDGE_LINE = re.compile(
    r"^(\S+)\s+(\S+)\s+\"([^\"]*)\"\s+\{([^}]*)\}\s+(\S+)$"
)


def parse_pta(text: str) -> Pta:
    header: dict[str, list[str]] = {}
    edges: list[Edge] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: values', got {line!r}", line=number)
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "edge":
            match = _EDGE_LINE.match(rest.strip())
            if match is None:
                raise ParseError(
                    'edge needs: <src> <symbol> "<guard>" {<resets>} <dst>', line=number
                )
            source, symbol, guard_text, resets_text, target = match.groups()
            resets = frozenset(
                token for token in re.split(r"[,\s]+", resets_text.strip()) if token
            )
            edges.append(Edge(source, symbol, parse_guard(guard_text), resets, target))
        elif key in ("alphabet", "clocks", "params", "locations", "init", "final"):
            header.setdefault(key, []).extend(rest.split())
        else:
            raise ParseError(f"unknown key {key!r}", line=number)
    for required in ("alphabet", "locations", "init", "final"):
        if required not in header:
            raise ParseError(f"missing {required}: line")
    try:
        return Pta(
            alphabet=tuple(header["alphabet"]),
            locations=tuple(header["locations"]),
            initial=frozenset(header["init"]),
            clocks=tuple(header.get("clocks", [])),
            parameters=tuple(header.get("params", [])),
            edges=tuple(edges),
            final=frozenset(header["final"]),
        )
    except ValueError as error:
        raise ParseError(str(error)) from error


def serialize_pta(automaton: Pta) -> str:
    lines = [
        "alphabet: " + " ".join(automaton.alphabet),
        "clocks: " + " ".join(automaton.clocks),
        "params: " + " ".join(automaton.parameters),
        "locations: " + " ".join(automaton.locations),
        "init: " + " ".join(sorted(automaton.initial)),
        "final: " + " ".join(sorted(automaton.final)),
    ]
    for edge in automaton.edges:
        resets = ",".join(sorted(edge.resets))
        lines.append(
            f'edge: {edge.source} {edge.symbol} "{serialize_guard(edge.guard)}" '
            f"{{{resets}}} {edge.target}"
        )
    return "\n".join(lines) + "\n"


# -- parameter valuations and computations ------------------------------------


def parse_valuation(text: str) -> dict[str, Fraction]:
    """Parse ``p=1/2`` (comma-separated for several parameters)."""
    values: dict[str, Fraction] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"bad assignment {part!r}: expected name=value")
        name, _, value = part.partition("=")
        values[name.strip()] = parse_rational(value)
    if not values:
        raise ParseError("empty valuation")
    return values


def serialize_valuation(values) -> str:
    items = sorted(values.items()) if isinstance(values, dict) else sorted(values)
    return ",".join(f"{name}={format_rational(value)}" for name, value in items)


def parse_computation(machine: ChannelMachine, text: str):
    """Parse an alternating 'state label state ... state' sequence and replay
    it under the exact step relation."""
    from .channel import Computation, Configuration, step_exact

    tokens = text.split()
    if len(tokens) % 2 == 0 or not tokens:
        raise ParseError("computation must alternate state label state ... state")
    states = tokens[0::2]
    labels = tokens[1::2]
    if states[0] != machine.initial:
        raise ParseError(f"computation must start at {machine.initial!r}")
    current = Configuration(machine.initial, ())
    steps = []
    for label, nxt_state in zip(labels, states[1:]):
        successors = [c for c in step_exact(machine, current, label) if c.state == nxt_state]
        if not successors:
            raise ParseError(
                f"no exact step ({current.state}, {label}, {nxt_state}) "
                f"with channel {''.join(current.channel) or 'empty'}"
            )
        current = successors[0]
        steps.append((label, current))
    return Computation(Configuration(machine.initial, ()), tuple(steps))


def serialize_computation(computation) -> str:
    parts = [computation.initial.state]
    for label, config in computation.steps:
        parts.append(label)
        parts.append(config.state)
    return " ".join(parts)
