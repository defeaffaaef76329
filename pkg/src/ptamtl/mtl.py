"""Metric temporal logic over finite timed words, pointwise semantics.

The until modality is strict: a witness position lies strictly after the
current one, and only positions strictly in between are constrained.  The
next modality is derivable from until precisely because of this strictness.

Formulas are immutable ASTs.  The core grammar is atoms, negation,
conjunction, and interval-constrained until; disjunction, implication, the
constants, next, eventually, and globally are kept as first-class nodes for
display and are eliminated by :func:`desugar`.  The evaluator handles both
forms and the two agree (this is tested against an independent reference).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional

from .timedwords import TimedWord


@dataclass(frozen=True)
class Interval:
    """An interval with endpoints in the naturals plus infinity.

    ``upper is None`` encodes an unbounded (and therefore right-open)
    interval.  Intervals must be non-empty.
    """

    lower: int
    upper: Optional[int]
    lower_closed: bool
    upper_closed: bool

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError("interval endpoints must be non-negative")
        if self.upper is None:
            if self.upper_closed:
                raise ValueError("an unbounded interval must be right-open")
            return
        if self.upper < self.lower:
            raise ValueError("empty interval: upper endpoint below lower")
        if self.upper == self.lower and not (self.lower_closed and self.upper_closed):
            raise ValueError("empty interval: point interval must be closed on both ends")

    @classmethod
    def point(cls, value: int) -> "Interval":
        return cls(value, value, True, True)

    def contains(self, value: Fraction) -> bool:
        if self.lower_closed:
            if value < self.lower:
                return False
        elif value <= self.lower:
            return False
        if self.upper is None:
            return True
        if self.upper_closed:
            return value <= self.upper
        return value < self.upper

    @property
    def is_full(self) -> bool:
        return self.lower == 0 and self.lower_closed and self.upper is None


FULL = Interval(0, None, True, False)
POSITIVE = Interval(0, None, False, False)


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    interval: Interval
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    interval: Interval
    operand: Formula


@dataclass(frozen=True)
class Globally(Formula):
    interval: Interval
    operand: Formula


TRUE = TrueConst()
FALSE = FalseConst()


def and_all(parts: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; TRUE for the empty sequence."""
    parts = list(parts)
    if not parts:
        return TRUE
    return reduce(And, parts)


def or_all(parts: Iterable[Formula]) -> Formula:
    """Left-folded disjunction; FALSE for the empty sequence."""
    parts = list(parts)
    if not parts:
        return FALSE
    return reduce(Or, parts)


def desugar(formula: Formula, alphabet: Iterable[str]) -> Formula:
    """Expand every derived connective into the core grammar.

    The result contains only Atom, Not, And, and Until nodes.  The constant
    ``true`` expands to ``p | !p`` where p is the lexicographically first
    alphabet symbol; any choice is semantically equal.
    """
    symbols = sorted(set(alphabet))
    if not symbols:
        raise ValueError("desugaring needs a non-empty alphabet")
    pivot = Atom(symbols[0])
    true_core = Not(And(Not(pivot), Not(Not(pivot))))  # p | !p, expanded
    false_core = Not(true_core)

    def walk(node: Formula) -> Formula:
        if isinstance(node, Atom):
            return node
        if isinstance(node, TrueConst):
            return true_core
        if isinstance(node, FalseConst):
            return false_core
        if isinstance(node, Not):
            return Not(walk(node.operand))
        if isinstance(node, And):
            return And(walk(node.left), walk(node.right))
        if isinstance(node, Or):
            return Not(And(Not(walk(node.left)), Not(walk(node.right))))
        if isinstance(node, Implies):
            return walk(Or(Not(node.left), node.right))
        if isinstance(node, Until):
            return Until(node.interval, walk(node.left), walk(node.right))
        if isinstance(node, Next):
            return Until(node.interval, false_core, walk(node.operand))
        if isinstance(node, Eventually):
            return Until(node.interval, true_core, walk(node.operand))
        if isinstance(node, Globally):
            return Not(Until(node.interval, true_core, Not(walk(node.operand))))
        raise TypeError(f"unknown formula node {node!r}")

    return walk(formula)


def _truth_table(word: TimedWord, formula: Formula) -> list[bool]:
    """Truth value of ``formula`` at every position, bottom-up over subformulas.

    Memoized by structural equality, so shared subterms are evaluated once.
    O(|formula| * |word|^2) in the worst case, which is fine at desk scale.
    """
    n = len(word)
    symbols = word.symbols
    times = word.times
    memo: dict[Formula, list[bool]] = {}

    def row(node: Formula) -> list[bool]:
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Atom):
            result = [s == node.name for s in symbols]
        elif isinstance(node, TrueConst):
            result = [True] * n
        elif isinstance(node, FalseConst):
            result = [False] * n
        elif isinstance(node, Not):
            result = [not v for v in row(node.operand)]
        elif isinstance(node, And):
            left, right = row(node.left), row(node.right)
            result = [a and b for a, b in zip(left, right)]
        elif isinstance(node, Or):
            left, right = row(node.left), row(node.right)
            result = [a or b for a, b in zip(left, right)]
        elif isinstance(node, Implies):
            left, right = row(node.left), row(node.right)
            result = [(not a) or b for a, b in zip(left, right)]
        elif isinstance(node, Until):
            left, right = row(node.left), row(node.right)
            contains = node.interval.contains
            result = [False] * n
            for i in range(n):
                for j in range(i + 1, n):
                    if right[j] and contains(times[j] - times[i]):
                        result[i] = True
                        break
                    if not left[j]:
                        break
        elif isinstance(node, Next):
            inner = row(node.operand)
            contains = node.interval.contains
            result = [
                i + 1 < n and inner[i + 1] and contains(times[i + 1] - times[i])
                for i in range(n)
            ]
        elif isinstance(node, Eventually):
            inner = row(node.operand)
            contains = node.interval.contains
            result = [
                any(inner[j] and contains(times[j] - times[i]) for j in range(i + 1, n))
                for i in range(n)
            ]
        elif isinstance(node, Globally):
            inner = row(node.operand)
            contains = node.interval.contains
            result = [
                all(inner[j] or not contains(times[j] - times[i]) for j in range(i + 1, n))
                for i in range(n)
            ]
        else:
            raise TypeError(f"unknown formula node {node!r}")
        memo[node] = result
        return result

    return row(formula)


def eval_at(word: TimedWord, position: int, formula: Formula) -> bool:
    """Truth of ``formula`` at a 1-based position of ``word``."""
    if not 1 <= position <= len(word):
        raise IndexError(f"position {position} out of range 1..{len(word)}")
    return _truth_table(word, formula)[position - 1]


def satisfies(word: TimedWord, formula: Formula) -> bool:
    """Whether the word satisfies the formula (evaluation at position 1).

    Top-level conjunctions and negations are split so large conjunction
    formulas fail fast; the result is identical to ``eval_at(word, 1, ...)``.
    """
    if isinstance(formula, And):
        return satisfies(word, formula.left) and satisfies(word, formula.right)
    if isinstance(formula, Not):
        return not satisfies(word, formula.operand)
    return eval_at(word, 1, formula)


# -- three-valued prefix monitoring -------------------------------------------
#
# For search pruning: given a prefix, can SOME extension (events appended at
# or after the last timestamp) still satisfy the formula?  The monitor is a
# Kleene evaluation where future positions may carry any symbol at any such
# time; it answers False only when no extension can work, so pruning on it
# never discards a word the search was looking for.

_T, _F, _U = True, False, None


def _not3(v):
    return None if v is None else (not v)


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is True and b is True:
        return True
    return None


def _or3(a, b):
    if a is True or b is True:
        return True
    if a is False and b is False:
        return False
    return None


def _future_possible(interval: Interval, elapsed: Fraction) -> bool:
    """Can a future event (at distance >= elapsed from the anchor) fall in
    the interval?  ``elapsed`` is last-timestamp minus anchor timestamp."""
    if interval.upper is None:
        return True
    if interval.upper_closed:
        return elapsed <= interval.upper
    return elapsed < interval.upper


def prefix_may_satisfy(word: TimedWord, formula: Formula) -> bool:
    """False only when no extension of the word can satisfy the formula.

    Extensions append events at timestamps at or after the word's last
    timestamp (lengths and horizons are not modelled, which only widens the
    future and keeps the answer sound for any bounded search).
    """
    n = len(word)
    symbols = word.symbols
    times = word.times
    last = times[-1]
    memo: dict[Formula, list] = {}

    def row(node: Formula) -> list:
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Atom):
            result = [s == node.name for s in symbols]
        elif isinstance(node, TrueConst):
            result = [True] * n
        elif isinstance(node, FalseConst):
            result = [False] * n
        elif isinstance(node, Not):
            result = [_not3(v) for v in row(node.operand)]
        elif isinstance(node, And):
            left, right = row(node.left), row(node.right)
            result = [_and3(a, b) for a, b in zip(left, right)]
        elif isinstance(node, Or):
            left, right = row(node.left), row(node.right)
            result = [_or3(a, b) for a, b in zip(left, right)]
        elif isinstance(node, Implies):
            left, right = row(node.left), row(node.right)
            result = [_or3(_not3(a), b) for a, b in zip(left, right)]
        elif isinstance(node, Next):
            inner = row(node.operand)
            contains = node.interval.contains
            result = []
            for i in range(n):
                if i + 1 < n:
                    result.append(inner[i + 1] if contains(times[i + 1] - times[i]) else False)
                else:
                    result.append(None if _future_possible(node.interval, last - times[i]) else False)
        elif isinstance(node, Eventually):
            inner = row(node.operand)
            contains = node.interval.contains
            result = []
            for i in range(n):
                value = False
                for j in range(i + 1, n):
                    if contains(times[j] - times[i]):
                        v = inner[j]
                        if v is True:
                            value = True
                            break
                        if v is None:
                            value = None
                if value is not True and _future_possible(node.interval, last - times[i]):
                    value = None
                result.append(value)
        elif isinstance(node, Globally):
            inner = row(node.operand)
            contains = node.interval.contains
            result = []
            for i in range(n):
                value = True
                for j in range(i + 1, n):
                    if contains(times[j] - times[i]):
                        v = inner[j]
                        if v is False:
                            value = False
                            break
                        if v is None:
                            value = None
                if value is not False and _future_possible(node.interval, last - times[i]):
                    value = None  # a future event inside the window could violate
                result.append(value)
        elif isinstance(node, Until):
            left, right = row(node.left), row(node.right)
            contains = node.interval.contains
            result = []
            for i in range(n):
                value = False
                intermediates = True  # three-valued status of all left values so far
                for j in range(i + 1, n):
                    if contains(times[j] - times[i]):
                        witness = _and3(right[j], intermediates)
                        if witness is True:
                            value = True
                            break
                        if witness is None:
                            value = None
                    intermediates = _and3(intermediates, left[j])
                    if intermediates is False:
                        break
                if (
                    value is not True
                    and intermediates is not False
                    and _future_possible(node.interval, last - times[i])
                ):
                    value = None
                result.append(value)
        else:
            raise TypeError(f"unknown formula node {node!r}")
        memo[node] = result
        return result

    def may(node: Formula) -> bool:
        if isinstance(node, And):
            return may(node.left) and may(node.right)
        return row(node)[0] is not False

    return may(formula)
