"""Finite timed words with exact rational timestamps.

All time values in this package are ``fractions.Fraction`` instances, never
floats: the constructions downstream hinge on exact timestamp equalities
(copies exactly two time units apart, guards of the form x = p), which
floating point would silently break.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import ConcatOrderError

RationalLike = Union[int, str, Fraction]


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, ``p/q`` string, or Fraction into an exact rational.

    Floats are rejected on purpose.
    """
    if isinstance(value, float):
        raise TypeError("floating point time values are not allowed; use Fraction or 'p/q'")
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class TimedWord:
    """A non-empty finite sequence of (symbol, timestamp) events.

    Timestamps are non-negative rationals and non-decreasing along the word.
    Instances are immutable and hashable.
    """

    __slots__ = ("events",)

    def __init__(self, events: Iterable[tuple[str, RationalLike]]):
        normalized = tuple((str(symbol), rat(time)) for symbol, time in events)
        if not normalized:
            raise ValueError("a timed word must contain at least one event")
        previous = None
        for symbol, time in normalized:
            if time < 0:
                raise ValueError(f"negative timestamp {time} for symbol {symbol!r}")
            if previous is not None and time < previous:
                raise ValueError("timestamps must be non-decreasing")
            previous = time
        object.__setattr__(self, "events", normalized)

    def __setattr__(self, name, value):
        raise AttributeError("TimedWord is immutable")

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[tuple[str, Fraction]]:
        return iter(self.events)

    def __getitem__(self, index: int) -> tuple[str, Fraction]:
        return self.events[index]

    def __eq__(self, other) -> bool:
        return isinstance(other, TimedWord) and self.events == other.events

    def __hash__(self) -> int:
        return hash(self.events)

    def __repr__(self) -> str:
        inside = " ".join(f"({s},{t})" for s, t in self.events)
        return f"TimedWord[{inside}]"

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.events)

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for _, t in self.events)

    def symbol_at(self, position: int) -> str:
        """Symbol at a 1-based position."""
        return self.events[position - 1][0]

    def time_at(self, position: int) -> Fraction:
        """Timestamp at a 1-based position."""
        return self.events[position - 1][1]


def concat(first: TimedWord, second: TimedWord) -> TimedWord:
    """Concatenate two timed words.

    Defined only when the last timestamp of ``first`` is at most the first
    timestamp of ``second``; boundary equality is allowed.
    """
    if first.events[-1][1] > second.events[0][1]:
        raise ConcatOrderError(
            f"cannot concatenate: {first.events[-1]} ends after {second.events[0]} starts"
        )
    return TimedWord(first.events + second.events)


def is_strictly_monotonic(word: TimedWord) -> bool:
    """True iff every adjacent timestamp pair is strictly increasing."""
    times = word.times
    return all(earlier < later for earlier, later in zip(times, times[1:]))
