"""Independent oracles and generators used across the test suite.

The oracles here deliberately re-derive semantics from first principles and
share no code with the production paths they check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ptamtl.channel import ChannelMachine, Configuration, label_kind, subword
from ptamtl.mtl import (
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
from ptamtl.pta import ClockConstraint, constraint_sat
from ptamtl.timedwords import TimedWord


# -- naive MTL reference evaluator --------------------------------------------


def naive_eval(word: TimedWord, position: int, formula: Formula) -> bool:
    """Direct recursion over the satisfaction relation, no tables, no reuse.

    Positions are 1-based.  Derived connectives are evaluated through their
    defining expansions, spelled out independently of the production code.
    """
    n = len(word)
    i = position

    def t(j: int) -> Fraction:
        return word.time_at(j)

    if isinstance(formula, Atom):
        return word.symbol_at(i) == formula.name
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, FalseConst):
        return False
    if isinstance(formula, Not):
        return not naive_eval(word, i, formula.operand)
    if isinstance(formula, And):
        return naive_eval(word, i, formula.left) and naive_eval(word, i, formula.right)
    if isinstance(formula, Or):
        return naive_eval(word, i, formula.left) or naive_eval(word, i, formula.right)
    if isinstance(formula, Implies):
        return (not naive_eval(word, i, formula.left)) or naive_eval(word, i, formula.right)
    if isinstance(formula, Until):
        for j in range(i + 1, n + 1):
            if formula.interval.contains(t(j) - t(i)) and naive_eval(word, j, formula.right):
                if all(naive_eval(word, k, formula.left) for k in range(i + 1, j)):
                    return True
        return False
    if isinstance(formula, Next):
        # false U_I phi: the witness must be the immediate successor
        return (
            i + 1 <= n
            and formula.interval.contains(t(i + 1) - t(i))
            and naive_eval(word, i + 1, formula.operand)
        )
    if isinstance(formula, Eventually):
        return any(
            formula.interval.contains(t(j) - t(i)) and naive_eval(word, j, formula.operand)
            for j in range(i + 1, n + 1)
        )
    if isinstance(formula, Globally):
        return all(
            naive_eval(word, j, formula.operand)
            for j in range(i + 1, n + 1)
            if formula.interval.contains(t(j) - t(i))
        )
    raise TypeError(f"unknown node {formula!r}")


# -- brute-force oracle for the faulty channel step ---------------------------


def all_strings(messages, max_len: int):
    for length in range(max_len + 1):
        yield from itertools.product(messages, repeat=length)


def insertion_step_oracle(
    machine: ChannelMachine,
    before: Configuration,
    label: str,
    after: Configuration,
    witness_len: int,
) -> bool:
    """Existential definition of the faulty step: some exact step between a
    channel superword of ``before`` and a subword of ``after``.

    ``witness_len`` bounds the enumerated witness channels; a bound of
    max(len(before), len(after)) + 1 is exhaustive for all three label kinds.
    """
    kind, message = label_kind(label)
    for source, lab, target in machine.transitions:
        if source != before.state or lab != label or target != after.state:
            continue
        for x in all_strings(machine.messages, witness_len):
            if kind == "send":
                x_prime = x + (message,)
            elif kind == "recv":
                if not x or x[0] != message:
                    continue
                x_prime = x[1:]
            else:
                if x != ():
                    continue
                x_prime = ()
            if subword(before.channel, x) and subword(x_prime, after.channel):
                return True
    return False


# -- grid oracle for guard feasibility ----------------------------------------


def grid_values(max_denominator: int, box: int) -> list[Fraction]:
    values = set()
    for den in range(1, max_denominator + 1):
        for num in range(0, box * den + 1):
            values.add(Fraction(num, den))
    return sorted(values)


def feasible_on_grid(constraint: ClockConstraint, max_denominator: int, box: int) -> bool:
    """Exhaustively search valuations with bounded denominators in [0, box]."""
    clocks = sorted(constraint.clocks())
    params = sorted(constraint.parameters())
    values = grid_values(max_denominator, box)
    for assignment in itertools.product(values, repeat=len(clocks) + len(params)):
        clock_vals = dict(zip(clocks, assignment[: len(clocks)]))
        param_vals = dict(zip(params, assignment[len(clocks) :]))
        if constraint_sat(clock_vals, param_vals, constraint):
            return True
    return False


# -- random value generators (seeded, deterministic) ---------------------------

_INTERVALS = [
    Interval(0, None, True, False),
    Interval(0, None, False, False),
    Interval(0, 1, False, False),
    Interval(0, 1, True, False),
    Interval(1, 2, True, True),
    Interval(1, 2, False, False),
    Interval(1, 1, True, True),
    Interval(2, 2, True, True),
    Interval(0, 2, True, False),
    Interval(1, None, True, False),
]


def random_formula(rng: random.Random, alphabet, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.7:
            return Atom(rng.choice(alphabet))
        return TrueConst() if roll < 0.85 else FalseConst()
    kind = rng.choice(["not", "and", "or", "implies", "until", "next", "ev", "glob"])
    sub = depth - 1
    if kind == "not":
        return Not(random_formula(rng, alphabet, sub))
    interval = rng.choice(_INTERVALS)
    if kind == "and":
        return And(random_formula(rng, alphabet, sub), random_formula(rng, alphabet, sub))
    if kind == "or":
        return Or(random_formula(rng, alphabet, sub), random_formula(rng, alphabet, sub))
    if kind == "implies":
        return Implies(random_formula(rng, alphabet, sub), random_formula(rng, alphabet, sub))
    if kind == "until":
        return Until(interval, random_formula(rng, alphabet, sub), random_formula(rng, alphabet, sub))
    if kind == "next":
        return Next(interval, random_formula(rng, alphabet, sub))
    if kind == "ev":
        return Eventually(interval, random_formula(rng, alphabet, sub))
    return Globally(interval, random_formula(rng, alphabet, sub))


def random_word(rng: random.Random, alphabet, max_len: int) -> TimedWord:
    length = rng.randint(1, max_len)
    time = Fraction(0)
    events = []
    for _ in range(length):
        time += Fraction(rng.randint(0, 6), 4)  # zero steps allowed
        events.append((rng.choice(alphabet), time))
    return TimedWord(events)


# -- differential corpus: encodings, insertion mutants, broken mutations -------


def build_corpus(machine, target, step_bound=8, channel_bound=3, seed=21, mutations_per_word=10):
    """Words for the formula/checker differential gate.

    Valid encodings of every bounded error-free computation (three layouts),
    injected-insertion mutants, and single-event mutations: timestamp
    perturbations, symbol swaps, and deletions.  Mutations that cannot form
    a timed word (order violations) are skipped.
    """
    from ptamtl.channel import enumerate_error_free, max_channel
    from ptamtl.encoding import EncodingLayout, decompose, default_layout, encode
    from ptamtl.reduction import insertion_mutants, machine_alphabet

    rng = random.Random(seed)
    corpus: list[TimedWord] = []
    encodings: list[TimedWord] = []
    for gamma in enumerate_error_free(machine, target, step_bound, channel_bound):
        width = max_channel(gamma)
        encodings.append(encode(machine, target, gamma, default_layout(width)))
        skewed = EncodingLayout(
            Fraction(1, 3),
            tuple(Fraction(2 * i + 1, 2 * width + 3) for i in range(width)),
        )
        encodings.append(encode(machine, target, gamma, skewed))
        crowded = EncodingLayout(
            Fraction(0),
            tuple(Fraction(3 * i + 2, 3 * width + 4) for i in range(width)),
        )
        encodings.append(encode(machine, target, gamma, crowded))
    corpus.extend(encodings)

    mutant_count = 0
    for word in encodings:
        if len(decompose(word, machine)) >= 2:
            mutants = insertion_mutants(word, machine, count=3)
            corpus.extend(mutants)
            mutant_count += len(mutants)

    alphabet = machine_alphabet(machine)
    shifts = [Fraction(1, 4), Fraction(-1, 4), Fraction(1, 20), Fraction(-1, 20), Fraction(1)]
    for word in encodings:
        events = list(word.events)
        for _ in range(mutations_per_word):
            index = rng.randrange(len(events))
            kind = rng.choice(["time", "symbol", "delete"])
            if kind == "time":
                symbol, time = events[index]
                moved = time + rng.choice(shifts)
                lower = events[index - 1][1] if index > 0 else Fraction(0)
                upper = events[index + 1][1] if index + 1 < len(events) else None
                if moved < lower or (upper is not None and moved > upper) or moved < 0:
                    continue
                mutated = events[:index] + [(symbol, moved)] + events[index + 1 :]
            elif kind == "symbol":
                symbol, time = events[index]
                replacement = rng.choice([s for s in alphabet if s != symbol])
                mutated = events[:index] + [(replacement, time)] + events[index + 1 :]
            else:
                if len(events) == 1:
                    continue
                mutated = events[:index] + events[index + 1 :]
            corpus.append(TimedWord(mutated))
    return corpus, mutant_count
