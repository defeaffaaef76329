"""A one-parameter automaton whose language depends delicately on the parameter.

The automaton below reads a-events at an exact cadence p (clock x), switches
phase when a second clock y reaches one, then reads b-events at the same
cadence until y reaches one again.  Only reciprocals 1/n give it any words
at all, and then exactly one word each.
"""

from fractions import Fraction

from ptamtl import (
    ClockConstraint,
    Edge,
    Pta,
    enumerate_accepted,
    is_deterministic,
    membership,
)
from ptamtl.formats import parse_timed_word, serialize_timed_word

g = ClockConstraint.of
automaton = Pta(
    alphabet=("a", "b"),
    locations=("1", "2", "3"),
    initial=frozenset({"1"}),
    clocks=("x", "y"),
    parameters=("p",),
    edges=(
        Edge("1", "a", g(("x", "=", "p")), frozenset({"x"}), "1"),
        Edge("1", "a", g(("x", "=", "p"), ("y", "=", 1)), frozenset({"x", "y"}), "2"),
        Edge("2", "b", g(("x", "=", "p")), frozenset({"x"}), "2"),
        Edge("2", "b", g(("x", "=", "p"), ("y", "=", 1)), frozenset(), "3"),
    ),
    final=frozenset({"3"}),
)

print("deterministic:", is_deterministic(automaton))
print("(the phase-switch guard overlaps the loop guard at y = 1)\n")

for n in (1, 2, 3):
    rho = {"p": Fraction(1, n)}
    words = enumerate_accepted(automaton, rho, Fraction(1, 2 * n), Fraction(2), 2 * n)
    print(f"p = 1/{n}:")
    for word in sorted(words, key=lambda w: w.times):
        print("   ", serialize_timed_word(word))

for num, den in ((2, 3), (3, 4)):
    rho = {"p": Fraction(num, den)}
    words = enumerate_accepted(automaton, rho, Fraction(1, 12), Fraction(2), 6)
    print(f"p = {num}/{den}: {len(words)} accepted words (inconsistent valuation)")

# membership checks are exact
w = parse_timed_word("a@1/2 a@1 b@3/2 b@2")
print("\nmembership of", serialize_timed_word(w))
for p in (Fraction(1, 2), Fraction(1, 3)):
    print(f"  at p = {p}:", membership(automaton, {"p": p}, w))
