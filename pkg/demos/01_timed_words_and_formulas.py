"""Timed words and metric temporal logic, step by step.

A timed word is a finite sequence of events with exact rational timestamps.
Formulas constrain distances between events; evaluation happens at event
positions (pointwise), and the until modality is strict: witnesses lie
strictly in the future.
"""

from fractions import Fraction

from ptamtl import concat, eval_at, is_strictly_monotonic, satisfies
from ptamtl.formats import parse_formula, parse_timed_word, serialize_timed_word

# Words are written symbol@time with exact fractions.
w = parse_timed_word("req@0 ack@1/2 req@1 ack@3/2")
print("word:           ", serialize_timed_word(w))
print("strictly rising:", is_strictly_monotonic(w))

# Concatenation is defined when the pieces do not overlap in time.
tail = parse_timed_word("done@2")
print("extended:       ", serialize_timed_word(concat(w, tail)))

# Every request is answered within one time unit (here: strictly within).
responsive = parse_formula("G (req -> F(0,1) ack)")
print("\nG (req -> F(0,1) ack):", satisfies(concat(w, tail), responsive))

# Exact-distance constraints are first-class; interval endpoints are
# natural numbers (or inf), so whole units anchor the recurrences.
pulse = parse_timed_word("req@0 ack@1/2 req@1")
echo = parse_formula("G (req -> F[=1] req | !F true)")
print("requests recur at distance one (or the word ends):", satisfies(pulse, echo))

# Pointwise strictness: at its last position a word has no strict future,
# so X true fails there.
print("\nX true at the final position:", eval_at(w, len(w), parse_formula("X true")))

# The until interval constrains the witness; the positions in between must
# satisfy the left operand.
until = parse_formula("(req | ack) U[1,2] done")
print("(req | ack) U[1,2] done:", satisfies(concat(w, tail), until))
