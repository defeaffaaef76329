import random
from fractions import Fraction

import pytest

from ptamtl.mtl import (
    FULL,
    And,
    Atom,
    Eventually,
    FalseConst,
    Globally,
    Interval,
    Next,
    Not,
    TrueConst,
    Until,
    desugar,
    eval_at,
    prefix_may_satisfy,
    satisfies,
)
from ptamtl.timedwords import TimedWord

from util import naive_eval, random_formula, random_word


def W(*pairs):
    return TimedWord(pairs)


class TestInterval:
    def test_contains(self):
        assert Interval(1, 2, False, False).contains(Fraction(3, 2))
        assert not Interval(1, 2, False, False).contains(Fraction(1))
        assert Interval.point(2).contains(Fraction(2))
        assert Interval(0, None, True, False).contains(Fraction(1000))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Interval(2, 1, True, True)
        with pytest.raises(ValueError):
            Interval(1, 1, True, False)
        with pytest.raises(ValueError):
            Interval(0, None, True, True)


class TestDesugar:
    def test_eventually(self):
        core = desugar(Eventually(Interval(1, 2, True, True), Atom("b")), ["a", "b"])
        assert isinstance(core, Until)
        assert core.interval == Interval(1, 2, True, True)

    def test_next_is_false_until(self):
        core = desugar(Next(FULL, Atom("a")), ["a"])
        assert isinstance(core, Until)
        # left side is the expansion of false
        assert isinstance(core.left, Not)

    def test_globally_shape(self):
        core = desugar(Globally(FULL, Not(Atom("a"))), ["a", "b"])
        assert isinstance(core, Not)
        assert isinstance(core.operand, Until)
        assert isinstance(core.operand.right, Not)
        assert isinstance(core.operand.right.operand, Not)

    def test_core_only(self):
        rng = random.Random(11)
        for _ in range(50):
            formula = random_formula(rng, ["a", "b"], 3)
            core = desugar(formula, ["a", "b"])
            stack = [core]
            while stack:
                node = stack.pop()
                assert isinstance(node, (Atom, Not, And, Until))
                if isinstance(node, Not):
                    stack.append(node.operand)
                elif isinstance(node, And):
                    stack.extend((node.left, node.right))
                elif isinstance(node, Until):
                    stack.extend((node.left, node.right))


class TestEvalAt:
    def test_atom(self):
        assert eval_at(W(("a", 0)), 1, Atom("a"))

    def test_next_needs_successor(self):
        assert not eval_at(W(("a", 0)), 1, Next(FULL, TrueConst()))

    def test_eventually_open_window(self):
        word = W(("a", 0), ("b", "3/2"))
        assert eval_at(word, 1, Eventually(Interval(1, 2, False, False), Atom("b")))

    def test_position_out_of_range(self):
        with pytest.raises(IndexError):
            eval_at(W(("a", 0)), 2, Atom("a"))

    def test_until_strictness(self):
        # the witness must lie strictly after the current position
        word = W(("b", 0), ("a", 1))
        assert eval_at(word, 1, Until(FULL, TrueConst(), Atom("a")))
        assert not eval_at(word, 1, Until(FULL, TrueConst(), Atom("b")))


class TestSatisfies:
    def test_globally_all_a(self):
        assert satisfies(W(("a", 0), ("a", 1)), Globally(FULL, Atom("a")))

    def test_globally_fails_on_b(self):
        assert not satisfies(W(("a", 0), ("b", 1)), Globally(FULL, Atom("a")))

    def test_exact_distance_conjunction(self):
        word = W(("a", 0), ("b", 1), ("b", 2))
        formula = And(Atom("a"), Eventually(Interval.point(2), Atom("b")))
        assert satisfies(word, formula)
        assert naive_eval(word, 1, formula)


class TestProperties:
    def test_negation_involution(self):
        rng = random.Random(5)
        for _ in range(60):
            formula = random_formula(rng, ["a", "b"], 3)
            word = random_word(rng, ["a", "b"], 5)
            for position in range(1, len(word) + 1):
                assert eval_at(word, position, Not(formula)) != eval_at(
                    word, position, formula
                )

    def test_next_true_fails_at_last_position(self):
        rng = random.Random(6)
        for _ in range(30):
            word = random_word(rng, ["a", "b"], 6)
            assert not eval_at(word, len(word), Next(FULL, TrueConst()))

    def test_desugar_preserves_semantics(self):
        rng = random.Random(7)
        alphabet = ["a", "b", "c"]
        for _ in range(100):
            formula = random_formula(rng, alphabet, 3)
            word = random_word(rng, alphabet, 6)
            core = desugar(formula, alphabet)
            for position in range(1, len(word) + 1):
                assert eval_at(word, position, formula) == eval_at(word, position, core)

    def test_table_evaluator_matches_naive_reference(self):
        rng = random.Random(8)
        alphabet = ["a", "b", "c"]
        for _ in range(200):
            formula = random_formula(rng, alphabet, 4)
            word = random_word(rng, alphabet, 6)
            for position in range(1, len(word) + 1):
                assert eval_at(word, position, formula) == naive_eval(
                    word, position, formula
                ), (formula, word, position)


class TestPrefixMonitor:
    def test_never_rejects_a_satisfiable_extension(self):
        # soundness: if a word satisfies the formula, every prefix must be
        # reported as possibly satisfying
        rng = random.Random(9)
        alphabet = ["a", "b"]
        for _ in range(300):
            formula = random_formula(rng, alphabet, 3)
            word = random_word(rng, alphabet, 5)
            if not satisfies(word, formula):
                continue
            for cut in range(1, len(word) + 1):
                prefix = TimedWord(word.events[:cut])
                assert prefix_may_satisfy(prefix, formula), (formula, word, cut)

    def test_definitive_failure_detected(self):
        formula = And(Atom("a"), Globally(FULL, Atom("a")))
        assert not prefix_may_satisfy(W(("b", 0)), formula)
        assert not prefix_may_satisfy(W(("a", 0), ("b", 1)), formula)
        assert prefix_may_satisfy(W(("a", 0), ("a", 1)), formula)
