from fractions import Fraction

import pytest
from hypothesis import given, settings

from arena_strategies import arenas, words
from engine.arena import INF, NEG_INF, Owner, Strategy, build_arena
from engine.errors import ArenaValidationError, BruteForceLimitError, InfeasibleParametersError
from engine.oracle import (
    StrategyCounterexample,
    UltimatelyPeriodicWord,
    Valuation,
    brute_force_applicable,
    brute_force_en,
    brute_force_mp,
    check_threshold_equivalence,
    evaluate,
    induced_lasso,
    restrict_to_strategy,
    strategy_pair_count,
    value_iteration_en,
    verify_strategy,
)


class TestEvaluate:
    @pytest.mark.parametrize("prefix, cycle, mp, en, en_plus, en_minus", [
        ((), (-1,), Fraction(-1), 0, 0, NEG_INF),
        ((3,), (-1,), Fraction(-1), 3, 3, 0),
        ((), (1,), Fraction(1), INF, INF, 0),
        ((2, -5), (0,), Fraction(0), 2, 2, 0),
        ((), (2, -3), Fraction(-1, 2), 2, 2, 0),
        ((1,), (-2, 3), Fraction(1, 2), INF, 1, 0),
        ((), (INF,), INF, INF, INF, 0),
        ((-2,), (0,), Fraction(0), 0, 0, -2),
    ])
    def test_examples(self, prefix, cycle, mp, en, en_plus, en_minus):
        word = UltimatelyPeriodicWord(prefix, cycle)
        assert evaluate(word, Valuation.MP) == mp
        assert evaluate(word, Valuation.EN) == en
        assert evaluate(word, Valuation.EN_PLUS) == en_plus
        assert evaluate(word, Valuation.EN_MINUS) == en_minus

    def test_word_checks(self):
        with pytest.raises(ValueError):
            UltimatelyPeriodicWord((1,), ())
        with pytest.raises(ValueError):
            UltimatelyPeriodicWord((), (NEG_INF,))

    @given(words())
    @settings(max_examples=300, deadline=None)
    def test_valuation_order(self, word):
        en = evaluate(word, Valuation.EN)
        assert evaluate(word, Valuation.EN_MINUS) <= 0 <= evaluate(word, Valuation.EN_PLUS) <= en
        assert (evaluate(word, Valuation.MP) <= 0) == (en != INF)


class TestValueIteration:
    def test_g3(self, g3):
        assert value_iteration_en(g3) == [2, 5, 0]

    def test_self_loops(self, min_loop, max_loop):
        assert value_iteration_en(min_loop) == [0]
        assert value_iteration_en(max_loop) == [INF]

    def test_infinite_weights(self):
        assert value_iteration_en(build_arena(["MAX"], [(0, 0, NEG_INF)])) == [0]
        assert value_iteration_en(build_arena(["MIN", "MIN"], [(0, 1, INF), (1, 1, 0)])) == [INF, 0]

    def test_cap_guard(self):
        arena = build_arena(["MIN", "MIN", "MIN"], [(0, 1, 2 ** 52), (1, 2, 0), (2, 0, 0)])
        with pytest.raises(InfeasibleParametersError):
            value_iteration_en(arena)


class TestBruteForce:
    def test_pair_count(self, g3):
        assert strategy_pair_count(g3) == 4

    def test_limit(self, g3):
        with pytest.raises(BruteForceLimitError) as excinfo:
            brute_force_en(g3, limit=3)
        assert excinfo.value.pairs == 4

    def test_applicable(self, g3):
        assert brute_force_applicable(g3)
        assert not brute_force_applicable(g3, limit=3)
        assert not brute_force_applicable(build_arena(["MAX"], [(0, 0, NEG_INF)]))

    def test_g3_mean_payoff(self, g3):
        assert all(x < 0 for x in brute_force_mp(g3))

    @given(arenas(max_n=4, max_out=2, simple=False))
    @settings(max_examples=150, deadline=None)
    def test_matches_value_iteration(self, arena):
        assert brute_force_en(arena) == value_iteration_en(arena)

    @given(arenas(max_n=4, max_out=2, simple=False))
    @settings(max_examples=150, deadline=None)
    def test_threshold_equivalence(self, arena):
        assert check_threshold_equivalence(arena, value_iteration_en(arena), brute_force_mp(arena)) == []

    def test_threshold_violation(self, g3):
        violations = check_threshold_equivalence(g3, [2, 5, 0], [Fraction(1), 0, 0])
        assert len(violations) == 1
        assert violations[0].startswith("vertex 0:")

    def test_induced_lasso(self, g3):
        word = induced_lasso(
            g3, Strategy(Owner.MIN, {0: 0, 2: 4}), Strategy(Owner.MAX, {1: 2}), start=1
        )
        assert word == UltimatelyPeriodicWord((5,), (-3, 2))
        assert evaluate(word, Valuation.EN) == 5


class TestVerifyStrategy:
    def test_optimal_min(self, g3):
        assert verify_strategy(g3, Strategy(Owner.MIN, {0: 0, 2: 4}), {0: 2, 2: 0}) == []

    def test_optimal_max(self, g3):
        assert verify_strategy(g3, Strategy(Owner.MAX, {1: 2}), [2, 5, 0]) == []

    def test_counterexample(self, g3):
        # a->b lets Max repeat the cycle a->b->a of weight 1
        counterexamples = verify_strategy(g3, Strategy(Owner.MIN, {0: 1, 2: 4}), {0: 5})
        assert counterexamples == [StrategyCounterexample(0, 5, INF)]

    def test_max_counterexample(self, g3):
        counterexamples = verify_strategy(g3, Strategy(Owner.MAX, {1: 3}), [None, 5, None])
        assert counterexamples == [StrategyCounterexample(1, 5, 3)]

    def test_invalid_strategy(self, g3):
        with pytest.raises(ArenaValidationError):
            verify_strategy(g3, Strategy(Owner.MIN, {0: 0}), [2, 5, 0])

    def test_restrict(self, g3):
        restricted = restrict_to_strategy(g3, Strategy(Owner.MIN, {0: 0, 2: 4}))
        assert restricted.m == 4
        assert restricted.out_edges[0] == (0,)
