import math
import time

import pytest
from hypothesis import given, settings

from arena_strategies import arenas
from engine.arena import INF, NEG_INF, build_arena, checked_neg, dualize
from engine.dijkstra import compute_en_plus
from engine.errors import (
    InfeasibleParametersError,
    IterationCapExceededError,
    NonSimpleArenaError,
    PotentialError,
)
from engine.esl import (
    NonTermination,
    SolveOptions,
    SolveReport,
    Verdict,
    extract_strategies,
    iteration_cap,
    solve,
    solve_alternating,
    solve_dual,
    vertex_becomes_infinite,
)
from engine.oracle import brute_force_mp, value_iteration_en, verify_strategy
from engine.potential import Potential, apply, compose
from engine.scenarios import get_doubling_series, get_family


class TestSolve:
    def test_g3(self, g3):
        report = solve(g3)
        assert report.en_values == [2, 5, 0]
        assert report.threshold == [Verdict.MP_NONPOSITIVE] * 3
        assert report.iterations == 2
        assert dict(report.min_strategy.choice) == {0: 0, 2: 4}
        assert dict(report.max_strategy.choice) == {1: 2}
        assert report.verified
        assert report.per_iteration[0].phi.values == (2, 5, 0)
        assert report.per_iteration[1].phi.values == (0, 0, 0)

    def test_min_self_loop(self, min_loop):
        report = solve(min_loop)
        assert report.en_values == [0]
        assert report.iterations == 1

    def test_max_self_loop(self, max_loop):
        report = solve(max_loop)
        assert report.en_values == [INF]
        assert report.threshold == [Verdict.MP_POSITIVE]
        assert report.iterations == 2
        assert report.per_iteration[0].newly_infinite == frozenset({0})
        assert report.infinite_vertices() == [0]

    def test_all_infinite(self):
        arena = build_arena(
            ["MIN", "MAX", "MIN"],
            [(0, 2, 2), (0, 1, 0), (1, 2, 5), (1, 0, 1), (2, 0, -1)],
        )
        report = solve(arena)
        assert report.en_values == [INF, INF, INF]
        assert report.threshold == [Verdict.MP_POSITIVE] * 3

    def test_max_prefers_negative_edge_into_costly_vertex(self):
        # both Max edges are negative; only 1->0 (-1) keeps a positive requirement
        arena = build_arena(
            ["MIN", "MAX", "MIN"],
            [(0, 2, 3), (1, 0, -5), (1, 0, -1), (2, 0, -5)],
        )
        report = solve(arena)
        assert report.en_values == [3, 2, 0] == value_iteration_en(arena)
        assert dict(report.max_strategy.choice) == {1: 2}
        assert report.verified
        assert verify_strategy(arena, report.max_strategy, report.en_values) == []

    def test_negative_infinite_weight(self):
        arena = build_arena(["MAX", "MIN"], [(0, 1, 4), (1, 0, NEG_INF)])
        assert solve(arena).en_values == [4, 0]

    def test_non_simple(self, zero_cycle):
        with pytest.raises(NonSimpleArenaError):
            solve(zero_cycle)

    def test_auto_lift(self, zero_cycle):
        report = solve(zero_cycle, SolveOptions(auto_lift=True))
        assert report.lifted
        assert report.threshold_only
        assert report.en_values is None
        assert report.threshold == [Verdict.MP_NONPOSITIVE] * 2

    def test_iteration_cap(self, g3):
        with pytest.raises(IterationCapExceededError) as excinfo:
            solve(g3, SolveOptions(max_iterations=1))
        assert excinfo.value.cap == 1
        assert len(excinfo.value.trace) == 1

    def test_warm_start(self, g3):
        warm = Potential((2, 5, 0), sound=True)
        report = solve(g3, SolveOptions(initial_potential=warm))
        assert report.en_values == [2, 5, 0]
        assert report.iterations == 1

    def test_warm_start_length(self, g3):
        with pytest.raises(PotentialError):
            solve(g3, SolveOptions(initial_potential=Potential.zero(2)))

    def test_verification_skipped_above_limit(self, g3, caplog):
        report = solve(g3, SolveOptions(verify_limit=2))
        assert not report.verified
        assert "skipping strategy verification" in caplog.text

    def test_cap_formula(self, g3):
        assert iteration_cap(g3) == 9 * 5 + 3
        assert iteration_cap(build_arena(["MIN"], [(0, 0, 0)])) == 2


def _cumulative(report):
    total = Potential.zero(report.n)
    for record in report.per_iteration:
        total = compose(total, record.phi)
        yield record, total


@given(arenas(max_n=5))
@settings(max_examples=300, deadline=None)
def test_solve_matches_value_iteration(arena):
    report = solve(arena)
    en = value_iteration_en(arena)
    assert report.en_values == en
    assert report.verified
    assert report.iterations <= iteration_cap(arena)

    bound = (arena.n - 1) * arena.W
    assert all(x <= bound for x in en if x != INF)

    # the final modified game only has values 0 and inf
    final = value_iteration_en(apply(arena, report.total_potential))
    assert final == [0 if x != INF else INF for x in en]

    previous_seed = None
    for record, total in _cumulative(report):
        assert all(a <= b for a, b in zip(total, en))
        if previous_seed is not None:
            assert record.seed <= previous_seed
        previous_seed = record.seed


@given(arenas(max_n=4, max_out=2))
@settings(max_examples=150, deadline=None)
def test_verdicts_match_mean_payoff(arena):
    report = solve(arena)
    mp = brute_force_mp(arena)
    assert [v is Verdict.MP_NONPOSITIVE for v in report.threshold] == [x <= 0 for x in mp]


def test_extract_strategies_g3(g3):
    min_strategy, max_strategy = extract_strategies(g3, Potential((2, 5, 0)))
    assert dict(min_strategy.choice) == {0: 0, 2: 4}
    assert dict(max_strategy.choice) == {1: 2}
    assert verify_strategy(g3, min_strategy, [2, 5, 0]) == []
    assert verify_strategy(g3, max_strategy, [2, 5, 0]) == []


class TestDual:
    def test_g3(self, g3):
        report = solve_dual(g3)
        assert report.variant == "dual"
        assert report.en_values == [NEG_INF] * 3
        assert report.threshold == [Verdict.MP_NEGATIVE] * 3

    def test_verdict_duality(self):
        for verdict in Verdict:
            assert verdict.dual.dual is verdict

    @given(arenas(max_n=5))
    @settings(max_examples=150, deadline=None)
    def test_matches_negated_dual_energy(self, arena):
        report = solve_dual(arena)
        assert report.en_values == [checked_neg(x) for x in value_iteration_en(dualize(arena))]
        assert all(x == NEG_INF or x <= 0 for x in report.en_values)


class TestAlternating:
    def test_g3(self, g3):
        report = solve_alternating(g3)
        assert isinstance(report, SolveReport)
        assert report.variant == "alternating"
        assert report.en_values == [2, 5, 0]
        assert report.iterations == 3
        assert report.recovery_iterations == 2
        assert [record.step.value for record in report.per_iteration] == ["En+", "En-", "En+"]

    def test_cap_reached(self, g3):
        result = solve_alternating(g3, cap=1)
        assert isinstance(result, NonTermination)
        assert result.cap == 1
        assert result.iterations == 1

    def test_bad_cap(self, g3):
        with pytest.raises(InfeasibleParametersError):
            solve_alternating(g3, cap=0)

    def test_max_self_loop(self, max_loop):
        report = solve_alternating(max_loop)
        assert report.en_values == [INF]
        # En+ sends the vertex to inf, then one En- step and a stopping En+ step
        assert report.iterations == 3
        assert report.recovery_iterations == 1
        assert [record.step.value for record in report.per_iteration] == ["En+", "En-", "En+"]
        assert dict(report.max_strategy.choice) == {0: 0}

    @given(arenas(max_n=5))
    @settings(max_examples=200, deadline=None)
    def test_terminating_runs_agree(self, arena):
        result = solve_alternating(arena)
        if isinstance(result, SolveReport):
            assert result.en_values == value_iteration_en(arena)
            assert result.verified


def test_vertex_becomes_infinite():
    before = Potential((0, INF, 3))
    phi = Potential((INF, 0, 2))
    assert vertex_becomes_infinite(before, phi) == frozenset({0})


@pytest.mark.slow
def test_performance_smoke():
    spec = get_family("perf").draw(seed=1, index=0)
    arena = spec.generate()
    assert (arena.n, arena.m) == (10_000, 50_000)
    started = time.perf_counter()
    report = solve(arena, SolveOptions(verify=False, check_invariants=False))
    elapsed = time.perf_counter() - started
    assert len(report.en_values) == arena.n
    assert elapsed < 10


@pytest.mark.slow
def test_heap_operations_grow_subquadratically():
    counts = []
    for family in get_doubling_series(start=1250, steps=3):
        arena = family.draw(seed=0, index=0).generate()
        stats = compute_en_plus(arena).stats
        assert stats.heap_operations <= arena.m + arena.n * math.ceil(math.log2(arena.n + 1))
        counts.append(max(stats.heap_operations, 1))
    # n grows fourfold across the series
    assert counts[-1] / counts[0] < 16
