"""
Independent ground truth for energy games
Valuations of ultimately periodic plays, value iteration for En, brute-force
enumeration of positional strategies, and one-player strategy verification
"""
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .arena import INF, NEG_INF, Arena, ExtInt, Owner, Strategy
from .errors import ArenaValidationError, BruteForceLimitError, InfeasibleParametersError
from .settings import DEFAULT_BRUTE_FORCE_LIMIT

logger = logging.getLogger(__name__)

# float64 holds every integer below this exactly
EXACT_FLOAT_LIMIT = 2 ** 53

Value = Union[ExtInt, Fraction]


class Valuation(Enum):
    """Valuations of infinite weight sequences"""
    MP = "MP"
    EN = "En"
    EN_PLUS = "En+"
    EN_MINUS = "En-"


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    """The weight word prefix . cycle^omega"""
    prefix: Tuple[ExtInt, ...]
    cycle: Tuple[ExtInt, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        if any(w == NEG_INF for w in self.prefix + self.cycle):
            raise ValueError("weights must be finite or +inf")


def evaluate(word: UltimatelyPeriodicWord, which: Valuation) -> Value:
    """
    Value of an ultimately periodic word

    MP is the cycle mean. En is inf for a positive (or infinite) cycle and
    otherwise the max prefix sum over prefix plus one cycle copy, which is
    enough since further copies add a non-positive amount. En+ sums up to the
    first negative weight, En- up to the first positive one.
    """
    cycle_has_inf = any(w == INF for w in word.cycle)
    cycle_sum = INF if cycle_has_inf else sum(word.cycle)
    weights = word.prefix + word.cycle

    if which is Valuation.MP:
        if cycle_has_inf:
            return INF
        return Fraction(cycle_sum, len(word.cycle))

    if which is Valuation.EN:
        running = 0
        best = 0
        for w in weights:
            if w == INF:
                return INF
            running += w
            best = max(best, running)
        return INF if cycle_sum > 0 else best

    if which is Valuation.EN_PLUS:
        running = 0
        for w in weights:
            if w < 0:
                return running
            if w == INF:
                return INF
            running += w
        # the cycle has no negative weight
        return running if cycle_sum == 0 else INF

    if which is Valuation.EN_MINUS:
        running = 0
        for w in weights:
            if w > 0:
                return running
            running += w
        return running if cycle_sum == 0 else NEG_INF

    raise ValueError(f"unknown valuation {which!r}")


# =============================================================================
# VALUE ITERATION
# =============================================================================

def value_iteration_en(arena: Arena) -> List[ExtInt]:
    """
    Least fixed point of the energy lifting operator

    f(v) = min (Min) / max (Max) over edges v -> v' of max(0, w + f(v')),
    iterated in full rounds from f = 0 until a round changes nothing. Values
    above (n - 1) * W are reported as inf; one unit of slack separates "at the
    bound" from "past it".
    """
    n = arena.n
    cap = (n - 1) * arena.W + 1
    if cap >= EXACT_FLOAT_LIMIT:
        raise InfeasibleParametersError(f"value-iteration cap {cap} is too large for the oracle")

    src = np.array([e.src for e in arena.edges], dtype=np.int64)
    dst = np.array([e.dst for e in arena.edges], dtype=np.int64)
    weights = np.array([float(e.weight) for e in arena.edges], dtype=np.float64)
    negative_infinite = np.isneginf(weights)
    is_min = np.array([o is Owner.MIN for o in arena.owners], dtype=bool)

    f = np.zeros(n, dtype=np.float64)
    rounds = 0
    while True:
        rounds += 1
        with np.errstate(invalid="ignore"):
            candidates = weights + f[dst]
        candidates = np.where(negative_infinite, 0.0, np.maximum(candidates, 0.0))
        candidates = np.where(candidates > cap, np.inf, candidates)

        lowest = np.full(n, np.inf)
        np.minimum.at(lowest, src, candidates)
        highest = np.zeros(n)
        np.maximum.at(highest, src, candidates)

        updated = np.where(is_min, lowest, highest)
        if np.array_equal(updated, f):
            break
        f = updated

    logger.debug("value iteration on n=%d converged after %d rounds", n, rounds)
    return [INF if math.isinf(x) else int(x) for x in f.tolist()]


# =============================================================================
# BRUTE FORCE
# =============================================================================

def _lasso(arena: Arena, edge_choice: Sequence[int], start: int) -> UltimatelyPeriodicWord:
    first_visit: Dict[int, int] = {}
    weights: List[ExtInt] = []
    v = start
    while v not in first_visit:
        first_visit[v] = len(weights)
        edge = arena.edges[edge_choice[v]]
        weights.append(edge.weight)
        v = edge.dst
    k = first_visit[v]
    return UltimatelyPeriodicWord(tuple(weights[:k]), tuple(weights[k:]))


def induced_lasso(
    arena: Arena,
    min_strategy: Strategy,
    max_strategy: Strategy,
    start: int,
) -> UltimatelyPeriodicWord:
    """The ultimately periodic weight word of the play both strategies induce"""
    edge_choice = [0] * arena.n
    for strategy in (min_strategy, max_strategy):
        for v, index in strategy.choice.items():
            edge_choice[v] = index
    return _lasso(arena, edge_choice, start)


def strategy_pair_count(arena: Arena) -> int:
    return math.prod(len(out) for out in arena.out_edges)


def brute_force_applicable(arena: Arena, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> bool:
    """Strategy enumeration is within `limit` and no weight is -inf"""
    return strategy_pair_count(arena) <= limit and NEG_INF not in arena.weights


def brute_force_value(
    arena: Arena,
    which: Valuation,
    limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
) -> List[Value]:
    """
    min over positional Min strategies of max over positional Max strategies

    Positional determinacy makes this the game value for every valuation here.

    Raises:
        BruteForceLimitError: more than `limit` strategy pairs
    """
    pairs = strategy_pair_count(arena)
    if pairs > limit:
        raise BruteForceLimitError(pairs, limit)

    min_vertices = arena.vertices_of(Owner.MIN)
    max_vertices = arena.vertices_of(Owner.MAX)
    min_options = [arena.out_edges[v] for v in min_vertices]
    max_options = [arena.out_edges[v] for v in max_vertices]

    best: List[Optional[Value]] = [None] * arena.n
    edge_choice = [0] * arena.n
    for min_combo in itertools.product(*min_options):
        for v, index in zip(min_vertices, min_combo):
            edge_choice[v] = index
        worst: List[Optional[Value]] = [None] * arena.n
        for max_combo in itertools.product(*max_options):
            for v, index in zip(max_vertices, max_combo):
                edge_choice[v] = index
            for v in range(arena.n):
                value = evaluate(_lasso(arena, edge_choice, v), which)
                if worst[v] is None or value > worst[v]:
                    worst[v] = value
        for v in range(arena.n):
            if best[v] is None or worst[v] < best[v]:
                best[v] = worst[v]
    return best


def brute_force_en(arena: Arena, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> List[ExtInt]:
    """Energy values by strategy enumeration"""
    return brute_force_value(arena, Valuation.EN, limit)


def brute_force_mp(arena: Arena, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> List[Value]:
    """Exact mean-payoff values (fractions) by strategy enumeration"""
    return brute_force_value(arena, Valuation.MP, limit)


def check_threshold_equivalence(
    arena: Arena,
    en_values: Sequence[ExtInt],
    mp_values: Sequence[Value],
) -> List[str]:
    """MP <= 0  <=>  En < inf  <=>  En <= (n - 1) * W, vertex by vertex"""
    bound = (arena.n - 1) * arena.W
    violations = []
    for v in range(arena.n):
        nonpositive = mp_values[v] <= 0
        finite = en_values[v] != INF
        bounded = en_values[v] <= bound
        if not nonpositive == finite == bounded:
            violations.append(
                f"vertex {v}: MP={mp_values[v]} En={en_values[v]} bound={bound}"
            )
    return violations


# =============================================================================
# STRATEGY VERIFICATION
# =============================================================================

@dataclass(frozen=True)
class StrategyCounterexample:
    """A vertex where a strategy misses its claimed value"""
    vertex: int
    claimed: ExtInt
    achieved: ExtInt


def restrict_to_strategy(arena: Arena, strategy: Strategy) -> Arena:
    """One-player arena: the strategy's edges at its vertices, all edges elsewhere"""
    kept = [
        edge for index, edge in enumerate(arena.edges)
        if arena.owners[edge.src] is not strategy.player or strategy.choice.get(edge.src) == index
    ]
    return Arena(arena.owners, tuple(kept))


def verify_strategy(
    arena: Arena,
    strategy: Strategy,
    claimed_values: Union[Mapping[int, ExtInt], Sequence[ExtInt]],
) -> List[StrategyCounterexample]:
    """
    Check that a strategy achieves the claimed values against every opponent

    The opponent keeps all edges; value iteration solves the resulting
    one-player game. A Min strategy must achieve <= claimed, a Max strategy >=.

    Returns:
        Counterexamples; empty means the claims are confirmed
    """
    violations = strategy.validate_for(arena)
    if violations:
        raise ArenaValidationError(violations)

    if isinstance(claimed_values, Mapping):
        claims = dict(claimed_values)
    else:
        claims = dict(enumerate(claimed_values))

    achieved = value_iteration_en(restrict_to_strategy(arena, strategy))
    counterexamples = []
    for v, claimed in sorted(claims.items()):
        if claimed is None:
            continue
        ok = achieved[v] <= claimed if strategy.player is Owner.MIN else achieved[v] >= claimed
        if not ok:
            counterexamples.append(StrategyCounterexample(v, claimed, achieved[v]))
    return counterexamples
