"""
Energy values by iterated positive-energy potential reductions
The main loop, its dual, the alternating En+/En- variant and strategy extraction
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from .arena import (
    INF,
    NEG_INF,
    Arena,
    ExtInt,
    Owner,
    Strategy,
    checked_add,
    checked_neg,
    dualize,
    ensure_valid,
    find_zero_cycle,
    is_finite,
    lift_simplicity,
)
from .dijkstra import DijkstraStats, check_fixed_point, compute_en_plus
from .errors import (
    InfeasibleParametersError,
    InvariantViolationError,
    IterationCapExceededError,
    NonSimpleArenaError,
    PotentialError,
    StrategyVerificationError,
)
from .oracle import Valuation, verify_strategy
from .potential import Potential, PotentialMode, apply, compose
from .settings import DEFAULT_EXACT_SIMPLICITY_LIMIT, DEFAULT_VERIFY_LIMIT, Settings

logger = logging.getLogger(__name__)

# Rough round count (n * (n - 1) * W) above which the value-iteration check is skipped
VERIFY_WORK_LIMIT = 250_000

ALTERNATING_CAP_FACTOR = 10


class Verdict(Enum):
    """Mean-payoff threshold verdict for one vertex"""
    MP_NONPOSITIVE = "MP<=0"
    MP_POSITIVE = "MP>0"
    # verdicts of the dual solve
    MP_NONNEGATIVE = "MP>=0"
    MP_NEGATIVE = "MP<0"

    @property
    def dual(self) -> "Verdict":
        return _DUAL_VERDICTS[self]


_DUAL_VERDICTS = {
    Verdict.MP_NONPOSITIVE: Verdict.MP_NONNEGATIVE,
    Verdict.MP_POSITIVE: Verdict.MP_NEGATIVE,
    Verdict.MP_NONNEGATIVE: Verdict.MP_NONPOSITIVE,
    Verdict.MP_NEGATIVE: Verdict.MP_POSITIVE,
}


@dataclass
class SolveOptions:
    """Knobs for a single solve"""
    check_simplicity: bool = True  # exact zero-cycle search on small arenas before solving
    auto_lift: bool = False  # non-simple input: solve the lifted arena, thresholds only
    exact_simplicity_limit: int = DEFAULT_EXACT_SIMPLICITY_LIMIT
    max_iterations: Optional[int] = None  # None: n^2 * max(W, 1) + n
    check_invariants: bool = True
    verify: bool = True
    verify_limit: int = DEFAULT_VERIFY_LIMIT
    initial_potential: Optional[Potential] = None  # sound warm start
    initial_witness: Optional[Mapping[int, int]] = None  # Max edges at warm-start inf vertices

    @classmethod
    def from_settings(cls, settings: Settings, **overrides) -> "SolveOptions":
        return cls(
            exact_simplicity_limit=settings.exact_simplicity_limit,
            verify_limit=settings.verify_limit,
            **overrides,
        )


@dataclass
class IterationRecord:
    """One potential step: the step potential, the seed set N and the new infinities"""
    index: int
    phi: Potential
    seed: FrozenSet[int]
    newly_infinite: FrozenSet[int]
    stats: DijkstraStats = field(default_factory=DijkstraStats)
    step: Valuation = Valuation.EN_PLUS

    @property
    def seed_size(self) -> int:
        return len(self.seed)

    def summary(self) -> Dict:
        return {
            "iteration": self.index,
            "step": self.step.value,
            **self.phi.summary(),
            "seed_size": self.seed_size,
            "newly_infinite": len(self.newly_infinite),
        }


@dataclass
class SolveReport:
    """Energy values, verdicts and strategies of a finished run"""
    en_values: Optional[List[ExtInt]]  # None for threshold-only (lifted) reports
    threshold: List[Verdict]
    min_strategy: Strategy
    max_strategy: Strategy
    iterations: int
    per_iteration: List[IterationRecord]
    total_potential: Potential
    variant: str = "esl"
    lifted: bool = False
    verified: bool = False
    recovery_iterations: int = 0  # alternating variant only

    @property
    def n(self) -> int:
        return len(self.threshold)

    @property
    def threshold_only(self) -> bool:
        return self.en_values is None

    def infinite_vertices(self) -> List[int]:
        return [v for v, verdict in enumerate(self.threshold)
                if verdict in (Verdict.MP_POSITIVE, Verdict.MP_NEGATIVE)]


@dataclass
class NonTermination:
    """An alternating run that hit its cap; the trace is kept for study"""
    cap: int
    trace: List[IterationRecord]
    total_potential: Potential

    @property
    def iterations(self) -> int:
        return len(self.trace)


def iteration_cap(arena: Arena) -> int:
    return arena.n ** 2 * max(arena.W, 1) + arena.n


def alternating_cap(arena: Arena, factor: int = ALTERNATING_CAP_FACTOR) -> int:
    return factor * arena.n ** 2 * max(arena.W, 1)


def vertex_becomes_infinite(before: Potential, phi: Potential) -> FrozenSet[int]:
    """
    Vertices that a step potential moves from finite to infinite

    Infinity is absorbing under composition, so the union of these sets over a
    run only grows.
    """
    return frozenset(
        v for v in range(len(before)) if is_finite(before[v]) and not is_finite(phi[v])
    )


def _check_simple(arena: Arena, options: SolveOptions):
    if options.check_simplicity and arena.n <= options.exact_simplicity_limit:
        cycle = find_zero_cycle(arena)
        if cycle is not None:
            raise NonSimpleArenaError(cycle)


def _check_step(
    arena: Arena,
    game: Arena,
    values: List[ExtInt],
    seed: FrozenSet[int],
    previous_seed: Optional[FrozenSet[int]],
    total: Potential,
    index: int,
):
    violations = [f"iteration {index}: {v}" for v in check_fixed_point(game, values)]
    if previous_seed is not None and not seed <= previous_seed:
        violations.append(
            f"iteration {index}: seed set grew by {sorted(seed - previous_seed)}"
        )
    bound = arena.n * arena.W
    over = [v for v in total.finite_vertices() if total[v] > bound]
    if over:
        violations.append(f"iteration {index}: potential above n*W={bound} at {sorted(over)}")
    if violations:
        raise InvariantViolationError("; ".join(violations))


def _esl_loop(
    arena: Arena,
    initial: Potential,
    witness: Mapping[int, int],
    cap: int,
    check_invariants: bool,
) -> Tuple[Potential, List[IterationRecord], Dict[int, int]]:
    total = initial
    records: List[IterationRecord] = []
    witness = dict(witness)
    previous_seed: Optional[FrozenSet[int]] = None

    for index in range(cap):
        game = apply(arena, total)
        result = compute_en_plus(game)
        phi = Potential(result.values, PotentialMode.ESL, sound=True)

        newly = vertex_becomes_infinite(total, phi)
        for v in newly:
            if arena.owners[v] is Owner.MAX:
                witness[v] = result.max_strategy.choice[v]

        stopped = phi.is_zero_on(total.finite_vertices())
        updated = compose(total, phi)
        if check_invariants:
            _check_step(arena, game, result.values, result.seed, previous_seed, updated, index)

        records.append(IterationRecord(index, phi, result.seed, newly, result.stats))
        logger.debug(
            "iteration %d: max phi=%d |N|=%d newly infinite=%d",
            index, phi.max_finite(), len(result.seed), len(newly),
        )
        total = updated
        previous_seed = result.seed
        if stopped:
            return total, records, witness

    raise IterationCapExceededError(cap, records)


# =============================================================================
# STRATEGIES
# =============================================================================

def _tight_max_edge(arena: Arena, v: int, values: Potential) -> int:
    best_value: ExtInt = -1
    best_index = -1
    for index in arena.out_edges[v]:
        edge = arena.edges[index]
        if edge.weight == NEG_INF:
            candidate: ExtInt = 0
        else:
            candidate = max(0, checked_add(edge.weight, values[edge.dst]))
        if candidate > best_value:
            best_value, best_index = candidate, index
    return best_index


def extract_strategies(
    arena: Arena,
    total_potential: Potential,
    witness: Optional[Mapping[int, int]] = None,
) -> Tuple[Strategy, Strategy]:
    """
    Positional strategies realising the final potential

    Min, finite vertex: first edge of non-positive modified weight that stays in
    the finite region. Max, finite vertex: first edge maximising
    max(0, w + En(v')). Max, infinite vertex: the Dijkstra witness from the
    iteration that made it infinite (falling back to the first edge into the
    infinite region). Min at infinite vertices plays its first edge.
    """
    witness = witness or {}
    game = apply(arena, total_potential)
    min_choice: Dict[int, int] = {}
    max_choice: Dict[int, int] = {}

    for v in range(arena.n):
        out = arena.out_edges[v]
        finite = is_finite(total_potential[v])
        if arena.owners[v] is Owner.MIN:
            if not finite:
                min_choice[v] = out[0]
                continue
            index = next(
                (i for i in out
                 if game.edges[i].weight <= 0 and is_finite(total_potential[game.edges[i].dst])),
                None,
            )
            if index is None:
                raise InvariantViolationError(f"Min vertex {v} has no non-positive edge in the final game")
            min_choice[v] = index
        elif finite:
            max_choice[v] = _tight_max_edge(arena, v, total_potential)
        elif v in witness:
            max_choice[v] = witness[v]
        else:
            max_choice[v] = next(
                (i for i in out if not is_finite(total_potential[arena.edges[i].dst])), out[0]
            )

    return Strategy(Owner.MIN, min_choice), Strategy(Owner.MAX, max_choice)


def _verify(
    arena: Arena,
    values: List[ExtInt],
    min_strategy: Strategy,
    max_strategy: Strategy,
    options: SolveOptions,
) -> bool:
    if not options.verify:
        return False
    work = arena.n * (arena.n - 1) * arena.W
    if arena.n > options.verify_limit or work > VERIFY_WORK_LIMIT:
        logger.warning(
            "skipping strategy verification for n=%d W=%d (verify limit %d)",
            arena.n, arena.W, options.verify_limit,
        )
        return False
    counterexamples = (
        verify_strategy(arena, min_strategy, values)
        + verify_strategy(arena, max_strategy, values)
    )
    if counterexamples:
        raise StrategyVerificationError(counterexamples)
    return True


# =============================================================================
# SOLVERS
# =============================================================================

def _solve_exact(arena: Arena, options: SolveOptions, variant: str = "esl") -> SolveReport:
    n = arena.n
    initial = options.initial_potential or Potential.zero(n)
    if len(initial) != n:
        raise PotentialError(f"warm-start potential covers {len(initial)} vertices, arena has {n}")
    if initial.mode is not PotentialMode.ESL:
        raise PotentialError("warm-start potential must be an ESL potential")

    cap = options.max_iterations or iteration_cap(arena)
    total, records, witness = _esl_loop(
        arena, initial, options.initial_witness or {}, cap, options.check_invariants
    )

    values = list(total.values)
    threshold = [Verdict.MP_NONPOSITIVE if is_finite(x) else Verdict.MP_POSITIVE for x in values]
    min_strategy, max_strategy = extract_strategies(arena, total, witness)
    verified = _verify(arena, values, min_strategy, max_strategy, options)

    logger.info(
        "solved n=%d m=%d in %d iterations, %d vertices with infinite energy",
        n, arena.m, len(records), sum(1 for x in values if not is_finite(x)),
    )
    return SolveReport(
        en_values=values,
        threshold=threshold,
        min_strategy=min_strategy,
        max_strategy=max_strategy,
        iterations=len(records),
        per_iteration=records,
        total_potential=total,
        variant=variant,
        verified=verified,
    )


def solve(arena: Arena, options: Optional[SolveOptions] = None) -> SolveReport:
    """
    Exact energy values of a simple arena

    Repeats phi_j = En+ of the current modified game, composing each phi_j into
    the total potential, until phi_j is 0 on every vertex with finite total.
    The total is then En on finite vertices; the rest have En = inf.

    Args:
        arena: Valid arena; +inf and -inf weights allowed
        options: SolveOptions; auto_lift turns a non-simple input into a
            threshold-only report on the lifted arena

    Returns:
        SolveReport

    Raises:
        NonSimpleArenaError: zero-sum cycle found and auto_lift is off
        InternalInconsistencyError: a run-time invariant, the iteration cap or
            strategy verification failed
    """
    options = options or SolveOptions()
    ensure_valid(arena, allow_negative_infinity=True)
    try:
        _check_simple(arena, options)
        return _solve_exact(arena, options)
    except NonSimpleArenaError as exc:
        if not options.auto_lift:
            raise
        logger.info("%s; solving the lifted arena for thresholds only", exc)

    lifted = lift_simplicity(arena)
    report = _solve_exact(
        lifted, replace(options, initial_potential=None, initial_witness=None)
    )
    report.en_values = None
    report.lifted = True
    return report


def solve_dual(arena: Arena, options: Optional[SolveOptions] = None) -> SolveReport:
    """
    En- values (in [-inf, 0]) via the primal solver on the dual arena

    Verdicts are MP>=0 / MP<0. The primal Min strategy on the dual arena is the
    Max strategy here and vice versa.
    """
    ensure_valid(arena, allow_negative_infinity=True)
    primal = solve(dualize(arena), options)
    return SolveReport(
        en_values=None if primal.en_values is None else [checked_neg(x) for x in primal.en_values],
        threshold=[verdict.dual for verdict in primal.threshold],
        min_strategy=Strategy(Owner.MIN, primal.max_strategy.choice),
        max_strategy=Strategy(Owner.MAX, primal.min_strategy.choice),
        iterations=primal.iterations,
        per_iteration=primal.per_iteration,
        total_potential=primal.total_potential.negated(),
        variant="dual",
        lifted=primal.lifted,
        verified=primal.verified,
    )


def solve_alternating(
    arena: Arena,
    cap: Optional[int] = None,
    options: Optional[SolveOptions] = None,
) -> Union[SolveReport, NonTermination]:
    """
    Alternate En+ and En- potential steps

    Even steps add En+ of the current game, odd steps add En- (the negated En+
    of the dual game). The run stops at the first En+ step that is 0 wherever
    the total is not +inf; that +inf region is the MP>0 region, and energies on
    the rest come from a solve warm-started with inf there.

    Args:
        cap: Step budget (default 10 * n^2 * max(W, 1))

    Returns:
        SolveReport with variant "alternating", or NonTermination when the cap
        is reached first
    """
    options = options or SolveOptions()
    ensure_valid(arena, allow_negative_infinity=True)
    _check_simple(arena, options)
    if cap is None:
        cap = alternating_cap(arena)
    if cap < 1:
        raise InfeasibleParametersError("alternating cap must be >= 1")

    n = arena.n
    total = Potential.zero(n, PotentialMode.ALTERNATING)
    trace: List[IterationRecord] = []
    witness: Dict[int, int] = {}
    stopped = False

    for index in range(cap):
        game = apply(arena, total)
        if index % 2 == 0:
            step = Valuation.EN_PLUS
            result = compute_en_plus(game)
            phi = Potential(result.values, PotentialMode.ALTERNATING)
            for v in vertex_becomes_infinite(total, phi):
                if arena.owners[v] is Owner.MAX:
                    witness[v] = result.max_strategy.choice[v]
            stopped = phi.is_zero_on(v for v in range(n) if total[v] != INF)
        else:
            step = Valuation.EN_MINUS
            result = compute_en_plus(dualize(game))
            phi = Potential(result.values, PotentialMode.ALTERNATING).negated()

        newly = vertex_becomes_infinite(total, phi)
        trace.append(IterationRecord(index, phi, result.seed, newly, result.stats, step))
        logger.debug("alternating step %d (%s): newly infinite=%d", index, step.value, len(newly))
        total = compose(total, phi)
        if stopped:
            break

    if not stopped:
        logger.info("alternating run reached its cap of %d steps", cap)
        return NonTermination(cap, trace, total)

    positive = total.infinite_vertices()
    warm = Potential(
        tuple(INF if v in positive else 0 for v in range(n)), PotentialMode.ESL, sound=True
    )
    recovery = _solve_exact(
        arena,
        replace(options, initial_potential=warm, initial_witness=witness),
        variant="alternating",
    )
    logger.info(
        "alternating run stopped after %d steps, recovery took %d iterations",
        len(trace), recovery.iterations,
    )
    return replace(
        recovery,
        iterations=len(trace),
        per_iteration=trace,
        recovery_iterations=recovery.iterations,
    )
