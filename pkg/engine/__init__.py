"""
Energy Game Engine Package
Exact energy values and mean-payoff thresholds of two-player weighted games
"""

# Errors
from .errors import (
    EnergyGameError,
    ArenaError,
    ArenaParseError,
    ArenaValidationError,
    NonSimpleArenaError,
    WeightOverflowError,
    InfeasibleParametersError,
    PotentialError,
    BruteForceLimitError,
    InternalInconsistencyError,
    InvariantViolationError,
    IterationCapExceededError,
    StrategyVerificationError,
)

# Settings
from .settings import Settings, load_settings

# Arena model
from .arena import (
    INF,
    NEG_INF,
    Owner,
    Edge,
    Arena,
    Strategy,
    build_arena,
    validate,
    ensure_valid,
    parse,
    serialize,
    load_arena,
    save_arena,
    lift_simplicity,
    dualize,
    find_zero_cycle,
    is_simple,
    generate_random,
    generate_simple,
)

# Positive-energy Dijkstra
from .dijkstra import (
    DijkstraStats,
    EnPlusResult,
    seed_N,
    compute_en_plus,
    check_fixed_point,
    plain_dijkstra_to_targets,
)

# Potentials
from .potential import (
    Potential,
    PotentialMode,
    modified_weight,
    apply,
    compose,
    path_sum,
    serialize_potential,
)

# Solvers
from .esl import (
    Verdict,
    SolveOptions,
    SolveReport,
    IterationRecord,
    NonTermination,
    solve,
    solve_dual,
    solve_alternating,
    extract_strategies,
    vertex_becomes_infinite,
)

# Oracles
from .oracle import (
    Valuation,
    UltimatelyPeriodicWord,
    StrategyCounterexample,
    evaluate,
    value_iteration_en,
    induced_lasso,
    brute_force_value,
    brute_force_applicable,
    brute_force_en,
    brute_force_mp,
    verify_strategy,
)

# Instance families and sweeps
from .scenarios import InstanceFamily, InstanceSpec, load_families, get_family
from .sweep import SweepConfig, InstanceRecord, run_checks, run_instance, run_sweep, summarize

# Export
from .export import (
    report_to_dict,
    write_ndjson,
    serialize_trace,
    report_to_dataframe,
    export_report_to_csv,
    sweep_to_dataframe,
)

__all__ = [
    # Errors
    "EnergyGameError",
    "ArenaError",
    "ArenaParseError",
    "ArenaValidationError",
    "NonSimpleArenaError",
    "WeightOverflowError",
    "InfeasibleParametersError",
    "PotentialError",
    "BruteForceLimitError",
    "InternalInconsistencyError",
    "InvariantViolationError",
    "IterationCapExceededError",
    "StrategyVerificationError",
    # Settings
    "Settings",
    "load_settings",
    # Arena
    "INF",
    "NEG_INF",
    "Owner",
    "Edge",
    "Arena",
    "Strategy",
    "build_arena",
    "validate",
    "ensure_valid",
    "parse",
    "serialize",
    "load_arena",
    "save_arena",
    "lift_simplicity",
    "dualize",
    "find_zero_cycle",
    "is_simple",
    "generate_random",
    "generate_simple",
    # Dijkstra
    "DijkstraStats",
    "EnPlusResult",
    "seed_N",
    "compute_en_plus",
    "check_fixed_point",
    "plain_dijkstra_to_targets",
    # Potentials
    "Potential",
    "PotentialMode",
    "modified_weight",
    "apply",
    "compose",
    "path_sum",
    "serialize_potential",
    # Solvers
    "Verdict",
    "SolveOptions",
    "SolveReport",
    "IterationRecord",
    "NonTermination",
    "solve",
    "solve_dual",
    "solve_alternating",
    "extract_strategies",
    "vertex_becomes_infinite",
    # Oracles
    "Valuation",
    "UltimatelyPeriodicWord",
    "StrategyCounterexample",
    "evaluate",
    "value_iteration_en",
    "induced_lasso",
    "brute_force_value",
    "brute_force_applicable",
    "brute_force_en",
    "brute_force_mp",
    "verify_strategy",
    # Families and sweeps
    "InstanceFamily",
    "InstanceSpec",
    "load_families",
    "get_family",
    "SweepConfig",
    "InstanceRecord",
    "run_checks",
    "run_instance",
    "run_sweep",
    "summarize",
    # Export
    "report_to_dict",
    "write_ndjson",
    "serialize_trace",
    "report_to_dataframe",
    "export_report_to_csv",
    "sweep_to_dataframe",
]
