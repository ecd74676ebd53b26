"""
Command implementations for the energy game CLI
Each command returns an exit code; errors map onto the 0/2/3/4 ladder in run_command
"""
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO

from engine.arena import (
    Arena,
    checked_neg,
    dualize,
    generate_simple,
    is_finite,
    load_arena,
    serialize,
)
from engine.errors import (
    ArenaError,
    InfeasibleParametersError,
    InternalInconsistencyError,
    IterationCapExceededError,
    PotentialError,
    WeightOverflowError,
)
from engine.esl import (
    NonTermination,
    SolveOptions,
    SolveReport,
    Verdict,
    solve,
    solve_alternating,
    solve_dual,
)
from engine.export import (
    export_report_to_csv,
    nontermination_to_dict,
    report_to_dict,
    serialize_trace,
    sweep_to_dataframe,
    to_ndjson_line,
    write_ndjson,
)
from engine.oracle import brute_force_applicable, brute_force_en, value_iteration_en
from engine.settings import Settings
from engine.sweep import SweepConfig, run_checks, run_sweep

from .formatting import format_check, format_nontermination, format_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INTERNAL = 3
EXIT_DISAGREE = 4

VARIANTS = ("esl", "dual", "alternating")
FORMATS = ("text", "ndjson")
REQUIRED_FIELDS = {
    "solve": ("input",),
    "gen": ("seed", "n", "m", "W"),
    "check": ("input",),
    "sweep": ("seed",),
}


@dataclass
class RunConfig:
    """Everything one CLI invocation needs"""
    command: str
    input: Optional[Path] = None
    variant: str = "esl"
    trace: bool = False
    auto_lift: bool = False
    oracle_check: bool = False
    output_format: str = "text"
    cap: Optional[int] = None
    csv: Optional[Path] = None
    output: Optional[Path] = None
    # gen / sweep
    seed: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    W: Optional[int] = None
    simple: str = "lift"
    family: str = "desk"
    count: int = 1000
    cap_factor: int = 10
    timings: bool = False

    def missing_fields(self) -> List[str]:
        return [name for name in REQUIRED_FIELDS.get(self.command, ()) if getattr(self, name) is None]


def oracle_disagreements(arena: Arena, report: SolveReport, settings: Settings) -> List[str]:
    """
    Compare a report with value iteration (and brute force when small enough)

    Dual reports are checked against the oracles on the dual arena.
    """
    dual = report.variant == "dual"
    target = dualize(arena) if dual else arena
    oracles = {"value iteration": value_iteration_en(target)}
    if brute_force_applicable(target, settings.brute_force_limit):
        oracles["brute force"] = brute_force_en(target, settings.brute_force_limit)

    problems = []
    for name, expected in oracles.items():
        for v in range(arena.n):
            if report.en_values is None:
                finite = report.threshold[v] in (Verdict.MP_NONPOSITIVE, Verdict.MP_NONNEGATIVE)
                if finite != is_finite(expected[v]):
                    problems.append(f"{name}: vertex {v} verdict {report.threshold[v].value}")
                continue
            claimed = checked_neg(report.en_values[v]) if dual else report.en_values[v]
            if claimed != expected[v]:
                problems.append(f"{name}: vertex {v} solver {claimed} oracle {expected[v]}")
    return problems


def cmd_solve(config: RunConfig, settings: Settings, out: TextIO) -> int:
    arena = load_arena(config.input, allow_negative_infinity=True)
    options = SolveOptions.from_settings(settings, auto_lift=config.auto_lift)

    if config.variant == "dual":
        result = solve_dual(arena, options)
    elif config.variant == "alternating":
        result = solve_alternating(arena, config.cap, options)
    else:
        result = solve(arena, options)

    if isinstance(result, NonTermination):
        if config.output_format == "ndjson":
            out.write(to_ndjson_line(nontermination_to_dict(result)) + "\n")
        else:
            out.write(format_nontermination(result, config.trace))
        return EXIT_OK

    problems: List[str] = []
    if config.oracle_check:
        problems = oracle_disagreements(arena, result, settings)

    if config.output_format == "ndjson":
        record = report_to_dict(result, trace=config.trace)
        if config.oracle_check:
            record["oracle"] = "disagree" if problems else "agree"
            record["oracle_problems"] = problems
        out.write(to_ndjson_line(record) + "\n")
    else:
        out.write(format_report(result, arena, trace=config.trace))
        if config.oracle_check:
            out.writelines(f"{problem}\n" for problem in problems)
            out.write("oracle: " + ("disagree" if problems else "agree") + "\n")

    if config.csv is not None:
        export_report_to_csv(result, arena, str(config.csv))
        logger.info("wrote per-vertex results to %s", config.csv)

    return EXIT_DISAGREE if problems else EXIT_OK


def cmd_gen(config: RunConfig, settings: Settings, out: TextIO) -> int:
    arena = generate_simple(
        config.n,
        config.m,
        config.W,
        config.seed,
        method=config.simple,
        exact_limit=settings.exact_simplicity_limit,
    )
    header = (
        f"# n={config.n} m={config.m} W={config.W} seed={config.seed} simple={config.simple}\n"
    )
    text = header + serialize(arena)
    if config.output is not None:
        Path(config.output).write_text(text, encoding="utf-8")
        logger.info("wrote arena to %s", config.output)
    else:
        out.write(text)
    return EXIT_OK


def cmd_check(config: RunConfig, settings: Settings, out: TextIO) -> int:
    arena = load_arena(config.input, allow_negative_infinity=True)
    sweep_config = SweepConfig.from_settings(settings, alternating_cap_factor=config.cap_factor)
    record = run_checks(arena, sweep_config)
    if config.output_format == "ndjson":
        out.write(to_ndjson_line(record.to_dict()) + "\n")
    else:
        out.write(format_check(record))
    return EXIT_DISAGREE if record.disagreement else EXIT_OK


def cmd_sweep(config: RunConfig, settings: Settings, out: TextIO) -> int:
    sweep_config = SweepConfig.from_settings(
        settings,
        family=config.family,
        count=config.count,
        seed=config.seed,
        alternating_cap_factor=config.cap_factor,
        timings=config.timings,
    )
    records: List[Dict] = []

    def collect():
        for record in run_sweep(sweep_config):
            records.append(record)
            yield record

    write_ndjson(collect(), out)
    if config.csv is not None:
        sweep_to_dataframe(records).to_csv(config.csv, index=False)
        logger.info("wrote sweep table to %s", config.csv)

    summary = records[-1]
    return EXIT_DISAGREE if summary["disagreements"] else EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig, Settings, TextIO], int]] = {
    "solve": cmd_solve,
    "gen": cmd_gen,
    "check": cmd_check,
    "sweep": cmd_sweep,
}


def run_command(
    config: RunConfig,
    settings: Settings,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
) -> int:
    """Dispatch a command and map engine errors onto exit codes"""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if config.command not in COMMANDS:
            raise InfeasibleParametersError(f"unknown command {config.command!r}")
        missing = config.missing_fields()
        if missing:
            raise InfeasibleParametersError(f"{config.command} needs {', '.join(missing)}")
        return COMMANDS[config.command](config, settings, out)
    except (ArenaError, PotentialError, InfeasibleParametersError, WeightOverflowError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except InternalInconsistencyError as exc:
        err.write(f"internal error: {exc}\n")
        if isinstance(exc, IterationCapExceededError):
            err.write(serialize_trace(exc.trace))
        return EXIT_INTERNAL
