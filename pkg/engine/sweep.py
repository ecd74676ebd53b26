"""
Seeded agreement sweeps
Generates a family of random simple arenas and cross-checks every solver
variant against the oracles, one record per instance plus a summary
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd

from .arena import INF, NEG_INF, Arena, dualize, is_finite
from .errors import EnergyGameError
from .esl import NonTermination, SolveOptions, alternating_cap, solve, solve_alternating, solve_dual
from .oracle import (
    brute_force_applicable,
    brute_force_en,
    brute_force_mp,
    check_threshold_equivalence,
    value_iteration_en,
)
from .scenarios import InstanceSpec, get_family
from .settings import (
    DEFAULT_BRUTE_FORCE_LIMIT,
    DEFAULT_EXACT_SIMPLICITY_LIMIT,
    DEFAULT_VERIFY_LIMIT,
    Settings,
)

logger = logging.getLogger(__name__)


@dataclass
class SweepConfig:
    """Configuration for an agreement sweep"""
    family: str = "desk"
    count: int = 1000
    seed: int = 0
    alternating_cap_factor: int = 10
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT
    exact_simplicity_limit: int = DEFAULT_EXACT_SIMPLICITY_LIMIT
    verify_limit: int = DEFAULT_VERIFY_LIMIT
    check_dual: bool = True
    timings: bool = False  # off by default so identical configs give identical streams
    families_path: Optional[Path] = None

    @classmethod
    def from_settings(cls, settings: Settings, **overrides) -> "SweepConfig":
        return cls(
            brute_force_limit=settings.brute_force_limit,
            exact_simplicity_limit=settings.exact_simplicity_limit,
            verify_limit=settings.verify_limit,
            **overrides,
        )


@dataclass
class InstanceRecord:
    """Outcome of every check on one instance"""
    index: int
    seed: Optional[int]  # None for arenas read from a file
    family: str
    n: int
    m: int
    W: int
    esl_iterations: Optional[int] = None
    alternating_iterations: Optional[int] = None
    alternating_terminated: Optional[bool] = None
    recovery_iterations: Optional[int] = None
    agree_value_iteration: Optional[bool] = None
    agree_brute_force: Optional[bool] = None  # None when above the brute-force limit
    threshold_equivalence: Optional[bool] = None
    agree_alternating: Optional[bool] = None
    agree_dual: Optional[bool] = None
    strategies_verified: Optional[bool] = None
    errors: List[str] = field(default_factory=list)
    timings: Optional[Dict[str, float]] = None

    @property
    def disagreement(self) -> bool:
        flags = (
            self.agree_value_iteration,
            self.agree_brute_force,
            self.threshold_equivalence,
            self.agree_alternating,
            self.agree_dual,
        )
        return bool(self.errors) or any(flag is False for flag in flags)

    def to_dict(self) -> Dict:
        record = {"type": "instance", **asdict(self), "disagreement": self.disagreement}
        if self.timings is None:
            del record["timings"]
        return record


def _values_match(left: Sequence, right: Sequence) -> bool:
    return len(left) == len(right) and all(a == b for a, b in zip(left, right))


def run_checks(
    arena: Arena,
    config: SweepConfig,
    record: Optional[InstanceRecord] = None,
) -> InstanceRecord:
    """
    Run every solver variant on one arena and compare with the oracles

    Engine errors propagate; run_instance turns them into record entries.
    """
    if record is None:
        record = InstanceRecord(0, None, "", arena.n, arena.m, arena.W)
    timings: Dict[str, float] = {}
    options = SolveOptions(
        exact_simplicity_limit=config.exact_simplicity_limit,
        verify_limit=config.verify_limit,
    )

    def timed(name: str, fn, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            timings[name] = round(time.perf_counter() - start, 6)

    report = timed("esl", solve, arena, options)
    record.esl_iterations = report.iterations
    record.strategies_verified = report.verified

    expected = timed("value_iteration", value_iteration_en, arena)
    record.agree_value_iteration = _values_match(report.en_values, expected)

    if brute_force_applicable(arena, config.brute_force_limit):
        brute = timed("brute_force", brute_force_en, arena, config.brute_force_limit)
        record.agree_brute_force = _values_match(report.en_values, brute)
        mp = brute_force_mp(arena, config.brute_force_limit)
        record.threshold_equivalence = not check_threshold_equivalence(arena, expected, mp)

    cap = alternating_cap(arena, config.alternating_cap_factor)
    alternating = timed("alternating", solve_alternating, arena, cap, options)
    record.alternating_iterations = alternating.iterations
    if isinstance(alternating, NonTermination):
        record.alternating_terminated = False
    else:
        record.alternating_terminated = True
        record.recovery_iterations = alternating.recovery_iterations
        record.agree_alternating = _values_match(alternating.en_values, report.en_values)

    if config.check_dual:
        dual = timed("dual", solve_dual, arena, options)
        mirrored = [-x if is_finite(x) else (NEG_INF if x == INF else INF)
                    for x in value_iteration_en(dualize(arena))]
        # a vertex where Min wins strictly (MP < 0) has finite energy
        nested = all(is_finite(e) for e, d in zip(report.en_values, dual.en_values) if d == NEG_INF)
        record.agree_dual = _values_match(dual.en_values, mirrored) and nested

    if config.timings:
        record.timings = timings
    return record


def run_instance(spec: InstanceSpec, config: SweepConfig) -> InstanceRecord:
    """
    Generate one instance and run every check on it

    Engine errors are recorded on the instance instead of stopping the sweep.
    """
    record = InstanceRecord(spec.index, spec.seed, spec.family, spec.n, spec.m, spec.W)
    try:
        run_checks(spec.generate(config.exact_simplicity_limit), config, record)
    except EnergyGameError as exc:
        logger.warning("instance %d (seed %d): %s", spec.index, spec.seed, exc)
        record.errors.append(f"{type(exc).__name__}: {exc}")

    logger.debug(
        "instance %d: n=%d m=%d W=%d esl=%s alternating=%s disagreement=%s",
        spec.index, spec.n, spec.m, spec.W, record.esl_iterations,
        record.alternating_iterations, record.disagreement,
    )
    return record


def summarize(records: List[InstanceRecord], config: SweepConfig) -> Dict:
    """Aggregate instance records into the final summary record"""
    summary = {
        "type": "summary",
        "family": config.family,
        "seed": config.seed,
        "instances": len(records),
        "disagreements": sum(1 for r in records if r.disagreement),
    }
    if not records:
        return summary

    df = pd.DataFrame([asdict(r) for r in records])
    esl = df["esl_iterations"].dropna().astype(int)
    terminated = df[df["alternating_terminated"].eq(True)]
    steps = terminated["alternating_iterations"]
    # steps alone, then steps plus the warm-started recovery run
    step_wins = steps <= terminated["esl_iterations"]
    total_wins = steps + terminated["recovery_iterations"] <= terminated["esl_iterations"]

    summary.update({
        "brute_force_checked": int(df["agree_brute_force"].notna().sum()),
        "alternating_terminated": int(len(terminated)),
        "alternating_nonterminated": int(df["alternating_terminated"].eq(False).sum()),
        "alternating_step_win_rate": round(float(step_wins.mean()), 6) if len(terminated) else None,
        "alternating_total_win_rate": round(float(total_wins.mean()), 6) if len(terminated) else None,
        "esl_iterations_mean": round(float(esl.mean()), 6) if len(esl) else None,
        "esl_iterations_p50": float(np.percentile(esl, 50)) if len(esl) else None,
        "esl_iterations_p95": float(np.percentile(esl, 95)) if len(esl) else None,
        "esl_iterations_max": int(esl.max()) if len(esl) else None,
        "alternating_steps_mean": (
            round(float(terminated["alternating_iterations"].mean()), 6) if len(terminated) else None
        ),
    })
    return summary


def run_sweep(config: Optional[SweepConfig] = None) -> Iterator[Dict]:
    """
    Yield one record per instance, then one summary record

    Instance i is drawn from RandomState(seed + i) of the configured family.
    """
    if config is None:
        config = SweepConfig()

    family = get_family(config.family, config.families_path)
    logger.info("sweep: family=%s count=%d seed=%d", family.name, config.count, config.seed)

    records = []
    for index in range(config.count):
        record = run_instance(family.draw(config.seed, index), config)
        records.append(record)
        yield record.to_dict()

    summary = summarize(records, config)
    logger.info(
        "sweep finished: %d instances, %d disagreements",
        summary["instances"], summary["disagreements"],
    )
    yield summary
