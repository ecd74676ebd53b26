"""
Plain-text rendering of solve reports and cross-checks
"""
from typing import List, Optional

from engine.arena import Arena, format_weight
from engine.esl import NonTermination, SolveReport
from engine.export import serialize_trace
from engine.sweep import InstanceRecord


def format_report(report: SolveReport, arena: Arena, trace: bool = False) -> str:
    """
    Human-readable report

    One `<vertex> <value>` line per vertex, then the iteration count, the
    threshold verdicts and both strategies.
    """
    lines: List[str] = []
    if report.en_values is None:
        lines.append("values withheld: arena was lifted, thresholds only")
    else:
        lines.extend(f"{v} {format_weight(value)}" for v, value in enumerate(report.en_values))

    lines.append(f"iterations {report.iterations}")
    if report.variant == "alternating":
        lines.append(f"recovery_iterations {report.recovery_iterations}")
    lines.extend(f"threshold {v} {verdict.value}" for v, verdict in enumerate(report.threshold))

    for strategy in (report.min_strategy, report.max_strategy):
        for v, index in sorted(strategy.choice.items()):
            lines.append(f"strategy {strategy.player.value} {v} {arena.edge_label(index)}")
    if report.verified:
        lines.append("strategies verified")

    text = "\n".join(lines) + "\n"
    if trace and report.per_iteration:
        text += "\n" + serialize_trace(report.per_iteration)
    return text


def format_nontermination(result: NonTermination, trace: bool = False) -> str:
    text = f"nontermination after {result.iterations} steps (cap {result.cap})\n"
    if trace:
        text += "\n" + serialize_trace(result.trace)
    return text


def _agreement(flag: Optional[bool], skipped: str = "skipped") -> str:
    if flag is None:
        return skipped
    return "agree" if flag else "DISAGREE"


def format_check(record: InstanceRecord) -> str:
    """One line per cross-check, ending with the overall oracle verdict"""
    lines = [
        f"esl: {record.esl_iterations} iterations",
        f"value iteration: {_agreement(record.agree_value_iteration)}",
        f"brute force: {_agreement(record.agree_brute_force, 'skipped (over limit)')}",
        f"threshold equivalence: {_agreement(record.threshold_equivalence, 'skipped (over limit)')}",
    ]
    if record.alternating_terminated:
        lines.append(
            f"alternating: {_agreement(record.agree_alternating)} "
            f"({record.alternating_iterations} steps, {record.recovery_iterations} recovery iterations)"
        )
    else:
        lines.append(f"alternating: nontermination after {record.alternating_iterations} steps")
    lines.append(f"dual: {_agreement(record.agree_dual)}")
    lines.append("strategies: " + ("verified" if record.strategies_verified else "not verified"))
    lines.extend(f"error: {error}" for error in record.errors)
    lines.append("oracle: " + ("disagree" if record.disagreement else "agree"))
    return "\n".join(lines) + "\n"
