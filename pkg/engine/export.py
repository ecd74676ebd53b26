"""
Export functionality for solve reports and sweeps
NDJSON records, CSV tables through pandas, and potential trace blocks
"""
import json
import math
from typing import Dict, Iterable, List, Optional, TextIO

import pandas as pd

from .arena import Arena, format_weight
from .esl import IterationRecord, NonTermination, SolveReport
from .potential import serialize_potential


def json_safe(value):
    """Replace float infinities (not JSON) by the strings 'inf' / '-inf'"""
    if isinstance(value, float) and math.isinf(value):
        return format_weight(value)
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [json_safe(v) for v in items]
    return value


def to_ndjson_line(record: Dict) -> str:
    return json.dumps(json_safe(record), separators=(",", ":"))


def write_ndjson(records: Iterable[Dict], stream: TextIO) -> int:
    """Write one JSON object per line; returns the number of lines"""
    count = 0
    for record in records:
        stream.write(to_ndjson_line(record) + "\n")
        stream.flush()
        count += 1
    return count


def report_to_dict(report: SolveReport, trace: bool = False) -> Dict:
    """Schema-stable dictionary form of a solve report"""
    data = {
        "variant": report.variant,
        "n": report.n,
        "en_values": None if report.en_values is None else list(report.en_values),
        "threshold": [verdict.value for verdict in report.threshold],
        "min_strategy": dict(sorted(report.min_strategy.choice.items())),
        "max_strategy": dict(sorted(report.max_strategy.choice.items())),
        "iterations": report.iterations,
        "recovery_iterations": report.recovery_iterations,
        "lifted": report.lifted,
        "verified": report.verified,
    }
    if trace:
        data["per_iteration"] = [iteration_to_dict(record) for record in report.per_iteration]
    return data


def nontermination_to_dict(result: NonTermination) -> Dict:
    return {
        "variant": "alternating",
        "terminated": False,
        "cap": result.cap,
        "iterations": result.iterations,
        "per_iteration": [iteration_to_dict(record) for record in result.trace],
    }


def iteration_to_dict(record: IterationRecord) -> Dict:
    return {
        **record.summary(),
        "phi": list(record.phi),
        "seed": sorted(record.seed),
        "newly_infinite_vertices": sorted(record.newly_infinite),
        "stats": record.stats.to_dict(),
    }


def serialize_trace(records: List[IterationRecord]) -> str:
    """One block per step: header, potential lines, N and the new infinities"""
    blocks = []
    for record in records:
        lines = [f"iteration {record.index} {record.step.value}"]
        block = serialize_potential(record.phi)
        lines.append(block.rstrip("\n"))
        lines.append("seed " + " ".join(str(v) for v in sorted(record.seed)))
        lines.append("newly_infinite " + " ".join(str(v) for v in sorted(record.newly_infinite)))
        blocks.append("\n".join(line.rstrip() for line in lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def report_to_dataframe(report: SolveReport, arena: Arena) -> pd.DataFrame:
    """One row per vertex: owner, energy, verdict, chosen edge, total potential"""
    choices = {**report.min_strategy.choice, **report.max_strategy.choice}
    return pd.DataFrame({
        "vertex": list(range(report.n)),
        "owner": [owner.value for owner in arena.owners],
        "en": (
            [format_weight(x) for x in report.en_values]
            if report.en_values is not None else [None] * report.n
        ),
        "threshold": [verdict.value for verdict in report.threshold],
        "edge": [choices.get(v) for v in range(report.n)],
        "move": [arena.edge_label(choices[v]) if v in choices else None for v in range(report.n)],
        "potential": [format_weight(x) for x in report.total_potential],
    })


def export_report_to_csv(report: SolveReport, arena: Arena, path: Optional[str] = None) -> str:
    """
    Per-vertex results as CSV

    Returns:
        CSV text; also written to `path` when given
    """
    csv_text = report_to_dataframe(report, arena).to_csv(index=False)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(csv_text)
    return csv_text


def sweep_to_dataframe(records: Iterable[Dict]) -> pd.DataFrame:
    """Instance records of a sweep (summary lines dropped) as a table"""
    rows = [record for record in records if record.get("type") == "instance"]
    df = pd.DataFrame(rows)
    if "errors" in df.columns:
        df["errors"] = df["errors"].apply(lambda errors: "; ".join(errors))
    return df
