import io
import json

from engine.arena import INF, NEG_INF
from engine.esl import solve, solve_alternating
from engine.export import (
    export_report_to_csv,
    json_safe,
    nontermination_to_dict,
    report_to_dataframe,
    report_to_dict,
    serialize_trace,
    sweep_to_dataframe,
    to_ndjson_line,
    write_ndjson,
)


def test_json_safe():
    assert json_safe({"a": INF, "b": [NEG_INF, 1], 2: frozenset({3, 1})}) == {
        "a": "inf", "b": ["-inf", 1], "2": [1, 3],
    }


def test_ndjson_lines():
    stream = io.StringIO()
    count = write_ndjson([{"x": 1}, {"y": INF}], stream)
    assert count == 2
    assert stream.getvalue() == '{"x":1}\n{"y":"inf"}\n'


def test_report_to_dict(g3):
    data = report_to_dict(solve(g3), trace=True)
    assert data["variant"] == "esl"
    assert data["max_strategy"] == {1: 2}
    assert data["lifted"] is False
    assert [step["iteration"] for step in data["per_iteration"]] == [0, 1]
    assert data["per_iteration"][0]["phi"] == [2, 5, 0]
    assert json.loads(to_ndjson_line(data))["per_iteration"][0]["seed"] == [2]


def test_trace_with_infinity(max_loop):
    assert serialize_trace(solve(max_loop).per_iteration) == (
        "iteration 0 En+\npotential 0 inf\nseed\nnewly_infinite 0\n"
        "\n"
        "iteration 1 En+\npotential 0 inf\nseed\nnewly_infinite\n"
    )


def test_nontermination(g3):
    data = nontermination_to_dict(solve_alternating(g3, cap=1))
    assert data["terminated"] is False
    assert data["iterations"] == 1
    assert data["per_iteration"][0]["step"] == "En+"


def test_dataframe(max_loop):
    df = report_to_dataframe(solve(max_loop), max_loop)
    row = df.iloc[0]
    assert (row["owner"], row["en"], row["threshold"], row["move"]) == ("MAX", "inf", "MP>0", "0->0")


def test_csv(g3, tmp_path):
    path = tmp_path / "report.csv"
    text = export_report_to_csv(solve(g3), g3, str(path))
    assert text.splitlines()[0] == "vertex,owner,en,threshold,edge,move,potential"
    assert path.read_text() == text


def test_sweep_dataframe():
    df = sweep_to_dataframe([
        {"type": "instance", "index": 0, "errors": ["a", "b"]},
        {"type": "summary", "instances": 1},
    ])
    assert len(df) == 1
    assert df.loc[0, "errors"] == "a; b"
