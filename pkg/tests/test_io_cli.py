import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from segkmeans import _kernels
from segkmeans.cli import main
from segkmeans.errors import InvalidInputError, ParseError
from segkmeans.geometry import Segment
from segkmeans.io import (
    dump_segments,
    emit_result,
    emit_svg,
    load_input,
    load_polylines,
    load_segments,
    parse_csv,
    result_to_dict,
)
from segkmeans.objective import WeightedSegment
from segkmeans.pipeline import PipelineConfig, run_pipeline

DATA = Path(__file__).parent / "data"
FIXTURE = DATA / "ten_segments.csv"


def test_default_weight():
    (s,) = parse_csv("-1,0,1,0\n")
    assert s == WeightedSegment(Segment((-1, 0), (1, 0)), 1.0)


def test_header_optional():
    assert parse_csv("x1,y1,x2,y2\n0,0,1,1\n") == parse_csv("0,0,1,1\n")


def test_zero_length_row():
    with pytest.raises(InvalidInputError, match="zero-length segment"):
        parse_csv("0,0,0,0\n")


def test_zero_length_reports_index():
    with pytest.raises(InvalidInputError, match="index 1"):
        parse_csv("0,0,1,1\n2,2,2,2\n")


@pytest.mark.parametrize("text, line", [
    ("0,0,1,1\n0,0,1\n", 2),
    ("x1,y1,x2,y2\n0,0,1,1\n1,a,2,2\n", 3),
    ("0,0,1,1,2,3\n", 1),
])
def test_malformed_rows_report_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_csv(text)
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


@pytest.mark.parametrize("w", ["0", "-1.5"])
def test_nonpositive_weight(w):
    with pytest.raises(InvalidInputError, match="weight"):
        parse_csv(f"0,0,1,1,{w}\n")


def test_golden_round_trip(tmp_path):
    S = load_segments(FIXTURE)
    assert len(S) == 10
    for fmt in ("csv", "json"):
        out = tmp_path / f"copy.{fmt}"
        dump_segments(S, out)
        assert load_segments(out) == S


def test_json_segments(tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps({"segments": [{"a": [0, 0], "b": [1, 0]}, {"a": [0, 1], "b": [1, 1], "w": 2}]}))
    S = load_segments(p)
    assert [s.weight for s in S] == [1.0, 2.0]
    p.write_text(json.dumps({"segments": [{"a": [0, 0], "b": [0, 0]}]}))
    with pytest.raises(InvalidInputError, match="zero-length"):
        load_segments(p)
    p.write_text('{"segments": [')
    with pytest.raises(ParseError):
        load_segments(p)


def test_polylines(tmp_path):
    p = tmp_path / "poly.json"
    p.write_text(json.dumps([[[0, 0], [1, 0], [1, 1]], {"vertices": [[0, 0], [2, 2]], "w": 3}]))
    P, w = load_polylines(p)
    assert [q.n_segments for q in P] == [2, 1]
    assert w.tolist() == [1.0, 3.0]
    X, w2 = load_input(p, ell=2)
    assert X.shape == (2, 3, 2) and w2.tolist() == [1.0, 3.0]


def test_result_json_is_sorted(tmp_path):
    S = load_segments(FIXTURE)
    res = run_pipeline(S, PipelineConfig(k=3, epsilon=0.3, seed=1))
    doc = result_to_dict(res)
    keys = [tuple(np.ravel(c)) for c in doc["centers"]]
    assert keys == sorted(keys)
    assert "wall_clock" not in json.dumps(doc)
    # the remapped assignment still points at the nearest center
    C = np.array(doc["centers"])
    X = np.stack([s.seg.to_array() for s in S])
    D = _kernels.sqdist_matrix(X, C)
    assert np.all(D[np.arange(10), doc["assignment"]] == D.min(axis=1))
    out = tmp_path / "r.json"
    emit_result(res, out)
    assert json.loads(out.read_text())["cost"] == res.cost
    emit_svg(S, res, tmp_path / "r.svg")
    svg = (tmp_path / "r.svg").read_text()
    assert svg.startswith("<svg") and svg.count("<path") == 10 + 2 * 3


def test_cli_end_to_end(tmp_path, capsys):
    out, svg, trace = tmp_path / "o.json", tmp_path / "o.svg", tmp_path / "t.jsonl"
    rc = main([str(FIXTURE), "--k", "2", "--epsilon", "0.3", "--seed", "4", "--output", str(out),
               "--svg", str(svg), "--trace", str(trace), "--restarts", "2", "--max-iters", "10",
               "--repetitions", "1"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["k"] == 2 and doc["ell"] == 1 and len(doc["assignment"]) == 10
    assert svg.exists()
    lines = [json.loads(x) for x in trace.read_text().splitlines()]
    assert lines and {"iter", "cost", "centers"} <= set(lines[0])
    again = tmp_path / "o2.json"
    main([str(FIXTURE), "--k", "2", "--epsilon", "0.3", "--seed", "4", "--output", str(again),
          "--restarts", "2", "--max-iters", "10", "--repetitions", "1"])
    assert again.read_bytes() == out.read_bytes()


def test_cli_coreset_only(tmp_path, capsys):
    rc = main([str(FIXTURE), "--k", "2", "--coreset-only", "--coreset-constant", "1e-6"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["m"] >= 1
    assert all(item["weight"] > 0 for item in doc["items"])


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0,0,0\n")
    assert main([str(bad), "--k", "1"]) == 2
    assert main([str(tmp_path / "missing.csv"), "--k", "1"]) == 2
    assert main([str(FIXTURE), "--k", "11"]) == 2
    assert main([str(FIXTURE), "--k", "1", "--epsilon", "0.7"]) == 2
    assert "error" in capsys.readouterr().err


def test_console_script_runs(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "segkmeans.cli", str(FIXTURE), "--k", "1",
                           "--repetitions", "1", "--restarts", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["k"] == 1
