# tests/test_cli.py
import json
from pathlib import Path
import pytest

from src.cli import load_problem, parse_plain, run  # noqa
from src.errors import InputFormatError

DATA = Path(__file__).parent / "data"
SQUARE = str(DATA / "square.json")


def _report(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def test_solve_square(outdir):
    out = outdir / "report.json"
    assert run(["solve", "--input", SQUARE, "--output", str(out)]) == 0
    report = _report(out)
    assert report["perimeter"] == 4.0
    assert report["n"] == 4
    assert set(report) == {
        "t_star", "q", "dilation", "witness", "perimeter", "n",
        "event_count_left", "event_count_right", "elapsed_ms",
    }
    assert report["dilation"] >= 1.0
    assert not (outdir / "report.json.tmp").exists()


def test_solve_is_default_command(capsys):
    assert run(["--input", SQUARE]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["n"] == 4


def test_solve_deterministic(outdir):
    a, b = outdir / "a.json", outdir / "b.json"
    assert run(["--input", SQUARE, "--output", str(a)]) == 0
    assert run(["--input", SQUARE, "--output", str(b)]) == 0
    ra, rb = _report(a), _report(b)
    ra.pop("elapsed_ms"), rb.pop("elapsed_ms")
    assert json.dumps(ra) == json.dumps(rb)


def test_check_square(outdir):
    out = outdir / "check.json"
    assert run(["check", "--input", SQUARE, "--grid-density", "4000", "--output", str(out)]) == 0
    record = _report(out)
    assert record["ok"]
    assert record["relative_gap"] == pytest.approx(
        abs(record["dilation"] - record["oracle_dilation"]) / record["oracle_dilation"])
    assert 0.0 <= record["relative_gap"] < 1e-2


def test_degenerate_exit_code():
    assert run(["solve", "--input", str(DATA / "degenerate.json")]) == 2


@pytest.mark.parametrize("content", ["{not json", '{"polygon": [[0, 0], [1, 0]], "point": [0.2, 0.2]}',
                                     '{"polygon": [[0, 0], [1, 0], [0, 1]]}', '{"polygon": [[0, 0], [1], [0, 1]], "point": [0, 0]}'])
def test_bad_input_exit_code(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    assert run(["--input", str(path)]) == 1


def test_missing_file_exit_code(tmp_path):
    assert run(["--input", str(tmp_path / "nope.json")]) == 1


def test_plain_format(outdir):
    out = outdir / "tri.json"
    assert run(["--input", str(DATA / "triangle.txt"), "--format", "plain", "--output", str(out)]) == 0
    assert _report(out)["n"] == 3


def test_parse_plain_errors():
    with pytest.raises(InputFormatError, match="Missing final"):
        parse_plain("0 0\n1 0\n0 1\n")
    with pytest.raises(InputFormatError, match="nothing may follow"):
        parse_plain("0 0\n1 0\n0 1\np: 0.2 0.2\n3 3\n")
    with pytest.raises(InputFormatError, match="line 2"):
        parse_plain("0 0\n1\n0 1\np: 0.2 0.2\n")


def test_load_problem_json(make_problem_file):
    problem = load_problem(make_problem_file(polygon=[(0, 0), (2, 0), (0, 2)], point=(0.5, 0.5)))
    assert problem.polygon == [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]
    assert problem.point == (0.5, 0.5)


def test_states_output(outdir, make_problem_file):
    out = outdir / "states.jsonl"
    path = make_problem_file(polygon=[(0, 0), (4, 0), (0, 3)], point=(1, 1))
    assert run(["states", "--input", path, "--output", str(out)]) == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    left = [r["t"] for r in records if r["side"] == "left"]
    right = [r["t"] for r in records if r["side"] == "right"]
    assert left and right
    assert all(b <= a for a, b in zip(left, left[1:]))
    # right positions are mapped back into [0, mu), so they ascend up to one wrap
    assert all(0.0 <= t < 12.0 for t in right)
    assert sum(b < a for a, b in zip(right, right[1:])) <= 1
    assert any(r["side"] == "left-retarget" for r in records)


def test_profile_output(outdir):
    out = outdir / "profile.jsonl"
    assert run(["profile", "--input", SQUARE, "--grid-density", "40", "--output", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 40
    assert all(r["total"] == max(r["left"], r["right"]) for r in rows)


def test_oracle_command(outdir):
    out = outdir / "oracle.json"
    assert run(["oracle", "--input", SQUARE, "--grid-density", "100", "--threads", "2", "--output", str(out)]) == 0
    record = _report(out)
    assert record["samples"] == 100
    assert record["dilation"] >= 1.0


def test_trace_and_svg(outdir):
    trace, svg, plot = outdir / "trace.jsonl", outdir / "poly.svg", outdir / "plot.svg"
    code = run(["--input", SQUARE, "--trace", str(trace), "--svg", str(svg), "--plot-svg", str(plot),
                "--output", str(outdir / "r.json")])
    assert code == 0
    records = [json.loads(line) for line in trace.read_text(encoding="utf-8").splitlines()]
    assert {r["side"] for r in records} == {"left", "right"}
    report = _report(outdir / "r.json")
    assert sum(r["side"] == "left" for r in records) == report["event_count_left"]
    assert "<svg" in svg.read_text(encoding="utf-8")
    assert "<polyline" in plot.read_text(encoding="utf-8")


def test_grid_density_below_n_is_rejected():
    assert run(["oracle", "--input", SQUARE, "--grid-density", "2"]) == 1
