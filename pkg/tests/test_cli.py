import json
import math
import os

import pytest

from delaymargin import cli as cli_mod

EXAMPLE = {"name": "example", "num": [3, 1, 2], "den": [4, 3, 2, 1]}
LOUISELL = {"name": "louisell", "num": [-2, -1], "den": [4, 1, 1]}
THOWSEN = {"name": "thowsen", "num": [1], "den": [1, 2, 1, 1]}


def run_cli(args, capsys):
    code = 0
    try:
        cli_mod.main(list(args))
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(json.dumps(EXAMPLE))
    return str(path)


@pytest.fixture
def louisell_file(tmp_path):
    path = tmp_path / "louisell.json"
    path.write_text(json.dumps(LOUISELL))
    return str(path)


class TestIntervals:
    def test_table_output_has_four_rows(self, example_file, capsys):
        code, out, _ = run_cli(["intervals", "--sigma", "-0.1", example_file], capsys)
        assert code == 0
        rows = [line for line in out.splitlines() if line.startswith(("[", "("))]
        assert len(rows) == 4

    def test_json_breakpoints(self, example_file, capsys):
        code, out, _ = run_cli(
            ["intervals", "--sigma", "-0.1", "--format", "json", example_file], capsys
        )
        assert code == 0
        data = json.loads(out)
        pts = set()
        for lo, hi in data["feasible"]:
            pts.update((lo, hi))
        for lo, hi, _ in data["direction"]:
            pts.update((lo, hi))
        finite = sorted(p for p in pts if p and not math.isinf(p))
        expected = [1.144, 1.156, 1.369, 1.559, 2.249]
        assert len(finite) == len(expected)
        for got, want in zip(finite, expected):
            assert got == pytest.approx(want, abs=1e-3)

    def test_emit_curves(self, example_file, tmp_path, capsys):
        curves = tmp_path / "curves.csv"
        code, _, _ = run_cli(
            ["intervals", "--sigma", "-0.1", "--emit-curves", str(curves), example_file],
            capsys,
        )
        assert code == 0
        lines = curves.read_text().splitlines()
        assert lines[0] == "omega,H,phi"
        assert len(lines) == 2001


class TestAnalyze:
    def test_csv_reference_rows(self, example_file, capsys):
        code, out, _ = run_cli(
            ["analyze", "--sigma", "-0.1", "--hmax", "7", "--format", "csv", example_file],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "h_lo,h_hi,count,crossing_omega,crossing_direction"
        assert len(lines) == 9
        row = lines[2].split(",")
        assert float(row[0]) == pytest.approx(0.879, abs=1e-3)
        assert float(row[1]) == pytest.approx(2.984, abs=1e-3)
        assert int(row[2]) == 2
        assert float(row[3]) == pytest.approx(2.377, abs=1e-3)
        assert row[4] == "+1"

    def test_table_format_shows_counts(self, example_file, capsys):
        code, out, _ = run_cli(
            ["analyze", "--sigma", "-0.1", "--hmax", "7", example_file], capsys
        )
        assert code == 0
        assert "10" in out  # final count

    def test_deterministic_output(self, example_file, capsys):
        args = ["analyze", "--sigma", "-0.1", "--hmax", "7", "--format", "json", example_file]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2


class TestStability:
    def test_louisell_text(self, louisell_file, capsys):
        code, out, err = run_cli(["stability", "--sigma", "-0.5", louisell_file], capsys)
        assert code == 0
        assert "stable: (0.573, 1.311)" in out
        assert "warning" in err  # boundary pole perturbation

    def test_strict_escalates(self, louisell_file, capsys):
        code, _, err = run_cli(
            ["stability", "--sigma", "-0.5", "--strict", louisell_file], capsys
        )
        assert code == 3

    def test_none_for_unit_feedthrough(self, tmp_path, capsys):
        path = tmp_path / "biproper.json"
        path.write_text(json.dumps({"num": [2, 1], "den": [1, 1]}))
        code, out, _ = run_cli(["stability", "--sigma", "-0.1", str(path)], capsys)
        assert code == 0
        assert "stable: (none)" in out
        assert "infinitely many" in out


class TestImaginary:
    def test_thowsen(self, tmp_path, capsys):
        path = tmp_path / "thowsen.json"
        path.write_text(json.dumps(THOWSEN))
        code, out, _ = run_cli(["imaginary", "--hmax", "10", str(path)], capsys)
        assert code == 0
        assert "stable:" in out
        data_code, json_out, _ = run_cli(
            ["imaginary", "--hmax", "10", "--format", "json", str(path)], capsys
        )
        data = json.loads(json_out)
        stable = data["stable_intervals"]
        assert stable[0][0] == pytest.approx(math.pi / 2, abs=1e-6)


class TestVerify:
    def test_round_trip(self, example_file, tmp_path, capsys):
        code, out, _ = run_cli(
            ["analyze", "--sigma", "-0.1", "--hmax", "7", "--format", "json", example_file],
            capsys,
        )
        report = tmp_path / "report.json"
        report.write_text(out)
        code, out2, err2 = run_cli(["verify", str(report)], capsys)
        assert code == 0, err2
        assert "verification passed" in out2
        assert "MISMATCH" not in out2


class TestExitCodes:
    def test_missing_sigma_is_usage_error(self, example_file, capsys):
        code, _, err = run_cli(["intervals", example_file], capsys)
        assert code == 1

    def test_bad_plant_file(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(["intervals", "--sigma", "-0.1", str(path)], capsys)
        assert code == 1

    def test_conflicting_forms(self, tmp_path, capsys):
        path = tmp_path / "both.json"
        path.write_text(json.dumps({"gain": 1, "zeros": [], "poles": [[-1, 0]], "num": [1], "den": [1, 1]}))
        code, _, err = run_cli(["intervals", "--sigma", "-0.1", str(path)], capsys)
        assert code == 1

    def test_analysis_error_exit_2(self, tmp_path, capsys):
        path = tmp_path / "cancel.json"
        path.write_text(json.dumps({"num": [1, 1], "den": [2, 3, 1]}))
        code, _, err = run_cli(["analyze", "--sigma", "-0.1", "--hmax", "2", str(path)], capsys)
        assert code == 2
        assert "PoleZeroCancellation" in err

    def test_env_log_level(self, example_file, capsys, monkeypatch):
        monkeypatch.setenv("DELAYMARGIN_LOG", "debug")
        code, _, _ = run_cli(["intervals", "--sigma", "-0.1", example_file], capsys)
        assert code == 0
