"""CLI surface: exit-code contract, JSON shapes, determinism."""

import json

import pytest

from szpirolab.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_lines(out):
    return [json.loads(line) for line in out.strip().splitlines() if line]


class TestCurve:
    def test_ratio(self, capsys):
        code, out, _ = run_cli(
            ["curve", "ratio", "--model", "0,-1,-1,0,0"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["conductor"] == "11"
        assert obj["height"] == "23104"
        assert round(obj["sigma_m"], 4) == 4.1902

    def test_invariants(self, capsys):
        code, out, _ = run_cli(
            ["curve", "invariants", "--model", "0,0,1,4,0"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["c4"] == "-192" and obj["c6"] == "-216"
        assert obj["delta"] == "-4123"

    def test_minimal_reports_blowup(self, capsys):
        # 11a1 scaled up by u = 2: x -> x/4, y -> y/8 direction
        code, out, _ = run_cli(
            ["curve", "minimal", "--model", "0,-4,8,-160,-1280"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["u"] == "2"
        assert obj["minimal"] == ["0", "-1", "1", "-10", "-20"]
        assert obj["delta_min"] == "-161051"

    def test_conductor_local_data(self, capsys):
        code, out, _ = run_cli(
            ["curve", "conductor", "--model", "0,0,0,0,1"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["conductor"] == "36"
        assert {(d["p"], d["fp"]) for d in obj["local"]} == {("2", 2), ("3", 2)}

    def test_rational_model(self, capsys):
        code, out, _ = run_cli(
            ["curve", "minimal", "--model", "0,-1/4,1/8,-10/16,-20/64"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["minimal"] == ["0", "-1", "1", "-10", "-20"]

    def test_singular_exit_1(self, capsys):
        code, _, err = run_cli(["curve", "ratio", "--model", "0,0,0,0,0"], capsys)
        assert code == 1
        assert "singular" in err

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run_cli(["curve", "ratio", "--model", "1,2,3"], capsys)
        assert code == 2
        assert "five" in err


class TestFamily:
    def test_build(self, capsys):
        code, out, _ = run_cli(
            ["family", "build", "--T", "C5", "--a", "1", "--b", "1"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["delta_bound"] == "11" and obj["conductor"] == "11"
        assert obj["findings"] == []

    def test_build_invalid_exit_2(self, capsys):
        code, _, err = run_cli(
            ["family", "build", "--T", "C2xC2", "--a", "3", "--b", "2", "--d", "1"],
            capsys,
        )
        assert code == 2
        assert "a must be even" in err

    def test_build_missing_param_exit_2(self, capsys):
        code, _, err = run_cli(
            ["family", "build", "--T", "C2", "--a", "1", "--b", "2"], capsys
        )
        assert code == 2
        assert "--d" in err

    def test_verify_small(self, capsys):
        code, out, _ = run_cli(
            ["family", "verify", "--T", "C5", "--max", "6", "--jobs", "1"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["violations"] == 0
        assert obj["instances"] > 0
        assert obj["min_sigma_m"] > 3

    def test_verify_deterministic(self, capsys):
        _, out1, _ = run_cli(
            ["family", "verify", "--T", "C6", "--max", "5", "--jobs", "1"], capsys
        )
        _, out2, _ = run_cli(
            ["family", "verify", "--T", "C6", "--max", "5", "--jobs", "2"], capsys
        )
        assert out1 == out2

    def test_verify_c2xc6_reports_defect(self, capsys):
        code, out, _ = run_cli(
            ["family", "verify", "--T", "C2xC6", "--max", "4", "--jobs", "1"],
            capsys,
        )
        assert code == 1
        lines = json_lines(out)
        assert lines[0]["violations"] > 0
        assert any("finding" in line for line in lines[1:])


class TestPhi:
    def test_single_branch(self, capsys):
        code, out, _ = run_cli(
            ["phi", "--T", "C5", "--u", "1", "--den", "8", "--range", "2"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["violations"] == [] and obj["zeros"] == []
        assert obj["tail_dominant"] is True
        assert obj["points"] == 33

    def test_c4_symbolic_u(self, capsys):
        code, out, _ = run_cli(
            ["phi", "--T", "C4", "--u", "2c", "--den", "4", "--range", "1"], capsys
        )
        assert code == 0
        (obj,) = json_lines(out)
        assert obj["u"] == "2c"

    def test_bad_u_exit_2(self, capsys):
        code, _, err = run_cli(["phi", "--T", "C5", "--u", "2"], capsys)
        assert code == 2
        assert "not admissible" in err


class TestSharp:
    def test_scan_json(self, capsys):
        code, out, _ = run_cli(
            ["sharp", "--T", "C2", "--nmax", "200", "--nmin", "100"], capsys
        )
        assert code == 0
        lines = json_lines(out)
        summary = lines[-1]
        assert summary["T"] == "C2" and summary["strictly_above_l"] is True
        assert abs(summary["fit_intercept"] - 1.5) < 0.1
        records = lines[:-1]
        assert all(r["squarefree"] is True for r in records)

    def test_consistency_clean_family(self, capsys):
        code, out, _ = run_cli(
            ["sharp", "--T", "C3", "--nmax", "60", "--nmin", "40",
             "--consistency", "5"],
            capsys,
        )
        assert code == 0

    def test_consistency_c2xc8_fails_honestly(self, capsys):
        code, out, _ = run_cli(
            ["sharp", "--T", "C2xC8", "--nmax", "300", "--nmin", "2",
             "--consistency", "3"],
            capsys,
        )
        assert code == 1
        lines = json_lines(out)
        assert any("finding" in line for line in lines)

    def test_csv_output(self, tmp_path, capsys):
        out_path = tmp_path / "series.csv"
        code, out, _ = run_cli(
            ["sharp", "--T", "C2", "--nmax", "120", "--nmin", "90",
             "--format", "csv", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        text = out_path.read_text().splitlines()
        assert text[0].startswith("T,n,model,height,f")
        assert len(text) > 1

    def test_nmax_guard(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sharp", "--T", "C2", "--nmax", "5"])
        assert exc.value.code == 2
