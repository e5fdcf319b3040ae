"""CLI contract tests: exit codes, determinism, file outputs."""

import json
from pathlib import Path

import pytest

from wirecut.cli import main

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFamilies:
    def test_n2(self, capsys, tmp_path):
        out = tmp_path / "fams.json"
        code, _, _ = run(capsys, "families", "--n", "2", "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert len(data["families"]) == 5
        assert set(data["families"][-1]["members"]) == {"ZI", "IZ", "ZZ"}

    def test_n1_count(self, capsys):
        code, out, _ = run(capsys, "families", "--n", "1")
        assert code == 0
        assert len(json.loads(out)["families"]) == 3

    def test_resource_limit_exit_2(self, capsys):
        code, _, err = run(capsys, "families", "--n", "13")
        assert code == 2
        assert "error" in err


class TestSynth:
    def test_n1_files_match_golden(self, capsys, tmp_path):
        code, _, _ = run(capsys, "synth", "--n", "1", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / "U001.txt").read_text().splitlines() == ["H 1"]
        assert (tmp_path / "U002.txt").read_text().splitlines() == ["H 1", "SDG 1"]
        stats = (tmp_path / "stats.csv").read_text().splitlines()
        assert stats[0] == "index,file,NH,NS,NCZ,depth"
        assert len(stats) == 3

    def test_n4_all_verified(self, capsys, tmp_path):
        code, _, _ = run(capsys, "synth", "--n", "4", "--out", str(tmp_path))
        assert code == 0
        assert len(list(tmp_path.glob("U*.txt"))) == 16

    def test_n7_symplectic_verification_path(self, capsys, tmp_path):
        code, _, _ = run(capsys, "synth", "--n", "7", "--out", str(tmp_path))
        assert code == 0
        assert len(list(tmp_path.glob("U*.txt"))) == 128


class TestVerify:
    @pytest.mark.parametrize(
        "method,n",
        [("peng", 1), ("optimal1q", 1), ("mub", 2), ("mub", 3), ("randomized", 1), ("teleport", 1), ("teleport", 2)],
    )
    def test_methods_pass(self, capsys, method, n):
        code, out, _ = run(capsys, "verify", "--method", method, "--n", str(n))
        assert code == 0
        assert f"method={method}" in out

    def test_mub_n3_values(self, capsys):
        code, out, _ = run(capsys, "verify", "--method", "mub", "--n", "3")
        assert code == 0
        assert "gamma=15.0" in out and "m=9" in out

    def test_teleport_guard(self, capsys):
        code, _, err = run(capsys, "verify", "--method", "teleport", "--n", "3")
        assert code == 2


class TestExactAndEstimate:
    def test_exact_demo(self, capsys):
        code, out, _ = run(capsys, "exact", "--circuit", str(DEMOS / "demo_circuit.json"))
        assert code == 0
        assert out.strip() == "1.000000000000"

    def test_exact_ghz(self, capsys):
        code, out, _ = run(capsys, "exact", "--circuit", str(DEMOS / "demo_ghz.json"))
        assert code == 0
        assert out.strip() == "0.500000000000"

    def test_estimate_matches_exact_within_bound(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code, _, _ = run(
            capsys,
            "estimate",
            "--circuit", str(DEMOS / "demo_circuit.json"),
            "--cuts", str(DEMOS / "demo_cut.json"),
            "--method", "optimal1q",
            "--shots", "100000",
            "--seed", "0",
            "--out", str(out),
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert abs(report["estimate"] - 1.0) <= 5 * 3.0 / (10**5) ** 0.5
        assert report["gamma_total"] == 3.0

    def test_estimate_deterministic_bytes(self, capsys, tmp_path):
        files = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code, _, _ = run(
                capsys,
                "estimate",
                "--circuit", str(DEMOS / "demo_circuit.json"),
                "--cuts", str(DEMOS / "demo_cut.json"),
                "--method", "peng",
                "--shots", "2000",
                "--seed", "11",
                "--out", str(out),
            )
            assert code == 0
            files.append(out.read_bytes())
        assert files[0] == files[1]

    def test_estimate_from_exported_decomposition(self, capsys, tmp_path):
        from wirecut.channels import build_optimal_1q, save_decomposition

        dec_file = tmp_path / "opt.json"
        save_decomposition(build_optimal_1q(), dec_file)
        outputs = []
        for method in ("optimal1q", f"file:{dec_file}"):
            out = tmp_path / f"{method.split(':')[0]}.out"
            code, _, _ = run(
                capsys,
                "estimate",
                "--circuit", str(DEMOS / "demo_circuit.json"),
                "--cuts", str(DEMOS / "demo_cut.json"),
                "--method", method,
                "--shots", "5000",
                "--seed", "4",
                "--out", str(out),
            )
            assert code == 0
            outputs.append(json.loads(out.read_text()))
        assert outputs[0]["estimate"] == outputs[1]["estimate"]

    def test_estimate_width_mismatch_from_file(self, capsys, tmp_path):
        from wirecut.channels import build_mub_default, save_decomposition

        dec_file = tmp_path / "two.json"
        save_decomposition(build_mub_default(2), dec_file)
        code, _, err = run(
            capsys,
            "estimate",
            "--circuit", str(DEMOS / "demo_circuit.json"),
            "--cuts", str(DEMOS / "demo_cut.json"),
            "--method", f"file:{dec_file}",
            "--shots", "10",
        )
        assert code == 2
        assert "width" in err

    def test_zero_shots_exit_2(self, capsys):
        code, _, err = run(
            capsys,
            "estimate",
            "--circuit", str(DEMOS / "demo_circuit.json"),
            "--cuts", str(DEMOS / "demo_cut.json"),
            "--shots", "0",
        )
        assert code == 2

    def test_missing_file_exit_2(self, capsys):
        code, _, _ = run(capsys, "exact", "--circuit", "no_such_file.json")
        assert code == 2


class TestBench:
    def test_overhead_rows(self, capsys):
        code, out, _ = run(capsys, "bench", "overhead", "--nmax", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 13  # header + 4 methods x 3 n
        assert lines[0] == "method,n,gamma_sq,m"

    def test_timemodel_value(self, capsys):
        code, out, _ = run(
            capsys, "bench", "timemodel", "--m", "5", "--tc", "1", "--tq", "0.01", "--N", "1000"
        )
        assert code == 0
        assert out.strip() == "15.0"

    def test_gatecount_bounds(self, capsys):
        code, out, _ = run(capsys, "bench", "gatecount", "--nmax", "5")
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        for row in rows:
            assert int(row[2]) <= int(row[4])  # NCZ_max <= bound_CZ

    def test_usage_error_exit_2(self, capsys):
        code, _, _ = run(capsys, "bench", "overhead")
        assert code == 2
