import io
import json
import os
import subprocess
import sys

import pytest

from gicsat import cli
from gicsat.satcore import read_dimacs

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")
FIG1 = os.path.join(DATA, "fig1.edges")
SINGLE = os.path.join(DATA, "single.edges")
K2 = os.path.join(DATA, "k2.edges")


def run_cli(args):
    return cli.main(list(args))


# ---- encode ----------------------------------------------------------------

def test_encode_sidecar_reports_clause_breakdown(tmp_path, capsys):
    out = tmp_path / "fig1.cnf"
    assert run_cli(["encode", FIG1, "--k", "1", "--output", str(out)]) == 0
    sidecar = json.loads((tmp_path / "fig1.json").read_text())
    assert sidecar["detection_clauses"] == 22
    # sequential counter closed form for n=5, k=1: k+1 + (n-2)(2k+1)
    assert sidecar["cardinality_clauses"] == 11
    assert sidecar["n"] == 5 and sidecar["m"] == 6 and sidecar["k"] == 1
    assert set(sidecar["vars"]) == {"a", "b", "c", "d", "e"}
    with open(out) as fp:
        f, groups = read_dimacs(fp)
    assert len(f.clauses) == sidecar["num_clauses"]
    assert set(groups) == {"a", "b", "c", "d", "e"}
    assert groups["a"] == (sidecar["vars"]["a"]["x"], sidecar["vars"]["a"]["y"])


def test_encode_rejects_k_zero(tmp_path):
    assert run_cli(["encode", FIG1, "--k", "0",
                    "--output", str(tmp_path / "x.cnf")]) == 1


def test_encode_rejects_k_above_n(tmp_path):
    assert run_cli(["encode", FIG1, "--k", "6",
                    "--output", str(tmp_path / "x.cnf")]) == 1


def test_encode_never_touches_the_solver(tmp_path, monkeypatch):
    import gicsat.satcore as satcore

    def boom(*a, **kw):
        raise AssertionError("encode path must not construct a solver")

    monkeypatch.setattr(satcore.CdclSolver, "__init__", boom)
    monkeypatch.setitem(satcore.ENGINES, "bundled", boom)
    assert run_cli(["encode", FIG1, "--k", "2",
                    "--output", str(tmp_path / "y.cnf")]) == 0


def test_encode_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.edges"
    bad.write_text("a b c\n")
    assert run_cli(["encode", str(bad), "--k", "1",
                    "--output", str(tmp_path / "z.cnf")]) == 2


def test_missing_file_exit_code(tmp_path):
    assert run_cli(["encode", str(tmp_path / "nope.edges"), "--k", "1",
                    "--output", str(tmp_path / "z.cnf")]) == 2


# ---- solve -----------------------------------------------------------------

def solve_json(tmp_path, capsys, *extra):
    out = tmp_path / "res.json"
    rc = run_cli(["solve", FIG1, "--k", "1", "--output", str(out), *extra])
    capsys.readouterr()
    assert rc == 0
    return json.loads(out.read_text())


def test_solve_worked_example_order(tmp_path, capsys):
    rec = solve_json(tmp_path, capsys, "--order", "e,d,c,b,a")
    assert rec["sensors"] == ["a", "c"]
    assert rec["sensor_count"] == 2
    assert rec["config"]["order"] == ["e", "d", "c", "b", "a"]
    assert rec["budget_exhaustions"] == 0
    assert "wall_seconds" not in rec


def test_solve_single_node(tmp_path, capsys):
    out = tmp_path / "res.json"
    assert run_cli(["solve", SINGLE, "--k", "1", "--output", str(out)]) == 0
    capsys.readouterr()
    rec = json.loads(out.read_text())
    assert rec["sensors"] == ["v"]


def test_solve_then_verify_passes(tmp_path, capsys):
    rec = solve_json(tmp_path, capsys)
    assert run_cli(["verify", FIG1, "--k", "1",
                    "--sensors", ",".join(rec["sensors"])]) == 0


def test_solve_k2_then_verify(tmp_path, capsys):
    out = tmp_path / "res.json"
    assert run_cli(["solve", FIG1, "--k", "2", "--output", str(out)]) == 0
    capsys.readouterr()
    rec = json.loads(out.read_text())
    assert run_cli(["verify", FIG1, "--k", "2",
                    "--sensors", ",".join(rec["sensors"])]) == 0


def test_solve_timing_flag_adds_wall_seconds(tmp_path, capsys):
    rec = solve_json(tmp_path, capsys, "--timing")
    assert rec["wall_seconds"] >= 0


def test_solve_unknown_order_label(tmp_path, capsys):
    assert run_cli(["solve", FIG1, "--k", "1", "--order", "q,w,e,r,t"]) == 1
    capsys.readouterr()


def test_solve_time_limit_exit_code(tmp_path, capsys):
    gnp50 = os.path.join(DATA, "gnp50.edges")
    rc = run_cli(["solve", gnp50, "--k", "2", "--time-limit", "0.001"])
    capsys.readouterr()
    assert rc == 3
    # the alarm must be disarmed: a follow-up in-process run succeeds
    assert run_cli(["solve", FIG1, "--k", "1",
                    "--output", str(tmp_path / "after.json")]) == 0
    capsys.readouterr()


def test_solve_deterministic_output(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        assert run_cli(["solve", FIG1, "--k", "2", "--order", "random",
                        "--seed", "5", "--output", str(path)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


# ---- verify -----------------------------------------------------------------

def test_verify_pass(capsys):
    assert run_cli(["verify", FIG1, "--k", "1", "--sensors", "a,c"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "truth-table cross-check: PASS" in out


def test_verify_fail_prints_witness(capsys):
    assert run_cli(["verify", FIG1, "--k", "1", "--sensors", "a"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "identical signatures" in out


def test_verify_full_set(capsys):
    assert run_cli(["verify", FIG1, "--k", "1",
                    "--sensors", "a,b,c,d,e"]) == 0
    capsys.readouterr()


def test_verify_unknown_sensor_label(capsys):
    assert run_cli(["verify", FIG1, "--k", "1", "--sensors", "a,z"]) == 1
    capsys.readouterr()


# ---- bench -------------------------------------------------------------------

def test_par2_definition():
    records = [{"status": "solved", "wall_seconds": 100.0},
               {"status": "timeout", "wall_seconds": 3600.0}]
    assert cli.par2_score(records, 3600.0) == pytest.approx(3650.0)


def test_par2_all_solved_is_mean():
    records = [{"status": "solved", "wall_seconds": 2.0},
               {"status": "solved", "wall_seconds": 4.0}]
    assert cli.par2_score(records, 100.0) == pytest.approx(3.0)


def test_par2_memout_counts_as_double_limit():
    records = [{"status": "memout", "wall_seconds": 1.0}]
    assert cli.par2_score(records, 10.0) == pytest.approx(20.0)


def test_bench_end_to_end(tmp_path, capsys):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text(f"# two tiny graphs\n{FIG1}\n{K2}\n")
    report_path = tmp_path / "report.json"
    rc = run_cli(["bench", str(manifest), "--k", "1,2", "--time-limit", "120",
                  "--output", str(report_path)])
    capsys.readouterr()
    assert rc == 0
    report = json.loads(report_path.read_text())
    assert len(report["records"]) == 4
    assert all(r["status"] == "solved" for r in report["records"])
    assert all(r["verified"] is True for r in report["records"])
    assert report["par2"] < 120
    ratios = report["clause_ratio_vs_k"]["fig1.edges"]
    assert ratios["1"] == 1.0
    assert ratios["1"] <= ratios["2"]  # clause count non-decreasing in k


def test_bench_clause_ratio_monotone(tmp_path, capsys):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text(f"{FIG1}\n")
    report_path = tmp_path / "report.json"
    rc = run_cli(["bench", str(manifest), "--k", "1,2,3,4", "--time-limit", "120",
                  "--output", str(report_path)])
    capsys.readouterr()
    assert rc == 0
    ratios = json.loads(report_path.read_text())["clause_ratio_vs_k"]["fig1.edges"]
    ks = sorted(int(k) for k in ratios)
    values = [ratios[str(k)] for k in ks]
    assert values == sorted(values)


def test_bench_timeout_scores_double_limit(tmp_path, capsys):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text(f"{os.path.join(DATA, 'gnp50.edges')}\n")
    report_path = tmp_path / "report.json"
    rc = run_cli(["bench", str(manifest), "--k", "2", "--time-limit", "0.05",
                  "--output", str(report_path)])
    capsys.readouterr()
    assert rc == 0
    report = json.loads(report_path.read_text())
    (record,) = report["records"]
    assert record["status"] == "timeout"
    assert report["par2"] == pytest.approx(0.1)


def test_bench_bad_k_list(tmp_path, capsys):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text(f"{FIG1}\n")
    assert run_cli(["bench", str(manifest), "--k", "1,zap"]) == 1
    capsys.readouterr()


# ---- module entry point ---------------------------------------------------------

def test_python_dash_m_entry(tmp_path):
    out = tmp_path / "res.json"
    proc = subprocess.run(
        [sys.executable, "-m", "gicsat", "solve", FIG1, "--k", "1",
         "--order", "e,d,c,b,a", "--output", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["sensors"] == ["a", "c"]
