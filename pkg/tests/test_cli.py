import io
import json
import subprocess
import sys

import pytest

from algdeg import cli


def run(argv, stdin=None):
    """Run the CLI in-process; returns (exit code, parsed report or None, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr, sys.stdin
    sys.stdout, sys.stderr = out, err
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        try:
            code = cli.main(argv)
        except SystemExit as exc:
            code = exc.code
    finally:
        sys.stdout, sys.stderr, sys.stdin = old
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else None), err.getvalue()


def test_verify_example_passes():
    code, rep, _ = run(["verify", "--algebra", "Q[t]/(t^2)", "--phi", "t^2", "--iters", "4"])
    assert code == 0
    assert rep["measurements"]["brute_force"]["values"] == ["2", "4", "8", "16"]
    assert rep["predictions"]["theorem_a"]["values"] == ["2", "4", "8", "16"]
    assert rep["verdicts"]["asymptotic"]["status"] == "pass"


def test_predict_example():
    code, rep, _ = run(["predict", "--algebra", "C^2", "--phi", "t^2", "--p", "2", "--iters", "3"])
    assert code == 0
    assert rep["predictions"]["theorem_a"]["values"] == ["4", "16", "64"]


def test_dyndeg_example():
    code, rep, _ = run(["dyndeg", "--monomial", "[[2,1],[1,1]]", "--algebra", "Q[t]/(t^2)", "--p", "1"])
    assert code == 0 and rep["dynamical_degree"] == "2.618034"


def test_report_schema_and_seed_echo():
    code, rep, _ = run(["analyze", "--algebra", "Mat(2)", "--seed", "7"])
    assert code == 0
    assert rep["schema_version"] == "1" and rep["command"] == "analyze"
    assert rep["inputs"]["seed"] == 7 and rep["inputs"]["algebra"] == "Mat(2)"
    assert rep["profile"]["generic_delta"] == 2 and rep["profile"]["generic_k"] == 2
    assert rep["timings"] is None


def test_induce_prints_coordinates():
    code, rep, _ = run(["induce", "--algebra", "Q[t]/(t^2)", "--phi", "t^2"])
    assert code == 0
    assert rep["map"]["coordinates"] == ["l0^2", "2*l0*l1"]


def test_degseq_and_predict_for_monomial_maps():
    code, rep, _ = run(["degseq", "--algebra", "C^1", "--monomial", "[[2,1],[1,1]]", "--iters", "5"])
    assert code == 0 and rep["measurements"]["brute_force"]["values"] == ["3", "8", "21", "55", "144"]
    code, rep, _ = run(["predict", "--algebra", "C^1", "--monomial", "[[2,1],[1,1]]", "--p", "1", "--iters", "3"])
    assert code == 0 and rep["predictions"]["theorem_b"]["values"] == ["2", "5", "13"]


def test_reports_are_byte_identical():
    argv = [sys.executable, "-m", "algdeg.cli", "verify", "--algebra", "Q[t]/(t^3)", "--phi", "t^2 + 1", "--iters", "4"]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == b.returncode and a.stdout == b.stdout and a.stdout


def test_timings_are_opt_in():
    code, rep, _ = run(["analyze", "--algebra", "C^2", "--timings"])
    assert code == 0 and isinstance(rep["timings"], dict) and rep["timings"]


def test_algebra_from_stdin_and_file(tmp_path):
    code, rep, _ = run(["analyze", "--algebra", "-"], stdin="Q[t]/(t^2)")
    assert code == 0 and rep["profile"]["reduced_dim"] == 1
    doc = tmp_path / "alg.json"
    doc.write_text('{"dim": 1, "constants": [[0, 0, 0, "1"]]}')
    code, rep, _ = run(["analyze", "--algebra", f"@{doc}"])
    assert code == 0 and rep["profile"]["flags"]["unitary"]


@pytest.mark.parametrize("argv", [
    [],
    ["analyze"],
    ["frobnicate", "--algebra", "C"],
    ["predict", "--algebra", "C", "--phi", "t^2", "--monomial", "[[2]]", "--p", "1", "--iters", "2"],
    ["degseq", "--algebra", "C", "--phi", "t^2", "--iters", "0"],
    ["analyze", "--algebra", "Q[t]/(t^2"],
    ["induce", "--algebra", "C", "--phi", "t^^2"],
])
def test_usage_errors_exit_1(argv):
    code, rep, err = run(argv)
    assert code == 1 and rep is None and err


@pytest.mark.parametrize("argv", [
    ["induce", "--algebra", "Mat(2)", "--monomial", "[[2]]"],
    ["predict", "--algebra", "C^1", "--monomial", "[[1,2],[2,4]]", "--p", "1", "--iters", "2"],
    ["degseq", "--algebra", "Q[t]/(t^2)", "--phi", "t/(t-t+1) - t", "--iters", "2"],
])
def test_computation_errors_exit_2(argv):
    code, rep, err = run(argv)
    assert code == 2 and rep is None and "error" in err


def test_failed_or_inconclusive_verification_exits_3():
    code, rep, _ = run(["verify", "--algebra", "Q[t]/(t^2)", "--phi", "t^2", "--iters", "3"])
    assert code == 3 and rep["verdicts"]["asymptotic"]["status"] == "inconclusive"
    code, rep, _ = run(["verify", "--algebra", "Q[t]/(t^2)", "--phi", "t^2", "--iters", "4", "--eps", "-1"])
    assert code == 3 and rep["verdicts"]["asymptotic"]["status"] == "fail"
