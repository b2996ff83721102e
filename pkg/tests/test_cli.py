from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from semind.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, dispatch, main
from semind.constructions import turan
from semind.graphs import decode_graph6, is_isomorphic
from semind.semi_inducibility import builtin_h

from conftest import naive_embeddings


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_brute_max_example(capsys):
    code, rep = run_json(capsys, "brute-max", "--h", "0", "--n", "4")
    assert code == EXIT_OK
    assert rep["max"] == 12 and rep["extremal_count"] == 2


def test_blowup_optimize_example(capsys):
    code, rep = run_json(capsys, "blowup", "optimize", "--h", "4", "--base", "K3")
    assert code == EXIT_OK
    assert abs(float(rep["value"]) - 4 / 27) < 1e-9


def test_identity_sweep_example(capsys):
    code, rep = run_json(capsys, "identity", "--family", "h15", "--random", "100", "--n", "4..12", "--seed", "0")
    assert code == EXIT_OK and rep["all_zero"] and rep["checked"] == 100


def test_global_options_after_subcommand(capsys):
    a = run(capsys, "--json", "--seed", "3", "identity", "--family", "h0", "--random", "5")
    b = run(capsys, "identity", "--family", "h0", "--random", "5", "--seed", "3", "--json")
    assert a == b and json.loads(a[1])["seed"] == 3


def test_count_and_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO("C~\nC?\n"))
    code, rep = run_json(capsys, "count", "--h", "15")
    assert code == EXIT_OK and [r["count"] for r in rep["graphs"]] == [0, 0]
    code, rep = run_json(capsys, "count", "--h", "0", "--g6", "Cr")
    g = decode_graph6("Cr")
    assert rep["graphs"][0]["count"] == naive_embeddings(builtin_h(0).red, builtin_h(0).blue, g)


def test_blowup_subcommands(capsys):
    code, rep = run_json(capsys, "blowup", "density", "--h", "4", "--base", "K3")
    assert Fraction(rep["density"]) == Fraction(4, 27)
    code, rep = run_json(capsys, "blowup", "strict", "--h", "4", "--base", "K3", "--y", "0", "1", "1")
    assert Fraction(rep["value"]) == Fraction(16, 27)
    code, rep = run_json(capsys, "blowup", "flip", "--h", "4", "--base", "K3")
    assert code == EXIT_OK and rep["flip_averse"]


def test_construct(capsys):
    code, out = run(capsys, "construct", "turan", "--m", "3", "--n", "7")
    assert code == EXIT_OK and is_isomorphic(decode_graph6(out.strip()), turan(3, 7))
    code, rep = run_json(capsys, "construct", "circulant-r", "--m", "5", "--k", "2", "--audit")
    assert rep["degrees"] == [4] and rep["triangles"] == 0 and rep["edges"] == 22
    code, _ = run(capsys, "construct", "turan", "--m", "3")
    assert code == EXIT_USAGE
    code, _ = run(capsys, "construct", "circulant-r", "--m", "4", "--k", "2")
    assert code == EXIT_USAGE


def test_exact_with_brute(capsys):
    code, rep = run_json(capsys, "exact", "--family", "H1", "--n", "4..7", "--brute")
    assert code == EXIT_OK and all(r["match"] for r in rep["rows"])
    assert rep["rows"][2]["value"] == 72
    assert rep["rows"][2]["printed_formula_value"] == "63/1"


def test_symmetrize(capsys):
    code, rep = run_json(capsys, "symmetrize", "--h", "5", "--g6", "Dhc")
    assert code == EXIT_OK
    res = rep["results"][0]
    assert Fraction(res["lambda_after"]) >= Fraction(res["lambda_before"])


def test_symmetrize_gamma_file(capsys, tmp_path):
    from semind.semi_inducibility import builtin_h, gamma_from_h
    gm = gamma_from_h(builtin_h(5))
    path = tmp_path / "gamma.json"
    path.write_text(json.dumps({k: str(v) for k, v in gm.values.items()}))
    a = run_json(capsys, "symmetrize", "--gamma-file", str(path), "--g6", "Dhc")
    b = run_json(capsys, "symmetrize", "--h", "5", "--g6", "Dhc")
    assert a == b


def test_cert_round_trip(capsys, tmp_path):
    code, cert = run_json(capsys, "cert", "build-h11")
    path = tmp_path / "h11.json"
    path.write_text(json.dumps(cert))
    code, rep = run_json(capsys, "cert", "verify", str(path))
    assert code == EXIT_OK and rep["verdict"] == "PASS"
    code, rep = run_json(capsys, "cert", "verify", str(path), "--theory", "complete-partite")
    assert code == EXIT_OK
    # lower the bound but keep the old slacks: the listed values no longer match
    cert["u"] = "124999/1000000"
    path.write_text(json.dumps(cert))
    code, rep = run_json(capsys, "cert", "verify", str(path))
    assert code == EXIT_FAIL and rep["verdict"] == "FAIL"
    code, cert = run_json(capsys, "cert", "build-h11", "--u", "124999/1000000")
    path.write_text(json.dumps(cert))
    code, rep = run_json(capsys, "cert", "verify", str(path))
    assert code == EXIT_FAIL and rep["negative"]


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "count", "--h", "99", "--g6", "C~")[0] == EXIT_USAGE
    assert run(capsys, "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "brute-max", "--h", "0")[0] == EXIT_USAGE
    assert run(capsys, "identity", "--family", "h9", "--random", "2")[0] == EXIT_USAGE
    assert run(capsys, "count", "--h", "0", "--g6", "not-graph6!")[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "cert", "verify", str(bad))[0] == EXIT_USAGE
    assert run(capsys, "cert", "verify", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    assert dispatch(RunConfig("bogus", {}))[0] == EXIT_USAGE


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text = run(capsys, "--json", "--output", str(out), "brute-max", "--h", "1", "--n", "5")
    assert json.loads(out.read_text()) == json.loads(text)


@pytest.mark.parametrize("argv", [
    ["brute-max", "--h", "15", "--n", "6"],
    ["identity", "--family", "h1", "--random", "30", "--seed", "11"],
    ["blowup", "optimize", "--h", "5", "--base", "K5"],
])
def test_byte_identical_runs(argv):
    cmd = [sys.executable, "-m", "semind", "--json", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_threads_do_not_change_output(capsys):
    outs = {run(capsys, "--json", "--threads", str(t), "brute-max", "--h", "1", "--n", "6")[1] for t in (1, 2, 4)}
    assert len(outs) == 1


def test_threads_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("SEMIND_THREADS", "2")
    from semind.cli import _config, build_parser
    cfg = _config(build_parser().parse_args(["brute-max", "--h", "0", "--n", "4"]))
    assert cfg.threads == 2


def test_table1_passes(capsys):
    code, rep = run_json(capsys, "table1")
    assert code == EXIT_OK and len(rep["rows"]) == 18
    assert all(r["passed"] for r in rep["rows"])
    assert "note" in rep["rows"][5]
    code, text = run(capsys, "table1")
    assert text.count("PASS") == 18


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semind", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "table1" in proc.stdout
