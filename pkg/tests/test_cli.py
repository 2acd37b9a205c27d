import json
import subprocess
import sys

import pytest

from gapcert.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, EXIT_TRIVIAL, EXIT_VERIFY, main
from gapcert.errors import SolverError
from gapcert.pauli import hamiltonian_to_json
from gapcert.sdp import read_sdpa

from conftest import z_field


def _write(tmp_path, h, name="h.json"):
    f = tmp_path / name
    f.write_text(json.dumps(hamiltonian_to_json(h)))
    return f


def test_certify_gap_n3(tmp_path, capsys):
    f = _write(tmp_path, z_field(3))
    out = tmp_path / "cert.json"
    code = main(["certify-gap", "--hamiltonian", str(f), "--level", "2", "--upper", "eeb", "--degree", "3",
                 "--out", str(out), "--require-nontrivial"])
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["gap_lower_bound"] >= 2 - 1e-4
    assert json.loads(capsys.readouterr().out) == data
    assert main(["check-certificate", str(out), "--require-nontrivial"]) == EXIT_OK


def test_trivial_exit_code(tmp_path):
    from gapcert.pauli import PauliPoly

    f = _write(tmp_path, PauliPoly.identity(2, 2))
    args = ["certify-gap", "--hamiltonian", str(f), "--level", "1", "--degree", "1"]
    assert main(args) == EXIT_OK
    assert main(args + ["--require-nontrivial"]) == EXIT_TRIVIAL


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "terms": [{"coeff": 1, "ops": [[1, "Z"]]}, {"coeff": "x", "ops": []}]}')
    assert main(["lower-bound", "--hamiltonian", str(bad)]) == EXIT_INPUT
    assert main(["lower-bound", "--hamiltonian", str(tmp_path / "missing.json")]) == EXIT_INPUT
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["upper-bound", "--hamiltonian", str(broken)]) == EXIT_INPUT
    f = _write(tmp_path, z_field(2))
    assert main(["upper-bound", "--hamiltonian", str(f), "--degree", "-1"]) == EXIT_INPUT
    assert main(["lower-bound", "--hamiltonian", str(f), "--tol", "0"]) == EXIT_INPUT


def test_resource_error_is_input_error(tmp_path):
    f = _write(tmp_path, z_field(3))
    assert main(["export-sdpa", "--hamiltonian", str(f), "--cliques", "full", "--out", str(tmp_path / "x")]) == EXIT_INPUT


def test_solver_failure_exit(tmp_path, monkeypatch):
    import gapcert.lower_bound as lb

    def boom(*a, **k):
        raise SolverError("no progress")

    monkeypatch.setattr(lb, "solve_lower", boom)
    f = _write(tmp_path, z_field(2))
    assert main(["lower-bound", "--hamiltonian", str(f), "--level", "1"]) == EXIT_SOLVER
    assert main(["certify-gap", "--hamiltonian", str(f), "--level", "1"]) == EXIT_SOLVER


def test_lower_and_upper(tmp_path, capsys):
    f = _write(tmp_path, z_field(3))
    assert main(["lower-bound", "--hamiltonian", str(f), "--level", "2", "--cliques", "sites"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["certified_bound"] == pytest.approx(-4, abs=1e-5)
    assert main(["upper-bound", "--hamiltonian", str(f), "--upper", "lasserre", "--degree", "1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["certified_bound"] == pytest.approx(-3**0.5, abs=1e-7)


def test_export_only(tmp_path, capsys):
    f = _write(tmp_path, z_field(2))
    out = tmp_path / "p.dat-s"
    assert main(["certify-gap", "--hamiltonian", str(f), "--level", "1", "--solver", "export-only", "--out", str(out)]) == EXIT_OK
    meta = json.loads(capsys.readouterr().out)
    p = read_sdpa(out)
    assert p.m == meta["m"] and [b.dim for b in p.blocks] == meta["block_sizes"]
    assert main(["export-sdpa", "--hamiltonian", str(f), "--level", "1"]) == EXIT_INPUT


def test_verify(capsys):
    assert main(["verify", "--n", "2", "--strict-c4"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] and data["suites"]["span_check"]["rank"] == 15


def test_verify_reports_failures(monkeypatch, capsys):
    from gapcert import oracle

    real = oracle.verify_site_constraint
    monkeypatch.setattr(oracle, "verify_site_constraint", lambda n: oracle.Report("site_constraint", n, False, {}))
    assert main(["verify", "--n", "2"]) == EXIT_VERIFY
    assert "site_constraint" in json.loads(capsys.readouterr().out)["failed"]
    monkeypatch.setattr(oracle, "verify_site_constraint", real)


def test_derive_constants(capsys):
    assert main(["derive-constants", "--check"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["entries"][0]["name"] == "C4"


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "gapcert.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "gapcert" in res.stdout
