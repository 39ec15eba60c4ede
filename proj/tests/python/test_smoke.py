import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

mfgsolve = pytest.importorskip("mfgsolve")

REPO = Path(__file__).resolve().parents[2]

SE_CONFIG = {
    "problem": {
        "dim": 1,
        "T": 1.0,
        "hamiltonian": {"V": {"terms": [{"k": [1, 0], "cos": 0.1}]}},
        "coupling": {"f0": {"powers": [{"coef": 1.0, "exponent": 1.0}], "log_coef": 1.0}},
        "terminal": {"g0": {"powers": [{"coef": 1.0, "exponent": 1.0}]}},
        "initial": {"m0": {"constant": 1.0, "terms": [{"k": [1, 0], "cos": 0.3}]}},
    },
    "grid": {"Nx": 16, "Nt": 8},
}

CONSTANT_CONFIG = {
    "problem": {
        "dim": 1,
        "T": 1.0,
        "hamiltonian": {},
        "coupling": {"f0": {"powers": [{"coef": 1.0, "exponent": 1.0}]}},
        "terminal": {"g0": {"powers": [{"coef": 1.0, "exponent": 1.0}]}},
        "initial": {"m0": 1.0},
    },
    "grid": {"Nx": 16, "Nt": 8},
}


def test_solve_constant_data_closed_form():
    res = mfgsolve.solve(json.dumps(CONSTANT_CONFIG))
    assert res["converged"]
    t = np.linspace(0.0, 1.0, 9)[:, None]
    assert np.max(np.abs(res["u"] - (1.0 + (1.0 - t)))) < 1e-9
    assert np.max(np.abs(res["m"] - 1.0)) < 1e-9


def test_solve_and_verify_roundtrip():
    cfg = json.dumps(SE_CONFIG)
    res = mfgsolve.solve(cfg)
    assert res["converged"]
    assert res["diagnostics"]["all_pass"]
    assert np.all(res["m"] > 0.0)

    rep = mfgsolve.verify(res["u"], res["m"], cfg)
    assert rep["all_pass"]

    # corrupting the density must trip the gating checks
    bad = res["m"].copy()
    bad[3, 4] += 1.0
    rep_bad = mfgsolve.verify(res["u"], bad, cfg)
    assert not rep_bad["all_pass"]


def test_recover_density_matches_solution():
    cfg = json.dumps(SE_CONFIG)
    res = mfgsolve.solve(cfg)
    rec = mfgsolve.recover_density(res["u"], cfg)
    assert np.max(np.abs(rec - res["m"])) < 1e-8


def test_oracle_agrees_with_solver():
    cfg = json.dumps(SE_CONFIG)
    res = mfgsolve.solve(cfg)
    orc = mfgsolve.oracle_solve(cfg)
    assert orc["converged"]
    assert np.max(np.abs(orc["u"] - res["u"])) < 0.1  # discretization-level agreement


def test_validate_flags_bad_spec():
    bad = json.loads(json.dumps(SE_CONFIG))
    bad["problem"]["terminal"]["g0"] = {"log_coef": 1.0}  # log terminal needs SE coupling
    bad["problem"]["coupling"]["f0"] = {"powers": [{"coef": 1.0, "exponent": 1.0}]}
    report = mfgsolve.validate(json.dumps(bad))
    assert any(not c["pass"] for c in report)


def test_config_error():
    with pytest.raises(mfgsolve.ConfigError):
        mfgsolve.solve("{\"problem\": {}}")


def _cli_path():
    env = os.environ.get("MFG_CLI")
    if env and Path(env).exists():
        return env
    candidate = REPO / "build" / "mfg"
    if candidate.exists():
        return str(candidate)
    return shutil.which("mfg")


@pytest.mark.skipif(_cli_path() is None, reason="mfg binary not built")
def test_cli_solve_and_verify(tmp_path):
    cli = _cli_path()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SE_CONFIG))
    out = tmp_path / "out"
    r = subprocess.run([cli, "solve", str(cfg), "--out", str(out), "--quiet"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stdout + r.stderr
    assert (out / "solution.csv").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["diagnostics"]["all_pass"]
    assert (out / "plot_u.svg").read_text().startswith("<svg") or "<svg" in (
        out / "plot_u.svg").read_text()

    r2 = subprocess.run([cli, "verify", str(out / "solution.csv"), str(cfg)],
                        capture_output=True, text=True)
    assert r2.returncode == 0, r2.stdout + r2.stderr


@pytest.mark.skipif(_cli_path() is None, reason="mfg binary not built")
def test_cli_selftest():
    r = subprocess.run([_cli_path(), "selftest"], capture_output=True, text=True)
    assert r.returncode == 0, r.stdout + r.stderr
    assert "selftest pass" in r.stdout
