"""Smoke tests for the python module against the CMake-built extension."""

import math
import os
import subprocess

import numpy as np
import pytest

import _pauliflow as pf


def test_grid_and_state():
    g = pf.UniformGrid(1, [128], [16.0])
    assert g.size == 128
    assert g.spacing(0) == pytest.approx(0.125)
    psi = pf.SpinorField.gaussian(g, [0.0, 0.0, 0.0], 1.0, [0.0, 0.0, 0.0], [1.0, 0.0])
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    st = pf.MixedState.pure(0.5, psi)
    rho = pf.density(st)
    assert rho.shape == (128,)
    assert rho.sum() * g.spacing(0) == pytest.approx(1.0, abs=1e-10)


def test_propagate_conserves_mass_and_energy():
    g = pf.UniformGrid(1, [128], [16.0])
    psi = pf.SpinorField.gaussian(g, [0.0, 0.0, 0.0], 0.8, [0.0, 0.0, 0.0], [1.0, 0.0])
    st = pf.MixedState.pure(0.5, psi)
    out = pf.propagate(st, pf.GaugeField.zero(g), dt=1e-3, t_end=0.1,
                       nonlinearity="poisson")
    reports = out["reports"]
    mass = np.array(reports["mass"])
    etot = np.array(reports["E_total"])
    assert np.max(np.abs(mass - 1.0)) < 1e-10
    assert np.max(np.abs(etot - etot[0])) < 1e-6 * abs(etot[0])


def test_wigner_marginal_matches_density():
    g = pf.UniformGrid(1, [128], [16.0])
    psi = pf.SpinorField.gaussian(g, [0.5, 0.0, 0.0], 0.9, [0.0, 0.0, 0.0], [1.0, 0.0])
    st = pf.MixedState.pure(0.5, psi)
    w = pf.wigner_trace(st)
    f = w["values"]
    dxi = w["dxi"][0]
    marg = f.sum(axis=1) * dxi
    rho = pf.density(st)
    # even fine-lattice points coincide with the state grid
    assert np.max(np.abs(marg[::2] - rho)) < 1e-8 * rho.max()
    # total phase-space mass
    assert f.sum() * dxi * w["dx"] == pytest.approx(1.0, abs=1e-8)


def test_poisson_single_mode():
    g = pf.UniformGrid(1, [64], [8.0])
    x = -4.0 + 0.125 * np.arange(64)
    k = 2 * math.pi / 8.0
    rho = np.cos(k * x)
    v = pf.solve_poisson_periodic(g, rho)
    assert np.max(np.abs(v - rho / k**2)) < 1e-10


def test_meanfield_control_is_exact():
    g = pf.UniformGrid(1, [32], [12.0])
    psi = pf.SpinorField.gaussian(g, [0.3, 0.0, 0.0], 0.9, [0.0, 0.0, 0.0], [1.0, 0.0])
    out = pf.meanfield_study(g, psi, [2, 3], hbar=0.6, dt=5e-3, coupling=0.0,
                             softening=0.5, well_depth=0.8, sample_times=[0.25])
    assert out["monotone_in_n"]
    for row in out["table"]:
        assert row["trace_distance"] < 1e-8


def test_config_and_run(tmp_path):
    cfg = "\n".join([
        "experiment = single_run",
        "grid.dim = 1",
        "grid.n = 64",
        "grid.extent = 12",
        "solver.dt = 1e-3",
        "solver.t_end = 0.01",
    ])
    parsed = pf.parse_config(cfg)
    assert parsed["experiment"] == "single_run"
    assert len(parsed["hash"]) == 16
    out = pf.run_single(cfg, str(tmp_path / "run"))
    assert out["monitors_passed"]
    assert (tmp_path / "run" / "report.csv").exists()
    assert (tmp_path / "run" / "manifest.json").exists()


def test_cli_help_and_validate(tmp_path):
    cli = os.environ.get("PAULIFLOW_CLI")
    if not cli:
        pytest.skip("PAULIFLOW_CLI not set")
    assert subprocess.run([cli, "--help"], capture_output=True).returncode == 0
    cfg = tmp_path / "c.cfg"
    cfg.write_text("grid.n = 64\nsolver.t_end = 0.01\nsolver.dt = 1e-3\n")
    r = subprocess.run([cli, "validate", "--config", str(cfg)], capture_output=True)
    assert r.returncode == 0
    assert b"config_hash_fnv64" in r.stdout
    bad = tmp_path / "bad.cfg"
    bad.write_text("grid.n = 100\n")
    assert subprocess.run([cli, "validate", "--config", str(bad)],
                          capture_output=True).returncode == 2
