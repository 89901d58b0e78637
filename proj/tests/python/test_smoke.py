import json
import math
import os
import pathlib
import tempfile

import numpy as np
import pytest

import mildns


def scratch(name):
    root = os.environ.get("MILDNS_TEST_OUT") or tempfile.mkdtemp()
    return str(pathlib.Path(root) / name)


def test_grid_properties():
    g = mildns.Grid(2, 16, 2 * math.pi)
    assert (g.n, g.N) == (2, 16)
    assert g.spacing == pytest.approx(2 * math.pi / 16)


def test_field_roundtrip():
    g = mildns.Grid(2, 8, 1.0)
    a = np.arange(2 * 64, dtype=float).reshape(2, 8, 8)
    f = mildns.Field(g, a, rank=1)
    assert np.array_equal(f.values(), a)
    assert f.rank == 1
    with pytest.raises(mildns.ValidationError):
        mildns.Field(g, np.zeros(7), rank=1)


def test_constant_field_lorentz_norms():
    g = mildns.Grid(2, 16, 2.0)
    f = mildns.Field(g, np.full((1, 16, 16), 3.0), rank=0)
    # A constant c on a box of measure 4 has every L^{p,q} quasinorm c 4^{1/p}.
    assert mildns.lorentz_quasinorm(f, 2, 2) == pytest.approx(6.0, rel=1e-12)
    assert mildns.lorentz_quasinorm(f, 2, 1) == pytest.approx(6.0, rel=1e-12)
    assert mildns.lorentz_quasinorm(f, 4, "inf") == pytest.approx(3.0 * math.sqrt(2), rel=1e-12)
    assert mildns.lorentz_quasinorm(f, "inf", "inf") == pytest.approx(3.0, rel=1e-12)


def test_constants():
    assert mildns.beta_constant(0.0) == pytest.approx(2.0)
    assert mildns.alpha_constant(2) == pytest.approx(1.0)
    tab = mildns.constants_table(2, ["inf", 6])
    assert [row["r"] for row in tab["rows"]] == ["inf", "6"]
    for row in tab["rows"]:
        assert row["delta"] == pytest.approx(row["beta"] * tab["gamma"])
        assert row["eta"] == pytest.approx(row["r_conj"] * tab["alpha"] * row["delta"])
    with pytest.raises(mildns.DomainError):
        mildns.constants_table(2, [1.5])
    assert mildns.blowup_threshold(2, "inf", 1.0, 0.0) > 0


def test_taylor_green_solve_matches_heat_flow():
    g = mildns.Grid(2, 32, 2 * math.pi)
    f = mildns.initial_data(g, "taylor-green", amplitude=1.0)
    rep = mildns.solve(f, T=0.5, J=16, threshold_r=["inf"])
    assert rep["converged"]
    traj = rep["trajectory"]
    assert traj.shape == (17, 2, 32, 32)
    f0 = f.values()
    for t, u in zip(rep["times"], traj):
        assert np.max(np.abs(u - math.exp(-2 * t) * f0)) < 1e-6
    assert len(rep["blowup_thresholds"]) == 1


def test_run_cli_constants():
    out = scratch("py_constants")
    assert mildns.run_cli(["constants", "--n", "2", "--r", "inf", "--out", out]) == 0
    doc = json.loads(pathlib.Path(out, "constants.json").read_text())
    assert doc["beta"] == [2.0]
    assert mildns.run_cli(["solve", "--J", "0", "--out", scratch("py_bad")]) == 2
