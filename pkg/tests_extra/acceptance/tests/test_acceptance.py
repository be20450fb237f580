import json
import math

import numpy as np
import pytest
from lv_waves.params import ModelParams
from lv_waves.pipeline import refinement_study
from lv_waves.reports import read_profile
from lv_waves.simulation import wave_translation_test

from .conftest import C_STAR, LARGE, SMALL, by_key, load, run_cli


@pytest.mark.parametrize(
    "argv, expected",
    [(SMALL, 0), (LARGE, 0), (["--a1", "0.5", "--a2", "2", "--r", "5"], 1)],
)
def test_validate(argv, expected, capsys):
    assert run_cli("validate", *argv) == expected
    report = json.loads(capsys.readouterr().out)
    assert report["h3"] is (expected == 0)


def test_wave_residuals(small_run):
    code, out = small_run
    assert code == 0
    report = load(out / "report.json")
    assert max(report["final_residuals"]) < 1e-6
    assert (report["L"], report["h"]) == (60.0, 0.02)


def test_small_branch_rates(small_run):
    _, out = small_run
    rates = by_key(load(out / "report.json"))
    assert rates["minus_inf", "u"]["fitted"] == pytest.approx(0.2928932, rel=0.02)
    assert rates["plus_inf", "u"]["fitted"] == pytest.approx(0.2247449, rel=0.02)
    assert rates["plus_inf", "v"]["fitted"] == pytest.approx(0.2247449, rel=0.02)


def test_large_branch_rates(large_run):
    code, out = large_run
    assert code == 0
    rates = by_key(load(out / "report.json"))
    assert rates["plus_inf", "u"]["fitted"] == pytest.approx(0.4142136, rel=0.03)
    assert rates["plus_inf", "v"]["fitted"] == pytest.approx(0.7320508, rel=0.03)


def test_critical_speed(tmp_path):
    assert run_cli("wave", *SMALL, "--c", C_STAR, "--out", tmp_path) == 0
    report = load(tmp_path / "report.json")
    assert report["regime"] == "critical"
    rates = by_key(report)
    assert rates["minus_inf", "u"]["polynomial_detected"]
    assert rates["minus_inf", "u"]["fitted"] == pytest.approx(0.7071068, rel=0.03)
    assert rates["plus_inf", "u"]["fitted"] == pytest.approx(0.2928932, rel=0.03)


def test_spreading_speed(tmp_path):
    argv = ["simulate", *SMALL, "--X", 400, "--T", 200, "--out", tmp_path]
    assert run_cli(*argv) == 0
    speed = load(tmp_path / "summary.json")["speed"]["speed"]
    assert speed == pytest.approx(C_STAR, rel=0.05)


def test_wave_translates(small_run):
    _, out = small_run
    profile = read_profile(out / "profile.csv")
    report = wave_translation_test(ModelParams(0.5, 2.0, 0.5), 2.0, profile, T=20.0)
    assert report.realized_speed == pytest.approx(2.0, rel=0.02)
    assert report.shape_error < 1e-2


def test_subcritical_diagnostic(tmp_path):
    assert run_cli("wave", *SMALL, "--c", 1, "--out", tmp_path) == 1
    diagnostic = load(tmp_path / "diagnostic.json")["diagnostic"]
    assert diagnostic["discriminant"] == -1.0
    assert diagnostic["roots"] == [[0.5, 0.5], [0.5, -0.5]]
    assert diagnostic["evidence"]


def test_uniqueness(small_run, tmp_path):
    _, out = small_run
    assert run_cli("verify", "--run", out, "--out", tmp_path) == 0
    bundle = load(tmp_path / "verification.json")
    assert bundle["uniqueness"]["distance"] < 1e-4
    assert bundle["sliding_comparison"]["verdict"] == "ordered"


def test_refinement():
    study = refinement_study(ModelParams(0.5, 2.0, 0.5), 2.0)
    assert 3.5 <= study["bvp_ratio"] <= 4.5
    assert study["profile_change"] < 100 * 0.02**2


def test_sweep(tmp_path):
    argv = ["sweep", *SMALL, "--speeds", "1,2", "--jobs", 2, "--h", 0.05, "--out", tmp_path]
    assert run_cli(*argv) == 1
    rows = (tmp_path / "summary.csv").read_text().splitlines()[1:]
    assert [row.split(",")[2] for row in rows] == ["fail", "pass"]
    assert np.isfinite(float(rows[1].split(",")[3]))
    assert math.isclose(float(rows[1].split(",")[0]), 2.0)
