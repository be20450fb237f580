import math

import numpy as np
import pytest
from lv_waves.exceptions import ConfigError
from lv_waves.numerics import Grid, WaveProfile
from lv_waves.reports import (
    RunManifest,
    read_profile,
    read_report,
    read_trace,
    to_builtin,
    write_kpp_profile,
    write_profile,
    write_report,
    write_rows,
    write_trace,
)


def make_profile():
    grid = Grid.from_spacing(2.0, 0.5)
    w = 1.0 / (1.0 + np.exp(-grid.nodes))
    return WaveProfile.from_arrays(grid, w, np.sqrt(w))


def test_to_builtin():
    value = to_builtin({"a": np.float64(1.5), "b": np.array([1, 2]), "c": math.nan, 3: np.bool_(True)})
    assert value == {"a": 1.5, "b": [1, 2], "c": None, "3": True}
    assert type(value["b"][0]) is int


def test_profile_is_written_at_full_precision(tmp_path):
    profile = make_profile()
    path = write_profile(tmp_path / "profile.csv", profile)
    assert path.read_text().splitlines()[0] == "xi,u,v"
    loaded = read_profile(path)
    np.testing.assert_array_equal(loaded.u.values, profile.u.values)
    np.testing.assert_array_equal(loaded.v.values, profile.v.values)
    assert loaded.grid == profile.grid


def test_rewrite_is_byte_identical(tmp_path):
    profile = make_profile()
    first = write_profile(tmp_path / "a.csv", profile).read_bytes()
    second = write_profile(tmp_path / "b.csv", profile).read_bytes()
    assert first == second


def test_read_profile_rejects_other_tables(tmp_path):
    path = write_trace(tmp_path / "trace.csv", np.arange(3.0), np.arange(3.0))
    with pytest.raises(ConfigError):
        read_profile(path)


def test_kpp_profile_carries_metadata(tmp_path):
    nodes = np.linspace(-1.0, 1.0, 3)
    path = write_kpp_profile(tmp_path / "kpp.csv", nodes, np.array([0.1, 0.5, 1.0]), {"d1": 0.5, "b": 1.0})
    lines = path.read_text().splitlines()
    assert lines[0] == "# d1=0.5 b=1"
    assert lines[1] == "xi,w"


def test_trace_roundtrip(tmp_path):
    times = np.linspace(0.0, 1.0, 4)
    fronts = np.array([1.0, np.nan, 2.0, 3.0])
    t, x = read_trace(write_trace(tmp_path / "trace.csv", times, fronts))
    np.testing.assert_array_equal(t, times)
    assert np.isnan(x[1])


def test_report_uses_serializer_extension(tmp_path):
    path = write_report(tmp_path / "report", {"c": 2.0, "bad": math.inf})
    assert path.name == "report.json"
    assert read_report(path) == {"bad": None, "c": 2.0}


def test_read_report_unknown_extension(tmp_path):
    with pytest.raises(ConfigError):
        read_report(tmp_path / "report.yaml")


def test_write_rows(tmp_path):
    path = write_rows(
        tmp_path / "summary.csv",
        [{"c": 2.0, "status": "pass", "passed": True}, {"c": 1.0, "status": "fail"}],
        ["c", "status", "passed"],
    )
    assert path.read_text() == "c,status,passed\n2,pass,true\n1,fail,\n"


def test_manifest_marks_missing_artifacts(tmp_path):
    present = write_report(tmp_path / "report", {"ok": True})
    manifest = RunManifest("wave", {"a1": 0.5, "a2": 2.0, "r": 0.5}, tmp_path, speed=2.0)
    manifest.add_stage("construct", "ok", [present])
    manifest.add_stage("fit", "ok", [tmp_path / "comparisons.csv"])
    path = manifest.write()
    written = read_report(path)
    assert path.name == "manifest.json"
    assert written["stages"]["construct"] == {"status": "ok", "artifacts": ["report.json"]}
    assert written["stages"]["fit"]["status"] == "incomplete"
    assert written["deterministic"] is True
