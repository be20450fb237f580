import json
import math

import pytest
from lv_waves import cli

SMALL = ["--a1", "0.5", "--a2", "2", "--r", "0.5"]
LARGE = ["--a1", "0.2", "--a2", "2", "--r", "2"]
C_STAR = math.sqrt(2.0)


def run_cli(*argv):
    """Run the command line and return its exit code."""
    return cli.main([str(arg) for arg in argv])


def load(path):
    return json.loads(path.read_text())


def by_key(report):
    return {(item["end"], item["component"]): item for item in report["comparisons"]}


@pytest.fixture(scope="session")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("small")
    code = run_cli("wave", *SMALL, "--c", 2, "--tol", 0.02, "--out", out)
    return code, out


@pytest.fixture(scope="session")
def large_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("large")
    code = run_cli("wave", *LARGE, "--c", 2, "--out", out)
    return code, out
