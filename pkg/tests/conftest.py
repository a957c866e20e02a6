import os
from pathlib import Path

import pytest
from hypothesis import settings

from dequetsip import cache, gfpipeline

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def bundle50():
    return gfpipeline.compute_bundle(50)


@pytest.fixture(scope="session")
def long_series():
    """P and D through t^300, from the series cache when present."""
    return gfpipeline.compute_bundle(300, cache_dir=cache.default_cache_dir())


@pytest.fixture(scope="session")
def series200(long_series):
    return long_series.P.truncate(200), long_series.D.truncate(200)


# PASS/FAIL lines from test_acceptance.py, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
