import json
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from bsdtwins.isogeny import two_isogeny
from bsdtwins.model import WeierstrassModel

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

E1_AB = (25350, 2471625)
E2_AB = (-50700, 632736000)


def load(name: str):
    return json.loads((DATA / name).read_text())


@pytest.fixture(scope="session")
def base_iso():
    return two_isogeny(*E1_AB)


@pytest.fixture(scope="session")
def E1():
    return WeierstrassModel.from_ab(*E1_AB)


@pytest.fixture(scope="session")
def E2():
    return WeierstrassModel.from_ab(*E2_AB)


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
