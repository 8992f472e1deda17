import math
import sys

import pytest

from kgdesitter.geometry import build_chart


@pytest.fixture(scope="session")
def desitter3():
    return build_chart("desitter", n=3, size=24, x_min=math.exp(-3))


@pytest.fixture(scope="session")
def torus2():
    return build_chart("product", n=2, size=12, x_min=math.exp(-3))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
