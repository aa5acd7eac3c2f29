import pytest
from hypothesis import settings

from chowkit.ideal import Variety
from chowkit.manifest import Manifest

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def manifest():
    return Manifest.default()


@pytest.fixture(scope="session")
def conic():
    return Variety.from_strings(["y0", "y1", "y2"], ["y0*y2 - y1^2"], name="conic",
                                param=["s^2", "s*t", "t^2"])


@pytest.fixture(scope="session")
def twisted_cubic():
    return Variety.from_strings(["y0", "y1", "y2", "y3"],
                                ["y0*y2 - y1^2", "y1*y3 - y2^2", "y0*y3 - y1*y2"],
                                name="twisted_cubic", param=["s^3", "s^2*t", "s*t^2", "t^3"])


@pytest.fixture(scope="session")
def p1():
    return Variety([], ["x0", "x1"], name="P1")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
