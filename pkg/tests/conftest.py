import pytest

from magicsurgery.color_code import build_code
from magicsurgery.surface_code import build_surface
from magicsurgery.surgery import merge


@pytest.fixture(scope="session")
def color1():
    return build_code(1)


@pytest.fixture(scope="session")
def color2():
    return build_code(2)


@pytest.fixture(scope="session")
def surface3():
    return build_surface(3)


@pytest.fixture(scope="session")
def merged1(color1, surface3):
    return merge(color1.code, color1.interface, surface3.code, surface3.interface)


@pytest.fixture(scope="session")
def merged2(color2):
    s = build_surface(5)
    return merge(color2.code, color2.interface, s.code, s.interface)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
