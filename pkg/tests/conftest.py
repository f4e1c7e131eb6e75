import pytest
from hypothesis import settings

from rabkit import limits
from rabkit.chambers import Building
from rabkit.colouring import LegalColouring
from rabkit.diagram import path, tree, triangle

settings.register_profile("rabkit", max_examples=60, deadline=None)
settings.load_profile("rabkit")


@pytest.fixture(autouse=True)
def _default_limits():
    limits.set_limits(limits.Limits())
    yield
    limits.set_limits(None)


@pytest.fixture
def tree_building():
    return Building(tree((3, 3)))


@pytest.fixture
def path_building():
    return Building(path((3, 3, 3)))


@pytest.fixture
def triangle_building():
    return Building(triangle((3, 3, 3)))


@pytest.fixture
def tree_colouring(tree_building):
    return LegalColouring(tree_building)


@pytest.fixture
def path_colouring(path_building):
    return LegalColouring(path_building)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
