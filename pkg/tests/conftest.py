import pytest
from hypothesis import HealthCheck, settings

from artifact.graph import Graph, complete_graph, glue

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph(10, outer + inner + spokes)


def two_k4() -> Graph:
    """Two K4 sharing the vertices 2 and 3."""
    return glue(complete_graph(4), complete_graph(4), {2: 0, 3: 1})


@pytest.fixture
def glued_k4() -> Graph:
    return two_k4()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
