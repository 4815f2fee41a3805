import pytest
from hypothesis import HealthCheck, settings

from scrollfano.chambers import census
from scrollfano.scenarios import load_scenario

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def c12():
    return load_scenario("c12")


@pytest.fixture(scope="session")
def syz():
    return load_scenario("syz")


@pytest.fixture(scope="session")
def nonsyz():
    return load_scenario("nonsyz")


@pytest.fixture(scope="session")
def scenarios(c12, syz, nonsyz):
    return {"c12": c12, "syz": syz, "nonsyz": nonsyz}


@pytest.fixture(scope="session")
def graphs(scenarios):
    """Census graphs, computed once per test session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = census(scenarios[name])
        return cache[name]

    return get


_CRITERIA = []


@pytest.fixture
def criterion():
    """Context manager that records one PASS/FAIL line for the run summary."""
    from contextlib import contextmanager

    @contextmanager
    def check(number, name):
        notes = []
        try:
            yield notes
        except BaseException:
            _CRITERIA.append((number, name, "FAIL", "; ".join(notes)))
            raise
        _CRITERIA.append((number, name, "PASS", "; ".join(notes)))

    return check


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, name, status, detail in sorted(_CRITERIA):
        line = f"{status}  [{number:2d}] {name}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
