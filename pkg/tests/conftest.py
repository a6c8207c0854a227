import pytest

from gammaloop.constructions import bruck_from_group, gamma_from_group
from gammaloop.groups import corpus as build_corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def gammas(corpus):
    return {name: gamma_from_group(g).table for name, g in corpus.items()}


@pytest.fixture(scope="session")
def brucks(corpus):
    return {name: bruck_from_group(g).table for name, g in corpus.items()}


@pytest.fixture(scope="session")
def g21(corpus):
    return corpus["C7:C3"]


@pytest.fixture(scope="session")
def gamma21(gammas):
    return gammas["C7:C3"]


@pytest.fixture(scope="session")
def bruck21(brucks):
    return brucks["C7:C3"]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Store ``(criterion, ok, note)``; lines are printed in the terminal summary."""
    def _record(number, ok, note=""):
        status = "PASS" if ok is True else ("FAIL" if ok is False else ok)
        line = f"criterion {number:>2}: {status}"
        if note:
            line += f"  {note}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
