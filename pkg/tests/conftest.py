import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from opcohom.fixtures import builtin
from opcohom.hopfcore import check_axioms
from opcohom.linalg import Field

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class FixtureCache:
    """Session-wide store for validated fixtures and expensive operads."""

    def __init__(self):
        self._fixtures = {}
        self._store = {}

    def fixture(self, name, field=None):
        key = (name, field)
        if key not in self._fixtures:
            fx = builtin(name, field)
            self._fixtures[key] = fx
        return self._fixtures[key]

    def data(self, name, field=None):
        fx = self.fixture(name, field)
        a = fx.data
        if fx.valid:
            # mark the verified levels for downstream preconditions
            check_axioms(a, fx.declared_level)
        else:
            check_axioms(a, "algebra")
            if a.comult is not None:
                check_axioms(a, "coalgebra")
        return a

    def memo(self, key, builder):
        if key not in self._store:
            self._store[key] = builder()
        return self._store[key]


@pytest.fixture(scope="session")
def cache():
    return FixtureCache()


@pytest.fixture(scope="session")
def QQ():
    return Field.Q()
