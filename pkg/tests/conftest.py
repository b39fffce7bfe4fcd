import random

import pytest

from hpabe import Universe, group_setup

ACCEPTANCE_RESULTS = []


class ScriptedRandom(random.Random):
    """Serves queued values from randrange, then falls back to a seeded stream."""

    def __new__(cls, values, seed=0):
        return super().__new__(cls, seed)

    def __init__(self, values, seed=0):
        super().__init__(seed)
        self.queue = list(values)

    def randrange(self, start, stop=None, step=1):
        if self.queue:
            v = self.queue.pop(0)
            lo, hi = (0, start) if stop is None else (start, stop)
            assert lo <= v < hi, f"scripted value {v} outside [{lo}, {hi})"
            return v
        return super().randrange(start, stop, step)


@pytest.fixture
def scripted():
    return ScriptedRandom


@pytest.fixture(scope="session")
def tiny_params():
    """p = 101, for hand-worked vectors."""
    return group_setup(7, "transparent", prime=101)


@pytest.fixture(scope="session")
def params():
    return group_setup(61, "transparent", seed=bytes(32))


@pytest.fixture(scope="session")
def hand_universe():
    return Universe.from_dict({"a1": ["v11", "v12"], "a2": ["v21", "v22"]})


@pytest.fixture(scope="session")
def demo_universe():
    return Universe.from_dict({"dept": ["cs", "ee", "me"], "level": ["phd", "ms", "bs"]})


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
