import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from hammology.metrics import DiscreteString, StringSet  # noqa: E402

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

WORKED = ["12244131", "22223443", "32143431", "14443214", "22134222"]


@pytest.fixture
def worked_set():
    return StringSet.parse(WORKED)


def random_set(rng: random.Random, n: int, l: int, m: int) -> StringSet:
    pool = set()
    while len(pool) < m:
        pool.add(tuple(rng.randint(1, n) for _ in range(l)))
    return StringSet(tuple(DiscreteString(s, n) for s in sorted(pool)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
