import math
import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def units(q):
    return [a for a in range(1, q) if math.gcd(a, q) == 1]


def random_input(rng: random.Random, n: int, qmax: int, qmin: int = 2):
    q = rng.randint(qmin, qmax)
    return q, tuple(rng.choice(units(q)) for _ in range(n - 1))


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
