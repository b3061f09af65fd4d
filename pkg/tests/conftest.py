import random

import pytest

from hybridmod.modmath import Modulus

ACCEPTANCE_LINES = []


def msb_moduli(n):
    return [Modulus(v, n) for v in range(1 << (n - 1), 1 << n)]


def random_modulus(rng: random.Random, n: int) -> Modulus:
    return Modulus(rng.getrandbits(n) | (1 << (n - 1)), n)


@pytest.fixture
def rng():
    return random.Random(20241016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
