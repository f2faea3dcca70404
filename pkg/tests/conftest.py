from __future__ import annotations

from fractions import Fraction as F

import pytest

from patrol.generators import sample_admissible
from patrol.model import PufInstance

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line[1])


def record(number: int, ok: bool, text: str):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)


@pytest.fixture
def a1():
    return PufInstance.from_pairs([(0, F(5, 3)), (F(1, 2), F(1, 3)), (1, F(5, 3))])


RANDOM_SEEDS = range(1, 201)


def random_n(seed: int) -> int:
    return 4 + seed % 9


@pytest.fixture(scope="session")
def random_family():
    return [(seed, sample_admissible(seed, random_n(seed))) for seed in RANDOM_SEEDS]
