from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gapped.linalg_ff import Matrix

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("default")

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, p=None, rows=None, cols=None, max_side=4):
    p = draw(primes) if p is None else p
    r = draw(st.integers(0, max_side)) if rows is None else rows
    c = draw(st.integers(0, max_side)) if cols is None else cols
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return Matrix(r, c, tuple(entries), p)


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, echoed after the run so it lands in the log
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
