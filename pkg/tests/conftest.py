from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dpss.ensemble import Direction, Ensemble

PERIMETERS = (Fraction(1), Fraction(2), Fraction(7, 3), Fraction(10))

ACCEPTANCE_LINES = []


def E(perimeter, *states):
    """Shorthand: ``E(2, ("1/2", 1), ("3/2", -1))``."""
    return Ensemble.build(perimeter, states)


@st.composite
def ensembles(draw, n_min=1, n_max=6, max_den=8, perimeters=PERIMETERS):
    n = draw(st.integers(n_min, n_max))
    p = draw(st.sampled_from(perimeters))
    locs = []
    for _ in range(n):
        q = draw(st.integers(1, max_den))
        k = draw(st.integers(0, int(p * q)))
        locs.append(Fraction(k, q))
    locs.sort()
    dirs = draw(st.lists(st.sampled_from(list(Direction)), min_size=n, max_size=n))
    return Ensemble.build(p, zip(locs, dirs))


@st.composite
def times(draw, limit=6, max_den=16):
    q = draw(st.integers(1, max_den))
    return Fraction(draw(st.integers(0, limit * q)), q)


@pytest.fixture
def acceptance_log():
    def record(number, ok, text):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
