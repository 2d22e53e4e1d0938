from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from osckit.cnum import CNum
from osckit.expalg import ExpPoly

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussian = st.builds(CNum, small_fracs, small_fracs)


@st.composite
def exppolys(draw, max_terms: int = 4, span: int = 4):
    den = draw(st.sampled_from((1, 2)))
    items = draw(st.dictionaries(st.integers(-span, span), gaussian, max_size=max_terms))
    return ExpPoly(items, den)


@pytest.fixture
def frac():
    return Fraction
