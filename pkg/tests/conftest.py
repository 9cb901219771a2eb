from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from symspace import MeasureSpace, StepFunction

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

values = st.builds(Fraction, st.integers(-100, 100), st.integers(1, 100))
nonneg_values = st.builds(Fraction, st.integers(0, 100), st.integers(1, 100))
masses = st.builds(Fraction, st.integers(1, 100), st.integers(1, 100))


@st.composite
def step_functions(draw, kind=None, nonneg=False, max_pieces=12):
    kind = kind or draw(st.sampled_from(["finite", "infinite", "tail"]))
    pieces = draw(st.lists(st.tuples(nonneg_values if nonneg else values, masses), min_size=1, max_size=max_pieces))
    if kind == "finite":
        return StepFunction.from_pieces(pieces)
    tail = draw(st.builds(Fraction, st.integers(1, 100), st.integers(1, 100))) if kind == "tail" else Fraction(0)
    return StepFunction(MeasureSpace.infinite(), tuple(pieces), tail)


@pytest.fixture
def f0():
    return StepFunction.from_pieces([(3, 1), (1, 2), (2, Fraction(1, 2))])


@pytest.fixture
def unit_tail():
    """f = 1 everywhere on the half-line."""
    return StepFunction(MeasureSpace.infinite(), (), Fraction(1))
