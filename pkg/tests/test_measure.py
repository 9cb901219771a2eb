from fractions import Fraction

import pytest
from hypothesis import given

from symspace import (
    INF,
    InfiniteBlock,
    MeasureSpace,
    PartitionMap,
    SpaceMismatch,
    StepFunction,
    WeightNotIntegrable,
    canonicalize,
    conditional_expectation,
    delta0_metric,
    integrate,
    pointwise,
)
from conftest import step_functions

F = Fraction
sf = StepFunction.from_pieces


def test_canonicalize_examples():
    assert canonicalize(sf([(2, 1), (2, 1)])).pieces == ((2, 2),)
    assert canonicalize(sf([(3, 0), (1, 1)])).pieces == ((1, 1),)
    f = sf([(1, 1), (2, 3)])
    assert canonicalize(f) == f


@given(step_functions())
def test_canonicalize_idempotent_and_integral_preserving(f):
    g = canonicalize(f)
    assert canonicalize(g) == g
    assert integrate(g) == integrate(f)


def test_integrate_examples(f0):
    assert integrate(f0) == 6
    assert integrate(sf([(-2, 1), (1, 1)])) == -1
    assert integrate(StepFunction(MeasureSpace.infinite(), ((3, 2),), 1)) is INF


def test_finite_space_requires_full_cover():
    with pytest.raises(ValueError):
        StepFunction(MeasureSpace(3), ((1, 1),))
    with pytest.raises(ValueError):
        StepFunction(MeasureSpace(1), ((1, 1),), 1)


def test_pointwise_examples():
    assert pointwise(sf([(1, 2)]), sf([(2, 2)]), "add").pieces == ((3, 2),)
    added = pointwise(sf([(1, 1), (0, 1)]), sf([(0, 1), (1, 1)]), "add")
    assert canonicalize(added).pieces == ((1, 2),)
    assert canonicalize(pointwise(sf([(3, 1), (1, 1)]), sf([(2, 2)]), "min")).pieces == ((2, 1), (1, 1))
    with pytest.raises(SpaceMismatch):
        pointwise(sf([(1, 1)]), sf([(1, 2)]), "add")
    with pytest.raises(ValueError):
        pointwise(sf([(1, 1)]), sf([(1, 1)]), "pow")


def test_pointwise_on_infinite_space():
    inf = MeasureSpace.infinite()
    f = StepFunction(inf, ((1, 2),), F(1, 2))
    g = StepFunction(inf, ((5, 1),), 2)
    h = pointwise(f, g, "add")
    assert h.pieces == ((6, 1), (3, 1)) and h.tail_value == F(5, 2)


def test_conditional_expectation_examples():
    f = sf([(2, 1), (4, 1)])
    assert canonicalize(conditional_expectation(f, PartitionMap(("a", "a")))).pieces == ((3, 2),)
    assert conditional_expectation(f, PartitionMap((0, 1))) == f
    g = sf([(6, 1), (0, 2)])
    e = conditional_expectation(g, PartitionMap(("b", "b")))
    assert canonicalize(e).pieces == ((2, 3),) and integrate(e) == integrate(g) == 6
    with pytest.raises(InfiniteBlock):
        conditional_expectation(StepFunction(MeasureSpace.infinite(), ((1, 1),), 1), PartitionMap((0,), tail_block=0))


@given(step_functions(kind="finite"), step_functions(kind="finite"))
def test_conditional_expectation_adjoint(f, h):
    # blocks: first half of the pieces vs the rest; h is made block-measurable by averaging
    k = len(f.pieces)
    blocks = PartitionMap(tuple(0 if i < k // 2 else 1 for i in range(k)))
    h_vals = {0: h.pieces[0][0], 1: h.pieces[-1][0]}
    g = StepFunction(f.space, tuple((h_vals[b], m) for (_, m), b in zip(f.pieces, blocks.block_assignment)))
    lhs = integrate(pointwise(conditional_expectation(f, blocks), g, "multiply"))
    assert lhs == integrate(pointwise(f, g, "multiply"))


def test_delta0_examples():
    one = sf([(1, 1)])
    assert delta0_metric(one, sf([(0, 1)]), one) == F(1, 2)
    assert delta0_metric(sf([(3, 1)]), sf([(1, 1)]), one) == F(2, 3)
    assert delta0_metric(one, one) == 0


def test_delta0_weight_errors():
    inf = MeasureSpace.infinite()
    f = StepFunction(inf, ((1, 1),))
    with pytest.raises(WeightNotIntegrable):
        delta0_metric(f, f, StepFunction(inf, ((1, 1),), 1))
    with pytest.raises(ValueError):
        delta0_metric(sf([(1, 1)]), sf([(1, 1)]), sf([(0, 1)]))


@given(step_functions(kind="tail"), step_functions(kind="tail"), step_functions(kind="tail"))
def test_delta0_metric_axioms_on_half_line(f, g, h):
    d = delta0_metric
    assert d(f, f) == 0
    assert d(f, g) == d(g, f) >= 0
    assert d(f, h) <= d(f, g) + d(g, h)
    assert d(f, g) <= 1


@given(step_functions(kind="finite"))
def test_delta0_zero_only_for_equal(f):
    g = pointwise(f, StepFunction(f.space, ((1, f.space.total_mass),)), "add")
    assert delta0_metric(f, g) > 0


@given(step_functions())
def test_json_round_trip(f):
    assert StepFunction.from_dict(f.to_dict()) == f
