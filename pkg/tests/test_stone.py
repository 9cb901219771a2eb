from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from symspace import (
    FiniteBooleanAlgebra,
    NotAMember,
    WeightedSpace,
    factor_space,
    generate_algebra,
    integrate,
    point_ultrafilter,
    rearrangement,
    standardize,
    stone_map,
    ultrafilters,
    zeta_partition,
)
from symspace.stone import check_ultrafilter, from_bits, stone_isomorphism_holds, to_bits


def naive_closure(n, gens):
    """Iterate union and complement to a fixpoint."""
    full = (1 << n) - 1
    sets = {0, full} | set(gens)
    while True:
        new = {full ^ a for a in sets} | {a | b for a in sets for b in sets}
        if new <= sets:
            return frozenset(sets)
        sets |= new


def is_ultrafilter(alg, fam):
    try:
        check_ultrafilter(alg, fam)
        return True
    except ValueError:
        return False


def brute_ultrafilters(alg):
    members = alg.sorted_members()
    out = []
    for r in range(1, len(members) + 1):
        for fam in combinations(members, r):
            if is_ultrafilter(alg, fam):
                out.append(frozenset(fam))
    return out


@st.composite
def generator_sets(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    gens = draw(st.lists(st.lists(st.integers(0, n - 1), unique=True), max_size=5))
    return n, gens


FOUR = generate_algebra(3, [[0]])


def test_generate_examples():
    assert sorted(map(from_bits, FOUR.members)) == [[], [0], [0, 1, 2], [1, 2]]
    assert len(generate_algebra(3, [[0], [1]]).members) == 8
    assert generate_algebra(3, []).members == frozenset({0, 7})


def test_algebra_validation():
    with pytest.raises(ValueError):
        FiniteBooleanAlgebra(3, frozenset({0, 1, 7}))
    with pytest.raises(ValueError):
        FiniteBooleanAlgebra(3, frozenset({0, 1, 6, 2, 5, 7}))
    with pytest.raises(ValueError):
        generate_algebra(17, [])


@given(generator_sets(max_n=8))
def test_generate_matches_naive_closure(case):
    n, gens = case
    alg = generate_algebra(n, gens)
    assert alg.members == naive_closure(n, [to_bits(g, n) for g in gens])


def test_zeta_examples():
    assert [from_bits(b) for b in zeta_partition(FOUR).blocks] == [[0], [1, 2]]
    assert len(zeta_partition(generate_algebra(3, [[0], [1]])).blocks) == 3
    assert zeta_partition(generate_algebra(3, [])).blocks == (7,)


@given(generator_sets())
def test_zeta_blocks_are_inseparable_classes(case):
    n, gens = case
    alg = generate_algebra(n, gens)
    zeta = zeta_partition(alg)
    for w1 in range(n):
        for w2 in range(n):
            together = zeta.block_of(w1) == zeta.block_of(w2)
            separated = any((a >> w1 & 1) and not (a >> w2 & 1) for a in alg.members)
            assert together == (not separated)
    for a in alg.members:
        assert zeta.is_zeta_set(a)
    for k, b in enumerate(zeta.blocks):
        w = from_bits(b)[0]
        meet = alg.full
        for a in alg.members:
            if a >> w & 1:
                meet &= a
        assert meet == b


def test_ultrafilter_examples():
    assert len(ultrafilters(FOUR)) == 2
    assert len(ultrafilters(generate_algebra(3, [[0], [1]]))) == 3
    assert len(ultrafilters(generate_algebra(3, []))) == 1


@given(generator_sets(max_n=5).filter(lambda c: len(c[1]) <= 2))
def test_ultrafilters_match_brute_force(case):
    n, gens = case
    alg = generate_algebra(n, gens)
    found = {frozenset(u.sets(alg)) for u in ultrafilters(alg)}
    assert found == set(brute_ultrafilters(alg))


def test_stone_map_examples():
    us = ultrafilters(FOUR)
    assert stone_map(FOUR, [0, 1, 2]) == frozenset(us)
    assert stone_map(FOUR, []) == frozenset()
    (u,) = stone_map(FOUR, [1, 2])
    assert u == point_ultrafilter(FOUR, 1)
    with pytest.raises(NotAMember):
        stone_map(FOUR, [1])


@given(generator_sets())
def test_stone_map_is_isomorphism(case):
    alg = generate_algebra(*case)
    assert stone_isomorphism_holds(alg)


def test_point_ultrafilter_examples():
    power = generate_algebra(3, [[0], [1]])
    u = point_ultrafilter(power, 1)
    assert all(a >> 1 & 1 for a in u.sets(power)) and len(u.sets(power)) == 4
    assert point_ultrafilter(FOUR, 1) == point_ultrafilter(FOUR, 2)
    trivial = generate_algebra(3, [])
    assert len({point_ultrafilter(trivial, w) for w in range(3)}) == 1


@given(generator_sets())
def test_block_representatives_biject_onto_ultrafilters(case):
    n, gens = case
    alg = generate_algebra(n, gens)
    reps = [from_bits(b)[0] for b in zeta_partition(alg).blocks]
    images = [point_ultrafilter(alg, w) for w in reps]
    assert len(set(images)) == len(images) and set(images) == set(ultrafilters(alg))
    separating = len(zeta_partition(alg).blocks) == n
    assert separating == (len({point_ultrafilter(alg, w) for w in range(n)}) == n)


def test_factor_examples():
    space = WeightedSpace([1, 2, 3])
    factor, proj = factor_space(space, FOUR)
    assert factor.weights == (1, 5) and proj == (0, 1, 1)
    factor, proj = factor_space(space, generate_algebra(3, [[0], [1]]))
    assert factor == space and proj == (0, 1, 2)
    assert factor_space(space, generate_algebra(3, []))[0].weights == (6,)
    with pytest.raises(ValueError):
        WeightedSpace([1, 0])


@given(generator_sets(), st.data())
def test_factor_projection_preserves_measure(case, data):
    n, gens = case
    alg = generate_algebra(n, gens)
    weights = data.draw(st.lists(st.integers(1, 50), min_size=n, max_size=n))
    space = WeightedSpace(weights)
    factor, proj = factor_space(space, alg)
    for a in alg.members:
        image = {proj[w] for w in from_bits(a)}
        assert space.mass(a) == sum((factor.weights[k] for k in image), Fraction(0))


def test_standardize_preserves_integral_and_distribution():
    space = WeightedSpace([1, 2, 3])
    f = standardize(space, [5, -1, -1], FOUR)
    assert f.pieces == ((5, 1), (-1, 5)) and integrate(f) == 0
    g = standardize(space, [5, -1, -1])
    assert rearrangement(f) == rearrangement(g)
    with pytest.raises(ValueError):
        standardize(space, [5, 1, 2], FOUR)
