"""Finite Boolean algebras of sets, their atoms, ultrafilters and the Stone map.

Subsets of the ground set ``{0..n-1}`` are int bitsets: bit i is set when point i is
in the set. A finite algebra is determined by its atoms, which partition the ground
set. Members are exactly the unions of atoms, and the ultrafilters are exactly the
families of members that contain one fixed atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from symspace._exact import to_rational
from symspace.errors import NotAMember
from symspace.measure import MeasureSpace, StepFunction

__all__ = [
    "MAX_GROUND",
    "FiniteBooleanAlgebra",
    "Ultrafilter",
    "ZetaPartition",
    "WeightedSpace",
    "generate_algebra",
    "zeta_partition",
    "ultrafilters",
    "stone_map",
    "point_ultrafilter",
    "factor_space",
    "standardize",
    "to_bits",
    "from_bits",
]

MAX_GROUND = 16


def to_bits(points: Iterable[int], n: int) -> int:
    bits = 0
    for i in points:
        if not 0 <= i < n:
            raise ValueError(f"point {i} outside ground set of size {n}")
        bits |= 1 << i
    return bits


def from_bits(bits: int) -> list[int]:
    return [i for i in range(bits.bit_length()) if bits >> i & 1]


def _check_size(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"ground size must be a positive integer, got {n!r}")
    if n > MAX_GROUND:
        raise ValueError(f"ground size {n} exceeds the supported maximum {MAX_GROUND}")


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    ground_size: int
    members: frozenset[int]

    def __post_init__(self):
        _check_size(self.ground_size)
        members = frozenset(self.members)
        full = self.full
        if 0 not in members or full not in members:
            raise ValueError("an algebra contains the empty set and the full set")
        for a in members:
            if a & ~full:
                raise ValueError(f"member {from_bits(a)} is not a subset of the ground set")
            if full ^ a not in members:
                raise ValueError(f"not closed under complement: {from_bits(a)}")
        # closure under complement plus union gives closure under intersection
        sets = np.array(sorted(members), dtype=np.int64)
        present = np.zeros(full + 1, dtype=bool)
        present[sets] = True
        bad = ~present[sets[:, None] | sets[None, :]]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValueError(f"not closed under union: {from_bits(int(sets[i]))}, {from_bits(int(sets[j]))}")
        object.__setattr__(self, "members", members)

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def sorted_members(self) -> list[int]:
        """Canonical order: by size, then by bitset value."""
        return sorted(self.members, key=lambda a: (a.bit_count(), a))

    def atoms(self) -> list[int]:
        return sorted(_atoms_of(self.members), key=lambda a: (a & -a))

    def __contains__(self, a: int) -> bool:
        return a in self.members


def _atoms_of(members: Iterable[int]) -> list[int]:
    nonempty = [a for a in members if a]
    return [a for a in nonempty if not any(b != a and b & a == b for b in nonempty)]


def _refine_atoms(n: int, generators: Iterable[int]) -> list[int]:
    """Split the ground set by every generator; the pieces are the atoms it generates."""
    full = (1 << n) - 1
    blocks = [full]
    for g in generators:
        split = []
        for b in blocks:
            for part in (b & g, b & ~g):
                if part:
                    split.append(part)
        blocks = split
    return sorted(blocks, key=lambda a: (a & -a))


def _unions(atoms: Sequence[int]) -> frozenset[int]:
    out = {0}
    for a in atoms:
        out |= {m | a for m in out}
    return frozenset(out)


def generate_algebra(n: int, generators: Iterable[Iterable[int]]) -> FiniteBooleanAlgebra:
    """Smallest algebra of subsets of ``{0..n-1}`` containing the generators."""
    _check_size(n)
    gens = [to_bits(g, n) for g in generators]
    return FiniteBooleanAlgebra(n, _unions(_refine_atoms(n, gens)))


@dataclass(frozen=True)
class ZetaPartition:
    blocks: tuple[int, ...]

    def block_of(self, point: int) -> int:
        for k, b in enumerate(self.blocks):
            if b >> point & 1:
                return k
        raise ValueError(f"point {point} is not covered")

    def is_zeta_set(self, a: int) -> bool:
        return all(b & a in (0, b) for b in self.blocks)


def zeta_partition(alg: FiniteBooleanAlgebra) -> ZetaPartition:
    """Blocks of points that no member separates; these are the atoms."""
    return ZetaPartition(tuple(alg.atoms()))


@dataclass(frozen=True)
class Ultrafilter:
    """``selected`` are indices into ``alg.sorted_members()``."""

    selected: frozenset[int]

    def sets(self, alg: FiniteBooleanAlgebra) -> list[int]:
        order = alg.sorted_members()
        return [order[i] for i in sorted(self.selected)]


def check_ultrafilter(alg: FiniteBooleanAlgebra, family: Iterable[int]) -> None:
    """Raise ValueError unless ``family`` (bitsets) is an ultrafilter of alg."""
    fam = np.array(sorted(set(family)), dtype=np.int64)
    sets = np.array(alg.sorted_members(), dtype=np.int64)
    inside = np.zeros(alg.full + 1, dtype=bool)
    inside[fam] = True
    member = np.zeros(alg.full + 1, dtype=bool)
    member[sets] = True
    if inside[0]:
        raise ValueError("contains the empty set")
    if not member[fam].all():
        raise ValueError("contains a set outside the algebra")
    above = (fam[:, None] & sets[None, :]) == fam[:, None]
    if (above & ~inside[sets][None, :]).any():
        raise ValueError("not upward closed")
    if not inside[fam[:, None] & fam[None, :]].all():
        raise ValueError("not closed under intersection")
    if (inside[sets] == inside[alg.full ^ sets]).any():
        raise ValueError("exactly one of each member and its complement must belong")


def _ultrafilter_at(alg: FiniteBooleanAlgebra, atom: int) -> Ultrafilter:
    order = alg.sorted_members()
    return Ultrafilter(frozenset(i for i, a in enumerate(order) if a & atom == atom))


def ultrafilters(alg: FiniteBooleanAlgebra) -> list[Ultrafilter]:
    out = []
    for atom in alg.atoms():
        u = _ultrafilter_at(alg, atom)
        check_ultrafilter(alg, u.sets(alg))
        out.append(u)
    return out


def stone_map(alg: FiniteBooleanAlgebra, a) -> frozenset[Ultrafilter]:
    """Ultrafilters containing the member ``a`` (a bitset or an iterable of points)."""
    bits = a if isinstance(a, int) else to_bits(a, alg.ground_size)
    if bits not in alg:
        raise NotAMember(f"{from_bits(bits)} is not a member of the algebra")
    index = alg.sorted_members().index(bits)
    return frozenset(u for u in ultrafilters(alg) if index in u.selected)


def point_ultrafilter(alg: FiniteBooleanAlgebra, point: int) -> Ultrafilter:
    if not 0 <= point < alg.ground_size:
        raise ValueError(f"point {point} outside ground set of size {alg.ground_size}")
    order = alg.sorted_members()
    return Ultrafilter(frozenset(i for i, a in enumerate(order) if a >> point & 1))


def stone_isomorphism_holds(alg: FiniteBooleanAlgebra) -> bool:
    """Check that the Stone map preserves union, intersection and complement and is injective.

    The Stone image of each member is encoded as a bitmask over the ultrafilters. A
    lookup table from bitsets to member indices lets all member pairs be checked as
    array operations.
    """
    order = alg.sorted_members()
    us = ultrafilters(alg)
    image = np.zeros(len(order), dtype=np.int64)
    for k, u in enumerate(us):
        image[list(u.selected)] |= 1 << k
    if len(np.unique(image)) != len(order):
        return False
    lookup = np.full(1 << alg.ground_size, -1, dtype=np.int64)
    sets = np.array(order, dtype=np.int64)
    lookup[sets] = np.arange(len(order))
    everything = (1 << len(us)) - 1
    if not np.array_equal(image[lookup[alg.full ^ sets]], everything ^ image):
        return False
    cup = lookup[sets[:, None] | sets[None, :]]
    cap = lookup[sets[:, None] & sets[None, :]]
    if (cup < 0).any() or (cap < 0).any():
        return False
    return bool(
        np.array_equal(image[cup], image[:, None] | image[None, :])
        and np.array_equal(image[cap], image[:, None] & image[None, :])
    )


@dataclass(frozen=True)
class WeightedSpace:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(to_rational(w) for w in self.weights)
        if not weights or any(not w > 0 for w in weights):
            raise ValueError("weights must be a nonempty list of positive rationals")
        object.__setattr__(self, "weights", weights)

    def mass(self, bits: int) -> Fraction:
        return sum((w for i, w in enumerate(self.weights) if bits >> i & 1), Fraction(0))

    def integrate(self, values: Sequence) -> Fraction:
        return sum((to_rational(v) * w for v, w in zip(values, self.weights, strict=True)), Fraction(0))


def factor_space(space: WeightedSpace, alg: FiniteBooleanAlgebra) -> tuple[WeightedSpace, tuple[int, ...]]:
    """Collapse every ζ-block to one point; ``projection[i]`` is the block of point i."""
    if len(space.weights) != alg.ground_size:
        raise ValueError("weights and algebra have different ground sizes")
    zeta = zeta_partition(alg)
    weights = tuple(space.mass(b) for b in zeta.blocks)
    projection = tuple(zeta.block_of(i) for i in range(alg.ground_size))
    return WeightedSpace(weights), projection


def standardize(space: WeightedSpace, values: Sequence, alg: Optional[FiniteBooleanAlgebra] = None) -> StepFunction:
    """Carry a function on a finite weighted space to the interval ``[0, total mass)``.

    Point i becomes an interval of length ``weights[i]``, laid out in ground order, so
    integrals and distributions are preserved. With ``alg`` the values must be constant
    on ζ-blocks and each block becomes one interval.
    """
    vals = [to_rational(v) for v in values]
    if len(vals) != len(space.weights):
        raise ValueError("one value per ground point is required")
    if alg is None:
        pieces = tuple(zip(vals, space.weights))
    else:
        pieces = []
        for b in zeta_partition(alg).blocks:
            pts = from_bits(b)
            if len({vals[i] for i in pts}) != 1:
                raise ValueError(f"values are not constant on the block {pts}")
            pieces.append((vals[pts[0]], space.mass(b)))
        pieces = tuple(pieces)
    total = sum(space.weights, Fraction(0))
    return StepFunction(MeasureSpace(total), pieces)
