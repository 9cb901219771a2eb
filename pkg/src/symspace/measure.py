"""Finite-partition measure spaces and simple functions with exact rational arithmetic.

A :class:`StepFunction` lists its pieces as consecutive left-closed intervals of the
standard interval ``[0, a)`` (or ``[0, inf)``), so two functions on the same space
can always be compared pointwise after a common refinement. On an infinite space the
pieces cover a finite initial stretch and ``tail_value`` is the (nonnegative) value
on the infinite remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Optional, Sequence

from symspace._exact import INF, Extended, fmt, is_inf, to_rational
from symspace.errors import InfiniteBlock, SpaceMismatch, WeightNotIntegrable

__all__ = [
    "INF",
    "MeasureSpace",
    "StepFunction",
    "PartitionMap",
    "canonicalize",
    "integrate",
    "pointwise",
    "conditional_expectation",
    "delta0_metric",
    "refine",
]

Piece = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class MeasureSpace:
    total_mass: Extended

    def __post_init__(self):
        mass = to_rational(self.total_mass)
        if not mass > 0:
            raise ValueError(f"total_mass must be positive, got {mass}")
        object.__setattr__(self, "total_mass", mass)

    @classmethod
    def infinite(cls) -> "MeasureSpace":
        return cls(INF)

    @property
    def is_finite(self) -> bool:
        return not is_inf(self.total_mass)

    def to_dict(self) -> dict:
        return {"total_mass": fmt(self.total_mass)}


@dataclass(frozen=True)
class StepFunction:
    space: MeasureSpace
    pieces: tuple[Piece, ...]
    tail_value: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        pieces = tuple((to_rational(v), to_rational(m)) for v, m in self.pieces)
        tail = to_rational(self.tail_value)
        for v, m in pieces:
            if is_inf(v) or is_inf(m):
                raise ValueError("piece values and masses must be finite rationals")
            if m < 0:
                raise ValueError(f"negative piece mass {m}")
        if is_inf(tail) or tail < 0:
            raise ValueError(f"tail_value must be a nonnegative rational, got {tail}")
        extent = sum((m for _, m in pieces), Fraction(0))
        if self.space.is_finite:
            if extent != self.space.total_mass:
                raise ValueError(
                    f"piece masses sum to {extent}, expected total_mass {self.space.total_mass}"
                )
            if tail != 0:
                raise ValueError("tail_value must be 0 on a finite space")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "tail_value", tail)

    @classmethod
    def from_pieces(cls, pieces: Iterable, total_mass=None, tail_value=0) -> "StepFunction":
        """Build a function; ``total_mass`` defaults to the sum of the piece masses."""
        pieces = tuple((to_rational(v), to_rational(m)) for v, m in pieces)
        if total_mass is None:
            total_mass = sum((m for _, m in pieces), Fraction(0))
        return cls(MeasureSpace(total_mass), pieces, tail_value)

    @classmethod
    def zero(cls, space: MeasureSpace) -> "StepFunction":
        if space.is_finite:
            return cls(space, ((Fraction(0), space.total_mass),))
        return cls(space, ())

    @property
    def finite_extent(self) -> Fraction:
        return sum((m for _, m in self.pieces), Fraction(0))

    def scale(self, c) -> "StepFunction":
        c = to_rational(c)
        return StepFunction(self.space, tuple((c * v, m) for v, m in self.pieces), abs(c) * self.tail_value)

    def abs(self) -> "StepFunction":
        return StepFunction(self.space, tuple((abs(v), m) for v, m in self.pieces), self.tail_value)

    def value_at(self, x: Fraction) -> Fraction:
        pos = Fraction(0)
        for v, m in self.pieces:
            if pos <= x < pos + m:
                return v
            pos += m
        if not self.space.is_finite and x >= pos:
            return self.tail_value
        raise ValueError(f"{x} outside the domain")

    def to_dict(self) -> dict:
        return {
            "space": self.space.to_dict(),
            "pieces": [[fmt(v), fmt(m)] for v, m in self.pieces],
            "tail_value": fmt(self.tail_value),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StepFunction":
        try:
            space = MeasureSpace(doc["space"]["total_mass"])
            pieces = doc["pieces"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"StepFunction document is missing field {exc}") from None
        return cls(space, tuple(tuple(p) for p in pieces), doc.get("tail_value", "0"))


@dataclass(frozen=True)
class PartitionMap:
    """Block id per piece; ``tail_block`` names the block containing the infinite tail."""

    block_assignment: tuple[Hashable, ...]
    tail_block: Optional[Hashable] = None

    def __post_init__(self):
        object.__setattr__(self, "block_assignment", tuple(self.block_assignment))


def canonicalize(f: StepFunction) -> StepFunction:
    out: list[list[Fraction]] = []
    for v, m in f.pieces:
        if m == 0:
            continue
        if out and out[-1][0] == v:
            out[-1][1] += m
        else:
            out.append([v, m])
    if not f.space.is_finite:
        while out and out[-1][0] == f.tail_value:
            out.pop()
    return StepFunction(f.space, tuple((v, m) for v, m in out), f.tail_value)


def integrate(f: StepFunction) -> Extended:
    total = sum((v * m for v, m in f.pieces), Fraction(0))
    if not f.space.is_finite and f.tail_value > 0:
        return INF
    return total


def refine(funcs: Sequence[StepFunction]) -> tuple[list[tuple[Fraction, list[Fraction]]], list[Fraction]]:
    """Common refinement of functions on one standard interval.

    Returns ``(cells, tails)``: ``cells`` is a list of ``(length, values)`` covering
    ``[0, M)`` with M the largest finite extent; past its own pieces a function takes
    its tail value. ``tails`` are the values on ``[M, inf)``.
    """
    end = max(f.finite_extent for f in funcs)
    idx = [0] * len(funcs)
    rem = [f.pieces[0][1] if f.pieces else INF for f in funcs]
    cells: list[tuple[Fraction, list[Fraction]]] = []
    pos = Fraction(0)

    def advance(k):
        f = funcs[k]
        while rem[k] == 0:
            idx[k] += 1
            rem[k] = f.pieces[idx[k]][1] if idx[k] < len(f.pieces) else INF

    for k in range(len(funcs)):
        advance(k)
    while pos < end:
        step = min(min(rem), end - pos)
        vals = [
            f.pieces[idx[k]][0] if idx[k] < len(f.pieces) else f.tail_value
            for k, f in enumerate(funcs)
        ]
        cells.append((step, vals))
        pos += step
        for k in range(len(funcs)):
            if not is_inf(rem[k]):
                rem[k] -= step
                advance(k)
    return cells, [f.tail_value for f in funcs]


def _same_space(*funcs: StepFunction) -> None:
    masses = {f.space.total_mass for f in funcs}
    if len(masses) > 1:
        raise SpaceMismatch(f"total masses differ: {sorted(map(str, masses))}")


_OPS: dict[str, Callable[[Fraction, Fraction], Fraction]] = {
    "add": lambda a, b: a + b,
    "subtract": lambda a, b: a - b,
    "multiply": lambda a, b: a * b,
    "min": min,
    "max": max,
    "abs-diff": lambda a, b: abs(a - b),
}


def pointwise(f: StepFunction, g: StepFunction, op: str) -> StepFunction:
    """Apply ``op`` on the common refinement.

    The tail keeps only ``|op(tail_f, tail_g)|`` since tails are stored as |f|.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}; expected one of {sorted(_OPS)}") from None
    _same_space(f, g)
    cells, (tf, tg) = refine([f, g])
    pieces = tuple((fn(a, b), m) for m, (a, b) in cells)
    tail = abs(fn(tf, tg)) if not f.space.is_finite else Fraction(0)
    return StepFunction(f.space, pieces, tail)


def conditional_expectation(f: StepFunction, blocks: PartitionMap) -> StepFunction:
    if len(blocks.block_assignment) != len(f.pieces):
        raise ValueError(
            f"partition assigns {len(blocks.block_assignment)} pieces, function has {len(f.pieces)}"
        )
    if blocks.tail_block is not None and not f.space.is_finite:
        raise InfiniteBlock(f"block {blocks.tail_block!r} contains the infinite tail")
    mass: dict[Hashable, Fraction] = {}
    weight: dict[Hashable, Fraction] = {}
    for (v, m), b in zip(f.pieces, blocks.block_assignment):
        mass[b] = mass.get(b, Fraction(0)) + m
        weight[b] = weight.get(b, Fraction(0)) + v * m
    avg = {b: (weight[b] / mass[b] if mass[b] else Fraction(0)) for b in mass}
    pieces = tuple((avg[b], m) for (_, m), b in zip(f.pieces, blocks.block_assignment))
    return StepFunction(f.space, pieces, f.tail_value)


def _dyadic_cdf(x: Extended) -> Fraction:
    """Integral over [0, x) of the weight equal to 2**-k on [k-1, k)."""
    if is_inf(x):
        return Fraction(1)
    j = math.floor(x)
    return 1 - Fraction(1, 2 ** j) + (x - j) * Fraction(1, 2 ** (j + 1))


def delta0_metric(f: StepFunction, g: StepFunction, w: Optional[StepFunction] = None) -> Fraction:
    """Integral of ``|f-g|/(1+|f-g|)`` against the weight ``w``.

    Without ``w`` the weight is 1 on a finite space and, on an infinite space,
    ``2**-k`` on the unit interval ``[k-1, k)``, which integrates to 1.
    """
    _same_space(f, g)

    def h(a, b):
        d = abs(a - b)
        return d / (1 + d)

    if w is None:
        cells, (tf, tg) = refine([f, g])
        if f.space.is_finite:
            return sum((h(a, b) * m for m, (a, b) in cells), Fraction(0))
        total = Fraction(0)
        pos = Fraction(0)
        for m, (a, b) in cells:
            total += h(a, b) * (_dyadic_cdf(pos + m) - _dyadic_cdf(pos))
            pos += m
        return total + h(tf, tg) * (1 - _dyadic_cdf(pos))

    _same_space(f, w)
    if not w.space.is_finite and w.tail_value > 0:
        raise WeightNotIntegrable("weight has a positive value on infinite mass")
    if any(v <= 0 for v, m in w.pieces if m > 0):
        raise ValueError("weight must be strictly positive on every piece")
    cells, _ = refine([f, g, w])
    return sum((h(a, b) * c * m for m, (a, b, c) in cells), Fraction(0))
