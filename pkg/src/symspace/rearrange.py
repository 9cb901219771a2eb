"""Distribution functions, decreasing rearrangements and transport maps.

``distribution`` returns eta(y) = mu{|f| > y} as a right-continuous step function of
the threshold y. ``rearrangement`` sorts the pieces of |f|; ``rearrangement_from_distribution``
computes the generalized inverse inf{y : eta(y) <= x} instead. The two constructions
share no code so each one can check the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from symspace._exact import INF, Extended, fmt, is_inf, to_rational
from symspace.errors import NegativeValues, NormInfinite, TailPresent
from symspace.measure import MeasureSpace, StepFunction

__all__ = [
    "DecreasingProfile",
    "ThresholdProfile",
    "TransportMap",
    "distribution",
    "rearrangement",
    "rearrangement_from_distribution",
    "distribution_of_profile",
    "equimeasurable",
    "xi_infinity",
    "transport_map",
    "verify_transport",
    "cutoff_sequences",
]

Segment = tuple[Extended, Fraction]


def _merge(segments: Iterable[Segment]) -> tuple[Segment, ...]:
    out: list[list] = []
    for length, value in segments:
        if length == 0:
            continue
        if out and out[-1][1] == value:
            out[-1][0] = out[-1][0] + length
        else:
            out.append([length, value])
    return tuple((l, v) for l, v in out)


@dataclass(frozen=True)
class DecreasingProfile:
    """Right-continuous decreasing step function on ``[0, a)`` or ``[0, inf)``.

    ``segments`` are ``(length, value)`` pairs; only the last length may be INF.
    """

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple((to_rational(l), to_rational(v)) for l, v in self.segments)
        if not segs:
            raise ValueError("a profile needs at least one segment")
        for i, (l, v) in enumerate(segs):
            if not l > 0:
                raise ValueError(f"segment length must be positive, got {l}")
            if is_inf(l) and i != len(segs) - 1:
                raise ValueError("only the final segment may be infinite")
            if is_inf(v) or v < 0:
                raise ValueError(f"segment values must be nonnegative rationals, got {v}")
            if i and v > segs[i - 1][1]:
                raise ValueError("segment values must be non-increasing")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def build(cls, segments: Iterable[Segment]) -> "DecreasingProfile":
        """Canonical profile: zero-length segments dropped and equal neighbours merged."""
        return cls(_merge((to_rational(l), to_rational(v)) for l, v in segments))

    @property
    def total_length(self) -> Extended:
        return sum((l for l, _ in self.segments), Fraction(0))

    @property
    def is_infinite(self) -> bool:
        return is_inf(self.segments[-1][0])

    def value_at(self, x) -> Fraction:
        pos = Fraction(0)
        for l, v in self.segments:
            if x < pos + l:
                return v
            pos += l
        return Fraction(0)

    def without_trailing_zero(self) -> tuple[Segment, ...]:
        segs = self.segments
        return segs[:-1] if segs[-1][1] == 0 else segs

    def to_function(self) -> StepFunction:
        """The profile as a function on the standard space of the same total length."""
        if self.is_infinite:
            return StepFunction(
                MeasureSpace.infinite(), tuple((v, l) for l, v in self.segments[:-1]), self.segments[-1][1]
            )
        return StepFunction(MeasureSpace(self.total_length), tuple((v, l) for l, v in self.segments))

    def to_dict(self) -> dict:
        return {"segments": [[fmt(l), fmt(v)] for l, v in self.segments]}

    @classmethod
    def from_dict(cls, doc: dict) -> "DecreasingProfile":
        return cls(tuple(tuple(s) for s in doc["segments"]))


@dataclass(frozen=True)
class ThresholdProfile:
    """eta as ``(threshold, value)`` breakpoints; value holds on ``[threshold, next)``."""

    breakpoints: tuple[tuple[Fraction, Extended], ...]
    total_mass: Extended

    def __post_init__(self):
        bps = tuple((to_rational(t), to_rational(e)) for t, e in self.breakpoints)
        total = to_rational(self.total_mass)
        if not bps or bps[0][0] != 0:
            raise ValueError("breakpoints must start at threshold 0")
        for i in range(1, len(bps)):
            if bps[i][0] <= bps[i - 1][0]:
                raise ValueError("thresholds must be strictly increasing")
            if bps[i][1] > bps[i - 1][1]:
                raise ValueError("distribution values must be non-increasing")
        if bps[0][1] > total:
            raise ValueError("distribution exceeds the total mass")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "total_mass", total)

    def value_at(self, y) -> Extended:
        current = self.breakpoints[0][1]
        for t, e in self.breakpoints:
            if t > y:
                break
            current = e
        return current

    def to_dict(self) -> dict:
        return {
            "breakpoints": [[fmt(t), fmt(e)] for t, e in self.breakpoints],
            "total_mass": fmt(self.total_mass),
        }


@dataclass(frozen=True)
class TransportMap:
    """Piecewise translation; each move sends ``[src, src+len)`` onto ``[dst, dst+len)``."""

    moves: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def to_dict(self) -> dict:
        return {"moves": [[fmt(s), fmt(l), fmt(d)] for s, l, d in self.moves]}


def _canonical_breakpoints(raw: list[tuple[Fraction, Extended]]) -> tuple:
    out: list[tuple[Fraction, Extended]] = []
    for t, e in raw:
        if out and out[-1][1] == e:
            continue
        out.append((t, e))
    return tuple(out)


def distribution(f: StepFunction) -> ThresholdProfile:
    infinite = not f.space.is_finite
    items = sorted(((abs(v), m) for v, m in f.pieces if m > 0), reverse=True)
    levels = sorted({a for a, _ in items} | {Fraction(0)} | ({f.tail_value} if infinite else set()))
    # mass strictly above each level, by a descending sweep over the sorted pieces
    above: dict[Fraction, Fraction] = {}
    acc = Fraction(0)
    i = 0
    for t in reversed(levels):
        while i < len(items) and items[i][0] > t:
            acc += items[i][1]
            i += 1
        above[t] = acc
    raw = [(t, INF if infinite and f.tail_value > t else above[t]) for t in levels]
    return ThresholdProfile(_canonical_breakpoints(raw), f.space.total_mass)


def rearrangement(f: StepFunction) -> DecreasingProfile:
    if f.space.is_finite:
        items = sorted(((abs(v), m) for v, m in f.pieces if m > 0), key=lambda s: -s[0])
        return DecreasingProfile(_merge((m, a) for a, m in items))
    tail = f.tail_value
    kept = sorted(((abs(v), m) for v, m in f.pieces if m > 0 and abs(v) > tail), key=lambda s: -s[0])
    return DecreasingProfile(_merge([(m, a) for a, m in kept] + [(INF, tail)]))


def rearrangement_from_distribution(eta: ThresholdProfile) -> DecreasingProfile:
    bps = eta.breakpoints
    if bps[-1][1] != 0:
        raise ValueError("distribution does not vanish at large thresholds")
    segments: list[Segment] = []
    for k in range(len(bps) - 1, 0, -1):
        t_k, e_k = bps[k]
        e_prev = bps[k - 1][1]
        if is_inf(e_prev):
            segments.append((INF, t_k))
            break
        segments.append((e_prev - e_k, t_k))
    else:
        rest = eta.total_mass - bps[0][1]
        if rest > 0:
            segments.append((rest, Fraction(0)))
    return DecreasingProfile(_merge(segments))


def distribution_of_profile(xi: DecreasingProfile) -> ThresholdProfile:
    levels = sorted({v for _, v in xi.segments} | {Fraction(0)})
    raw = [(t, sum((l for l, v in xi.segments if v > t), Fraction(0))) for t in levels]
    return ThresholdProfile(_canonical_breakpoints(raw), xi.total_length)


def equimeasurable(f: StepFunction, g: StepFunction) -> bool:
    """Same distribution function, i.e. same profile up to a trailing zero segment."""
    return distribution(f).breakpoints == distribution(g).breakpoints


def xi_infinity(xi: DecreasingProfile) -> Fraction:
    return xi.segments[-1][1] if xi.is_infinite else Fraction(0)


def transport_map(f: StepFunction) -> TransportMap:
    """Measure-preserving piecewise translation phi with ``f = xi_f o phi``.

    Pieces are sent to consecutive positions in order of decreasing value; equal values
    keep their original order, so the map is deterministic.
    """
    if f.tail_value > 0:
        raise TailPresent("transport maps are built for functions without a positive tail")
    if any(v < 0 for v, _ in f.pieces):
        raise NegativeValues("transport_map expects a nonnegative function; pass f.abs()")
    starts = []
    pos = Fraction(0)
    for _, m in f.pieces:
        starts.append(pos)
        pos += m
    order = sorted((i for i, (_, m) in enumerate(f.pieces) if m > 0), key=lambda i: -f.pieces[i][0])
    dest = {}
    pos = Fraction(0)
    for i in order:
        dest[i] = pos
        pos += f.pieces[i][1]
    moves = tuple((starts[i], f.pieces[i][1], dest[i]) for i in sorted(dest))
    return TransportMap(moves)


def _tiles(intervals: list[tuple[Fraction, Fraction]], end: Fraction) -> bool:
    pos = Fraction(0)
    for a, l in sorted(intervals):
        if a != pos:
            return False
        pos += l
    return pos == end


def verify_transport(f: StepFunction, phi: TransportMap) -> bool:
    """Exact check of measure preservation and of ``f = xi_f o phi`` on every refined cell."""
    xi = rearrangement(f)
    end = f.finite_extent
    if not _tiles([(s, l) for s, l, _ in phi.moves], end):
        return False
    if not _tiles([(d, l) for _, l, d in phi.moves], end):
        return False
    # preimage of every profile segment inside [0, end) has the segment's measure
    pos = Fraction(0)
    for length, _ in xi.segments:
        lo, hi = pos, min(pos + length, end)
        if lo >= end:
            break
        pre = sum((max(Fraction(0), min(hi, d + l) - max(lo, d)) for _, l, d in phi.moves), Fraction(0))
        if pre != hi - lo:
            return False
        pos += length
    f_cuts = []
    pos = Fraction(0)
    for _, m in f.pieces:
        f_cuts.append(pos)
        pos += m
    xi_cuts = []
    pos = Fraction(0)
    for length, _ in xi.segments:
        xi_cuts.append(pos)
        if is_inf(length):
            break
        pos += length
    for s, l, d in phi.moves:
        cuts = {Fraction(0)}
        cuts.update(c - s for c in f_cuts if s < c < s + l)
        cuts.update(c - d for c in xi_cuts if d < c < d + l)
        for off in sorted(cuts):
            if f.value_at(s + off) != xi.value_at(d + off):
                return False
    return True


def _top_residual(xi: DecreasingProfile, n: Fraction) -> DecreasingProfile:
    """Profile of ``xi - min(xi, n)``, same total length."""
    segs = [(l, v - n) for l, v in xi.segments if v > n]
    used = sum((l for l, _ in segs), Fraction(0))
    rest = xi.total_length - used
    if rest > 0:
        segs.append((rest, Fraction(0)))
    return DecreasingProfile.build(segs)


def _support_residual(xi: DecreasingProfile, n: Fraction) -> DecreasingProfile:
    """Rearrangement of ``xi * 1_[n, inf)``: xi shifted left by n, zero-padded to the same length."""
    segs = []
    pos = Fraction(0)
    for l, v in xi.segments:
        lo, hi = max(pos, n), pos + l
        if hi > lo:
            segs.append((hi - lo, v))
        pos = hi
    if not xi.is_infinite:
        pad = min(n, xi.total_length)
        segs.append((pad, Fraction(0)))
    return DecreasingProfile.build(segs)


def cutoff_sequences(f: StepFunction, spec, n_max: int):
    """``(n, ||xi - min(xi, n)||, ||xi - xi 1_[0,n]||)`` for n = 1..n_max."""
    from symspace.norms import norm, norm_of_profile

    if norm(f, spec).is_infinite:
        raise NormInfinite(f"f has infinite {spec} norm")
    xi = rearrangement(f)
    out = []
    for n in range(1, n_max + 1):
        n_ = Fraction(n)
        out.append(
            (n, norm_of_profile(_top_residual(xi, n_), spec), norm_of_profile(_support_residual(xi, n_), spec))
        )
    return out
