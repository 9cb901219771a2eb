"""Symmetric norms and quasi-norms, fundamental functions and the Aoki-Rolewicz exponent.

All values are computed from the multiset of ``(|value|, mass)`` pairs plus the tail, so
``norm`` and ``norm_of_profile`` agree exactly whenever the rearrangement is right.
Irrational L_p values keep their exact p-th-power terms, which lets comparisons
between them be certified with rational bounds instead of a float tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from symspace._exact import (
    certified_sign,
    close,
    fmt,
    fsum_powers,
    is_inf,
    rational_power,
    to_rational,
    tolerance,
)
from symspace.errors import InvalidConstant, NormInfinite, QuasiNormSpec
from symspace.measure import StepFunction, refine, _same_space
from symspace.rearrange import DecreasingProfile

__all__ = [
    "NormSpec",
    "NormValue",
    "norm",
    "norm_of_profile",
    "decompose_l1_linf",
    "fundamental_function",
    "embedding_check",
    "aoki_rolewicz_exponent",
    "lp_concavity_modulus",
    "p_subadditivity_check",
    "compare",
]

VARIANTS = ("Lp", "LInf", "L1CapLInf", "L1PlusLInf", "LInfPlusTail")


@dataclass(frozen=True)
class NormSpec:
    variant: str
    p: Optional[Fraction] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown norm variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant == "Lp":
            if self.p is None:
                raise ValueError("Lp needs an exponent p")
            p = to_rational(self.p)
            if is_inf(p):
                raise ValueError("use the LInf variant for p = inf")
            if p <= 0:
                raise ValueError(f"p must be positive, got {p}")
            object.__setattr__(self, "p", p)
        elif self.p is not None:
            raise ValueError(f"{self.variant} takes no exponent")

    @classmethod
    def lp(cls, p) -> "NormSpec":
        return cls("Lp", to_rational(p))

    @property
    def is_banach(self) -> bool:
        return self.variant != "Lp" or self.p >= 1

    @property
    def is_l1(self) -> bool:
        return self.variant == "Lp" and self.p == 1

    @classmethod
    def parse(cls, text: Union[str, dict]) -> "NormSpec":
        """Accept ``{"variant": "Lp", "p": "1/2"}`` (dict or JSON) or shorthand ``Lp:1/2``, ``L2``, ``LInf``."""
        if isinstance(text, dict):
            return cls(text["variant"], text.get("p"))
        s = text.strip()
        if s.startswith("{"):
            return cls.parse(json.loads(s))
        if s.startswith("Lp:"):
            return cls.lp(s[3:])
        if s in VARIANTS:
            return cls(s)
        if s.startswith("L") and s[1:]:
            rest = s[1:]
            if rest.lower() in ("inf", "infinity"):
                return cls("LInf")
            return cls.lp(rest)
        raise ValueError(f"cannot parse norm spec {text!r}")

    def to_dict(self) -> dict:
        return {"variant": self.variant, "p": fmt(self.p)} if self.p is not None else {"variant": self.variant}

    def __str__(self) -> str:
        return f"Lp:{self.p}" if self.variant == "Lp" else self.variant


@dataclass(frozen=True)
class NormValue:
    """A norm value: ``exact`` when rational, ``approx`` always.

    ``p`` and ``pth_power`` describe L_p values as ``pth_power ** (1/p)``; ``terms``
    holds the ``(mass, |value|)`` pairs behind it for certified comparisons.
    """

    exact: Optional[Fraction]
    approx: float
    is_infinite: bool = False
    p: Optional[Fraction] = None
    pth_power: Optional[Fraction] = None
    terms: Optional[tuple] = field(default=None, compare=False, repr=False)

    @classmethod
    def rational(cls, r) -> "NormValue":
        r = to_rational(r)
        if is_inf(r):
            return cls.infinite()
        return cls(r, float(r))

    @classmethod
    def infinite(cls) -> "NormValue":
        return cls(None, math.inf, True)

    @classmethod
    def from_power_terms(cls, terms: Sequence[tuple[Fraction, Fraction]], p: Fraction) -> "NormValue":
        """``(sum mass * value**p) ** (1/p)`` from ``(mass, value)`` terms."""
        terms = tuple((m, v) for m, v in terms if m != 0 and v != 0)
        power: Optional[Fraction] = Fraction(0)
        for m, v in terms:
            pv = rational_power(v, p)
            if pv is None:
                power = None
                break
            power += m * pv
        if power is not None:
            exact = rational_power(power, 1 / p)
            approx = float(exact) if exact is not None else float(power) ** (1 / float(p))
        else:
            exact = None
            approx = fsum_powers([(v, m) for m, v in terms], p) ** (1 / float(p))
        return cls(exact, approx, False, p, power, terms)

    def to_dict(self) -> dict:
        return {
            "exact": fmt(self.exact) if self.exact is not None else None,
            "approx": self.approx,
            "infinite": self.is_infinite,
        }

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return str(self.exact) if self.exact is not None else repr(self.approx)


def _radical_form(x: NormValue) -> Optional[tuple[Fraction, list]]:
    if x.terms is not None and x.p is not None:
        return x.p, list(x.terms)
    return None


def compare(a: NormValue, b: NormValue, rel: Optional[float] = None) -> int:
    """Three-way comparison, exact or certified when possible, else within ``rel``."""
    if a.is_infinite or b.is_infinite:
        return (a.is_infinite > b.is_infinite) - (a.is_infinite < b.is_infinite)
    if a.exact is not None and b.exact is not None:
        return (a.exact > b.exact) - (a.exact < b.exact)
    ra, rb = _radical_form(a), _radical_form(b)
    if ra is not None:
        p = ra[0]
        if rb is not None and rb[0] == p:
            other = rb[1]
        elif b.exact is not None:
            other = [(Fraction(1), b.exact)]
        else:
            other = None
        if other is not None:
            return certified_sign(ra[1] + [(-m, v) for m, v in other], p)
    if rb is not None and a.exact is not None:
        return -compare(b, a, rel)
    rel = tolerance() if rel is None else rel
    if close(a.approx, b.approx, rel):
        return 0
    return (a.approx > b.approx) - (a.approx < b.approx)


def _l1_plus_linf_scan(pairs, tail, infinite) -> tuple[Fraction, Fraction]:
    """Minimize ``int (|f|-c)_+ + min(c, sup|f|)`` over the cut levels c; returns (value, c)."""
    sup = max([v for v, m in pairs if m > 0] + ([tail] if infinite else []), default=Fraction(0))
    levels = sorted({Fraction(0)} | {v for v, _ in pairs} | ({tail} if infinite else set()))
    best = None
    for c in levels:
        if infinite and tail > c:
            continue
        value = sum(((v - c) * m for v, m in pairs if v > c), Fraction(0)) + min(c, sup)
        if best is None or value < best[0]:
            best = (value, c)
    return best


def _evaluate(pairs: list, tail: Fraction, infinite: bool, spec: NormSpec) -> NormValue:
    pairs = [(v, m) for v, m in pairs if m > 0]
    sup = max([v for v, _ in pairs] + ([tail] if infinite else []), default=Fraction(0))
    tail_mass_positive = infinite and tail > 0
    variant = spec.variant
    if variant == "Lp":
        if tail_mass_positive:
            return NormValue.infinite()
        if spec.p == 1:
            return NormValue.rational(sum((v * m for v, m in pairs), Fraction(0)))
        return NormValue.from_power_terms([(m, v) for v, m in pairs], spec.p)
    if variant == "LInf":
        return NormValue.rational(sup)
    if variant == "L1CapLInf":
        if tail_mass_positive:
            return NormValue.infinite()
        return NormValue.rational(max(sum((v * m for v, m in pairs), Fraction(0)), sup))
    if variant == "L1PlusLInf":
        return NormValue.rational(_l1_plus_linf_scan(pairs, tail, infinite)[0])
    # LInfPlusTail: ||f||_inf + xi_f(inf); xi_f(inf) is the tail value, 0 on finite spaces
    return NormValue.rational(sup + (tail if infinite else 0))


def norm(f: StepFunction, spec: NormSpec) -> NormValue:
    return _evaluate([(abs(v), m) for v, m in f.pieces], f.tail_value, not f.space.is_finite, spec)


def norm_of_profile(xi: DecreasingProfile, spec: NormSpec) -> NormValue:
    if xi.is_infinite:
        return _evaluate([(v, l) for l, v in xi.segments[:-1]], xi.segments[-1][1], True, spec)
    return _evaluate([(v, l) for l, v in xi.segments], Fraction(0), False, spec)


def decompose_l1_linf(f: StepFunction) -> tuple[StepFunction, StepFunction, NormValue]:
    """Optimal ``f = g + h`` for ``||g||_1 + ||h||_inf``; h clamps f at the best cut level."""
    infinite = not f.space.is_finite
    pairs = [(abs(v), m) for v, m in f.pieces if m > 0]
    best = _l1_plus_linf_scan(pairs, f.tail_value, infinite)
    if best is None:
        raise NormInfinite("no decomposition with finite L1 + Linf cost")
    value, c = best

    def clamp(v):
        return max(-c, min(c, v))

    h = StepFunction(f.space, tuple((clamp(v), m) for v, m in f.pieces), min(f.tail_value, c))
    g = StepFunction(f.space, tuple((v - clamp(v), m) for v, m in f.pieces), Fraction(0))
    return g, h, NormValue.rational(value)


def fundamental_function(spec: NormSpec, t) -> NormValue:
    """Norm of the indicator of a set of measure t."""
    t = to_rational(t)
    if not t > 0:
        raise ValueError("t must be positive")
    return norm_of_profile(DecreasingProfile(((t, Fraction(1)),)), spec)


def _scale(c: NormValue, x: NormValue) -> NormValue:
    """``c * x`` for a rational constant c."""
    if x.is_infinite:
        return NormValue.infinite() if c.exact != 0 else NormValue.rational(0)
    if c.exact is not None and x.exact is not None:
        return NormValue.rational(c.exact * x.exact)
    return NormValue(None, c.approx * x.approx)


class EmbeddingCheck(NamedTuple):
    lhs: NormValue
    mid: NormValue
    rhs: NormValue
    holds: bool


def embedding_check(f: StepFunction, spec: NormSpec) -> EmbeddingCheck:
    """``phi(1)||f||_{L1 cap Linf} >= ||f||_E >= phi(1)||f||_{L1 + Linf}``."""
    if not spec.is_banach:
        raise QuasiNormSpec(f"{spec} is a quasi-norm; the embedding is stated for Banach spaces")
    phi1 = fundamental_function(spec, 1)
    lhs = _scale(phi1, norm(f, NormSpec("L1CapLInf")))
    mid = norm(f, spec)
    rhs = _scale(phi1, norm(f, NormSpec("L1PlusLInf")))
    holds = compare(mid, lhs) <= 0 and compare(rhs, mid) <= 0
    return EmbeddingCheck(lhs, mid, rhs, holds)


def aoki_rolewicz_exponent(C) -> Union[Fraction, float]:
    """``ln 2 / (ln 2 + ln C)``; an exact Fraction when C is an integer power of 2."""
    C = to_rational(C)
    if is_inf(C) or C < 1:
        raise InvalidConstant(f"modulus of concavity must be a finite value >= 1, got {C}")
    if C.denominator == 1 and C.numerator & (C.numerator - 1) == 0:
        return Fraction(1, C.numerator.bit_length())
    return math.log(2) / (math.log(2) + math.log(C))


def lp_concavity_modulus(p) -> Union[Fraction, float]:
    """``2**(1/p - 1)``, the concavity modulus of L_p for 0 < p <= 1."""
    p = to_rational(p)
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    k = 1 / p - 1
    if k.denominator == 1:
        return Fraction(2 ** k.numerator)
    return 2.0 ** float(k)


class SubadditivityCheck(NamedTuple):
    lhs: NormValue
    rhs: NormValue
    holds: bool


def p_subadditivity_check(f: StepFunction, g: StepFunction, p) -> SubadditivityCheck:
    """Exact test of ``||f+g||_p^p <= ||f||_p^p + ||g||_p^p`` (p-th powers, not norms)."""
    p = to_rational(p)
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    _same_space(f, g)
    if not f.space.is_finite and (f.tail_value > 0 or g.tail_value > 0):
        raise NormInfinite("L_p quasi-norm is infinite on a positive tail")
    cells, _ = refine([f, g])
    left = [(m, abs(a + b)) for m, (a, b) in cells]
    right = [(m, abs(a)) for m, (a, _) in cells] + [(m, abs(b)) for m, (_, b) in cells]

    def power_sum(terms) -> NormValue:
        exact = Fraction(0)
        for m, v in terms:
            pv = rational_power(v, p)
            if pv is None:
                exact = None
                break
            exact += m * pv
        approx = fsum_powers([(v, m) for m, v in terms], p)
        return NormValue(exact, float(exact) if exact is not None else approx)

    sign = certified_sign(left + [(-m, v) for m, v in right], p)
    return SubadditivityCheck(power_sum(left), power_sum(right), sign <= 0)
