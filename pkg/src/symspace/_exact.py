"""Rational parsing, extended reals and certified comparison of sums of rational powers."""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence, Union

INF = math.inf
Extended = Union[Fraction, float]  # a Fraction, or math.inf

_MAX_BITS = 2048


def to_rational(x) -> Extended:
    """Coerce ``x`` to a Fraction; the strings ``"inf"``/``"+inf"`` and ``math.inf`` give INF."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"not an extended nonnegative value: {x}")
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt(x: Extended) -> str:
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return "inf"
        raise ValueError(f"non-rational value {x}")
    return str(x)


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def tolerance() -> float:
    """Relative tolerance for floating comparisons, ``2**-SYMSPACE_PRECISION`` (default 40)."""
    return 2.0 ** -int(os.environ.get("SYMSPACE_PRECISION", "40"))


def close(a: float, b: float, rel: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def rational_root(r: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a nonnegative rational, or None if it is irrational."""
    n, d = r.numerator, r.denominator
    a, b = iroot(n, k), iroot(d, k)
    if a ** k == n and b ** k == d:
        return Fraction(a, b)
    return None


def rational_power(r: Fraction, p: Fraction) -> Fraction | None:
    """``r**p`` for r >= 0 and rational p > 0 when the result is rational."""
    if r == 0:
        return Fraction(0)
    if p.denominator == 1:
        return r ** p.numerator
    return rational_root(r ** p.numerator, p.denominator)


def power_bounds(r: Fraction, p: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= r**p <= hi`` with ``hi - lo = 2**-bits``."""
    if r == 0:
        return Fraction(0), Fraction(0)
    s = _root_floor(r, p, bits)
    scale = 1 << bits
    return Fraction(s, scale), Fraction(s + 1, scale)


def power_float(r: Fraction, p: Fraction) -> float:
    exact = rational_power(r, p) if p.denominator == 1 else None
    if exact is not None:
        return float(exact)
    return float(r) ** float(p)


def certified_sign(terms: Iterable[tuple[Fraction, Fraction]], p: Fraction) -> int:
    """Sign of ``sum(c * r**p)`` for rational coefficients c and radicands r >= 0.

    Terms with rational powers are folded into an exact constant and equal radicands
    are merged, so structural cancellations give 0. The remainder is bracketed with
    exact rational bounds at doubling precision. If the interval still straddles 0 at
    the precision cap, the value is treated as 0.
    """
    constant = Fraction(0)
    grouped: dict[Fraction, Fraction] = {}
    for c, r in terms:
        if c == 0 or r == 0:
            continue
        exact = rational_power(r, p)
        if exact is not None:
            constant += c * exact
        else:
            grouped[r] = grouped.get(r, Fraction(0)) + c
    radical = [(c, r) for r, c in grouped.items() if c != 0]
    if not radical:
        return (constant > 0) - (constant < 0)
    # scale by the common denominator so the interval sums stay in integers
    den = math.lcm(constant.denominator, *(c.denominator for c, _ in radical))
    base = constant.numerator * (den // constant.denominator)
    coefs = [(c.numerator * (den // c.denominator), r) for c, r in radical]
    bits = 64
    while bits <= _MAX_BITS:
        lo = hi = base << bits
        for c, r in coefs:
            s = _root_floor(r, p, bits)
            if c > 0:
                lo += c * s
                hi += c * (s + 1)
            else:
                lo += c * (s + 1)
                hi += c * s
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    return 0


def _root_floor(r: Fraction, p: Fraction, bits: int) -> int:
    """``floor(r**p * 2**bits)``."""
    a, b = p.numerator, p.denominator
    return iroot(((r.numerator ** a) << (b * bits)) // r.denominator ** a, b)


def fsum_powers(pairs: Sequence[tuple[Fraction, Fraction]], p: Fraction) -> float:
    """Floating ``sum(mass * value**p)``."""
    return math.fsum(float(m) * power_float(v, p) for v, m in pairs)
