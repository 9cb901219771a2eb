"""Seeded random instances and the invariant suites behind ``symspace verify``.

Each suite draws instances from ``random.Random(seed)``, checks one family of
invariants and reports how many instances were checked, together with the first
counterexample found. A suite never stops at the first failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Optional

from symspace.duality import (
    associate_norm,
    dual_norm_oracle,
    hl_pairing,
    property_C_gap,
    second_associate_norm,
    third_associate_norm,
)
from symspace.measure import MeasureSpace, StepFunction
from symspace.norms import (
    NormSpec,
    aoki_rolewicz_exponent,
    compare,
    embedding_check,
    norm,
    norm_of_profile,
    p_subadditivity_check,
)
from symspace.rearrange import (
    cutoff_sequences,
    distribution,
    rearrangement,
    rearrangement_from_distribution,
    transport_map,
    verify_transport,
)
from symspace.stone import (
    WeightedSpace,
    factor_space,
    generate_algebra,
    stone_isomorphism_holds,
    ultrafilters,
    zeta_partition,
)

__all__ = ["SuiteResult", "SUITES", "run_suite", "random_function", "random_pair", "F0"]

F0 = StepFunction.from_pieces([(3, 1), (1, 2), (2, Fraction(1, 2))])

EXACT_SPECS = [NormSpec.lp(1), NormSpec("LInf"), NormSpec("L1CapLInf"), NormSpec("L1PlusLInf"), NormSpec("LInfPlusTail")]
POWER_SPECS = [NormSpec.lp(Fraction(1, 2)), NormSpec.lp(Fraction(3, 2)), NormSpec.lp(2), NormSpec.lp(3)]
BANACH_SPECS = EXACT_SPECS + POWER_SPECS[1:]
DUAL_SPECS = [NormSpec.lp(1), NormSpec.lp(Fraction(3, 2)), NormSpec.lp(2), NormSpec.lp(3), NormSpec("LInf")]


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checked: int = 0
    failures: int = 0
    counterexample: Optional[dict] = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0

    def fail(self, **info) -> None:
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = {k: _jsonable(v) for k, v in info.items()}

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checked": self.checked,
            "passes": self.checked - self.failures,
            "failures": self.failures,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def _jsonable(v):
    if hasattr(v, "to_dict"):
        return v.to_dict()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- generators --------------------------------------------------------------------------


def _rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 100))


def _mass(rng: random.Random) -> Fraction:
    return _rational(rng, 1, 100)


def random_function(rng: random.Random, kind: Optional[str] = None, nonneg: bool = False) -> StepFunction:
    """At most 12 pieces; numerators and denominators of values and masses are at most 100.

    ``kind`` is "finite", "infinite" (tail 0) or "tail" (positive tail); random if None.
    """
    kind = kind or rng.choice(["finite", "infinite", "tail"])
    k = rng.randint(1, 12)
    pieces = [(_rational(rng, 0 if nonneg else -100, 100), _mass(rng)) for _ in range(k)]
    if kind == "finite":
        return StepFunction.from_pieces(pieces)
    tail = _rational(rng, 1, 100) if kind == "tail" else Fraction(0)
    return StepFunction(MeasureSpace.infinite(), tuple(pieces), tail)


def random_pair(rng: random.Random) -> tuple[StepFunction, StepFunction]:
    """Two tail-free functions on one space."""
    f = random_function(rng, rng.choice(["finite", "infinite"]))
    k = rng.randint(1, 12)
    masses = [_mass(rng) for _ in range(k)]
    if f.space.is_finite:
        s = sum(masses)
        masses = [m * f.space.total_mass / s for m in masses]
    pieces = tuple((_rational(rng, -100, 100), m) for m in masses)
    return f, StepFunction(f.space, pieces)


# -- suites ------------------------------------------------------------------------------


def suite_rearrangement(res: SuiteResult, rng: random.Random, n: int) -> None:
    for _ in range(n):
        f = random_function(rng)
        xi = rearrangement(f)
        res.checked += 1
        if rearrangement_from_distribution(distribution(f)) != xi:
            res.fail(f=f, reason="sort-based and inverse-distribution profiles differ")
        elif rearrangement(xi.to_function()) != xi:
            res.fail(f=f, reason="rearrangement is not idempotent")


def suite_norm_transfer(res: SuiteResult, rng: random.Random, n: int) -> None:
    rel = 2.0 ** -40
    for _ in range(n):
        f = random_function(rng)
        xi = rearrangement(f)
        res.checked += 1
        for spec in EXACT_SPECS:
            a, b = norm(f, spec), norm_of_profile(xi, spec)
            if a != b:
                res.fail(f=f, spec=str(spec), direct=a, profile=b)
        for spec in POWER_SPECS:
            a, b = norm(f, spec), norm_of_profile(xi, spec)
            if compare(a, b, rel) != 0:
                res.fail(f=f, spec=str(spec), direct=a, profile=b)


def suite_aoki_rolewicz(res: SuiteResult, rng: random.Random, n: int) -> None:
    constants = {2: Fraction(1, 2), 1: Fraction(1)}
    for c, want in constants.items():
        got = aoki_rolewicz_exponent(c)
        res.details[f"exponent({c})"] = str(got)
        if not isinstance(got, Fraction) or got != want:
            res.fail(C=c, got=str(got), expected=str(want))
    ps = [Fraction(1, 3), Fraction(1, 2), Fraction(1)]
    for _ in range(n):
        f, g = random_pair(rng)
        res.checked += 1
        for p in ps:
            if not p_subadditivity_check(f, g, p).holds:
                res.fail(f=f, g=g, p=str(p))


def suite_embedding(res: SuiteResult, rng: random.Random, n: int) -> None:
    check = embedding_check(F0, NormSpec.lp(2))
    res.details["f0_L2"] = [str(check.lhs.exact), f"sqrt({check.mid.pth_power})", str(check.rhs.exact)]
    if (check.lhs.exact, check.mid.pth_power, check.rhs.exact) != (6, 13, 3):
        res.fail(reason="worked instance differs", lhs=check.lhs, mid=check.mid, rhs=check.rhs)
    for _ in range(n):
        f = random_function(rng)
        spec = rng.choice(BANACH_SPECS)
        res.checked += 1
        if not embedding_check(f, spec).holds:
            res.fail(f=f, spec=str(spec))


def suite_duality(res: SuiteResult, rng: random.Random, n: int, n_triple: Optional[int] = None) -> None:
    """associate vs oracle and contraction on n instances; E^1 = E^111 on n_triple."""
    n_triple = n // 5 if n_triple is None else n_triple
    rel_pair, rel_triple = 2.0 ** -20, 2.0 ** -15
    slack = 2.0 ** -30  # floating LP round-off in the second associate
    for _ in range(n):
        g = random_function(rng)
        spec = rng.choice(DUAL_SPECS)
        res.checked += 1
        a, o = associate_norm(g, spec).value, dual_norm_oracle(g, spec).value
        if compare(a, o, rel_pair) != 0:
            res.fail(g=g, spec=str(spec), analytic=a, oracle=o)
        s, e = second_associate_norm(g, spec), norm(g, spec)
        if not e.is_infinite and (s.is_infinite or s.approx > e.approx * (1 + slack)):
            res.fail(g=g, spec=str(spec), second=s, norm=e, reason="second associate exceeds norm")
    for _ in range(n_triple):
        g = random_function(rng)
        spec = rng.choice(BANACH_SPECS)
        one, three = dual_norm_oracle(g, spec).value, third_associate_norm(g, spec)
        res.checked += 1
        if compare(one, three, rel_triple) != 0:
            res.fail(g=g, spec=str(spec), first=one, third=three, reason="E^1 differs from E^111")


def suite_counterexample(res: SuiteResult, rng: random.Random, n: int) -> None:
    space = MeasureSpace.infinite()
    spec = NormSpec("LInfPlusTail")
    one = StepFunction(space, (), Fraction(1))
    value, sup = norm(one, spec), norm(one, NormSpec("LInf"))
    res.checked += 1
    res.details["norm"] = str(value.exact)
    if value.exact != 2 or value.exact != 2 * sup.exact:
        res.fail(norm=value, sup=sup)
    chain = [StepFunction(space, ((Fraction(1), Fraction(k)),)) for k in range(1, max(n, 1) + 1)]
    gap = property_C_gap(chain, one, spec)
    res.checked += 1
    res.details["gap"] = str(gap.gap.exact)
    if gap.gap.exact != 1:
        res.fail(gap=gap.gap, reason="property C gap is not 1")


def suite_minimality(res: SuiteResult, rng: random.Random, n: int) -> None:
    for spec in [NormSpec.lp(Fraction(1, 2)), NormSpec.lp(1), NormSpec.lp(2)]:
        res.checked += 1
        rows = cutoff_sequences(F0, spec, 4)
        _, top, support = rows[-1]
        if top.exact != 0 or support.exact != 0:
            res.fail(spec=str(spec), top=top, support=support)
    g = StepFunction(MeasureSpace.infinite(), F0.pieces, Fraction(1))
    res.checked += 1
    rows = cutoff_sequences(g, NormSpec("LInf"), max(n, 100))
    low = min(s.exact for _, _, s in rows)
    res.details["LInf_support_residual_min"] = str(low)
    if low < 1:
        res.fail(reason="support residual dropped below 1", minimum=low)


def suite_transport(res: SuiteResult, rng: random.Random, n: int) -> None:
    for _ in range(n):
        f = random_function(rng, "finite", nonneg=True)
        res.checked += 1
        if not verify_transport(f, transport_map(f)):
            res.fail(f=f)


def suite_stone(res: SuiteResult, rng: random.Random, n: int) -> None:
    for _ in range(n):
        size = rng.randint(1, 12)
        gens = [[i for i in range(size) if rng.random() < 0.5] for _ in range(rng.randint(0, 5))]
        alg = generate_algebra(size, gens)
        res.checked += 1
        zeta = zeta_partition(alg)
        if len(ultrafilters(alg)) != len(zeta.blocks):
            res.fail(n=size, generators=gens, reason="ultrafilter count differs from atom count")
            continue
        if not stone_isomorphism_holds(alg):
            res.fail(n=size, generators=gens, reason="Stone map is not a Boolean isomorphism")
        space = WeightedSpace([_mass(rng) for _ in range(size)])
        block_values = [_rational(rng, -100, 100) for _ in zeta.blocks]
        factor, proj = factor_space(space, alg)
        before = space.integrate([block_values[proj[i]] for i in range(size)])
        after = factor.integrate(block_values)
        if before != after:
            res.fail(n=size, generators=gens, before=before, after=after)


def suite_hardy_littlewood(res: SuiteResult, rng: random.Random, n: int) -> None:
    for _ in range(n):
        m = _mass(rng)
        fv = [_rational(rng, -100, 100) for _ in range(6)]
        gv = [_rational(rng, -100, 100) for _ in range(6)]
        f = StepFunction.from_pieces([(v, m) for v in fv])
        bound = hl_pairing(rearrangement(f), rearrangement(StepFunction.from_pieces([(v, m) for v in gv])))
        res.checked += 1
        for perm in set(permutations(gv)):
            total = sum((a * b for a, b in zip(fv, perm)), Fraction(0)) * m
            if total > bound:
                res.fail(f=fv, g=list(perm), mass=m, integral=total, bound=bound)
                break


# name -> (runner, default size, criterion number)
SUITES: dict[str, tuple[Callable, int, int]] = {
    "rearrangement": (suite_rearrangement, 10000, 1),
    "norm-transfer": (suite_norm_transfer, 10000, 2),
    "aoki-rolewicz": (suite_aoki_rolewicz, 10000, 3),
    "embedding": (suite_embedding, 10000, 4),
    "duality": (suite_duality, 1000, 5),
    "counterexample": (suite_counterexample, 100, 6),
    "minimality": (suite_minimality, 100, 7),
    "transport": (suite_transport, 10000, 8),
    "stone": (suite_stone, 500, 9),
    "hardy-littlewood": (suite_hardy_littlewood, 200, 10),
}


def run_suite(name: str, n: Optional[int] = None, seed: int = 0) -> SuiteResult:
    try:
        runner, default, _ = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}") from None
    res = SuiteResult(name, seed)
    start = time.perf_counter()
    runner(res, random.Random(seed), default if n is None else n)
    res.elapsed = time.perf_counter() - start
    return res
