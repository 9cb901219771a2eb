"""Associate (Köthe dual) norms, iterated associates and order-property diagnostics.

The supremum defining ``||g||_{E^1}`` may be taken over decreasing f that are constant
on the segments of xi_g: rearranging f never lowers the pairing and averaging it over
a segment of xi_g leaves the pairing unchanged without raising a symmetric norm. The
supremum is therefore a finite-dimensional problem over the monotone cone

    v_1 >= v_2 >= ... >= v_J >= 0,   maximize  sum_i len_i * gamma_i * v_i.

On that cone every polyhedral catalogue norm is a maximum of at most two linear forms,
so the optimum sits at a vertex with at most two nonzero "ray" weights and can be
enumerated exactly in rationals. L_p norms (p > 1) are separable, and the optimum is
a pool-adjacent-violators solution. Second and third associates are linear programs
over the explicit dual rows and are solved with HiGHS.

An infinite final segment of xi_g with value gamma > 0 makes the dual infinite exactly
when the fundamental function grows sublinearly, phi(x)/x -> 0. Otherwise the
remainder is cut to a finite chunk and ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from symspace._exact import INF, Extended, is_inf
from symspace.errors import NoConvergence, NotAChain, QuasiNormSpec
from symspace.measure import StepFunction, refine, _same_space
from symspace.norms import NormSpec, NormValue, compare, fundamental_function, norm
from symspace.rearrange import DecreasingProfile, rearrangement

__all__ = [
    "DualNormResult",
    "hl_pairing",
    "associate_norm",
    "dual_norm_oracle",
    "second_associate_norm",
    "third_associate_norm",
    "property_C_gap",
    "fatou_check",
    "PropertyCGap",
    "FatouReport",
]

_FAR = Fraction(2 ** 60)


@dataclass(frozen=True)
class DualNormResult:
    value: NormValue
    witness: DecreasingProfile
    method: str


def hl_pairing(xi_f: DecreasingProfile, xi_g: DecreasingProfile) -> Extended:
    """``int xi_f * xi_g`` on the common refinement; a profile is 0 past its domain."""
    a = list(xi_f.segments)
    b = list(xi_g.segments)
    i = j = 0
    ra = a[0][0]
    rb = b[0][0]
    total = Fraction(0)
    while i < len(a) or j < len(b):
        va = a[i][1] if i < len(a) else Fraction(0)
        vb = b[j][1] if j < len(b) else Fraction(0)
        la = ra if i < len(a) else INF
        lb = rb if j < len(b) else INF
        step = min(la, lb)
        if is_inf(step):
            if va * vb > 0:
                return INF
            break
        total += va * vb * step
        if i < len(a):
            ra -= step
            if ra == 0:
                i += 1
                ra = a[i][0] if i < len(a) else 0
        if j < len(b):
            rb -= step
            if rb == 0:
                j += 1
                rb = b[j][0] if j < len(b) else 0
    return total


# -- growth of the fundamental function ----------------------------------------------


def _growth(spec: NormSpec, level: int) -> tuple[bool, bool]:
    """``(phi unbounded, phi(x)/x -> 0)`` for the level-th associate of spec.

    phi of an associate space is x / phi, so taking associates swaps the two flags.
    """
    if spec.variant == "Lp":
        flags = (True, spec.p > 1)
    elif spec.variant == "L1CapLInf":
        flags = (True, False)
    else:  # LInf, L1PlusLInf, LInfPlusTail: phi bounded by a constant
        flags = (False, True)
    for _ in range(level):
        flags = (flags[1], flags[0])
    return flags


# -- the partition of xi ---------------------------------------------------------------


class _Partition(NamedTuple):
    lengths: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]
    tail: Optional[Fraction]  # value on the infinite remainder, None on a finite domain

    def profile(self, values: Sequence[Fraction]) -> DecreasingProfile:
        segs = list(zip(self.lengths, values))
        if self.tail is not None:
            segs.append((INF, Fraction(0)))
        if not segs:
            segs = [(INF, Fraction(0))]
        return DecreasingProfile.build(segs)


def _partition(xi: DecreasingProfile, refinement: int = 1) -> _Partition:
    if refinement < 1:
        raise ValueError("refinement must be a positive integer")
    lengths: list[Fraction] = []
    gamma: list[Fraction] = []
    tail = None
    finite = Fraction(0)
    for l, v in xi.segments:
        if is_inf(l):
            tail = v
            l = max(Fraction(1), finite)
        else:
            finite += l
        for _ in range(refinement):
            lengths.append(l / refinement)
            gamma.append(v)
    return _Partition(tuple(lengths), tuple(gamma), tail)


# -- polyhedral norms on the monotone cone ----------------------------------------------


def _rows(spec: NormSpec, lengths: Sequence[Fraction]) -> list[list[Fraction]]:
    """Linear forms whose maximum is the norm of a decreasing, finitely supported v."""
    J = len(lengths)
    first = [Fraction(1)] + [Fraction(0)] * (J - 1)
    if spec.is_l1:
        return [list(lengths)]
    if spec.variant in ("LInf", "LInfPlusTail"):
        return [first]
    if spec.variant == "L1CapLInf":
        return [list(lengths), first]
    if spec.variant == "L1PlusLInf":
        out, pos = [], Fraction(0)
        for l in lengths:
            out.append(max(Fraction(0), min(pos + l, Fraction(1)) - pos))
            pos += l
        return [out]
    raise ValueError(f"{spec} is not polyhedral")


def _vertices(rows: list[list[Fraction]], J: int) -> list[list[Fraction]]:
    """Vertices of ``{v in cone : row . v <= 1 for all rows}`` for at most two rows.

    In ray coordinates v = sum_j lam_j 1_[0, x_j) the region is ``{lam >= 0, A lam <= 1}``,
    whose vertices have at most len(rows) nonzero weights.
    """
    if len(rows) > 2:
        raise ValueError("vertex enumeration supports at most two forms")
    ray = [[sum(row[: j + 1], Fraction(0)) for j in range(J)] for row in rows]
    weights: list[dict[int, Fraction]] = []
    for j in range(J):
        s = max(r[j] for r in ray)
        if s <= 0:
            raise ValueError("unbounded unit ball on the cone")
        weights.append({j: 1 / s})
    if len(rows) == 2:
        a, b = ray
        for i, j in combinations(range(J), 2):
            det = a[i] * b[j] - a[j] * b[i]
            if det == 0:
                continue
            li = (b[j] - a[j]) / det
            lj = (a[i] - b[i]) / det
            if li > 0 and lj > 0:
                weights.append({i: li, j: lj})
    out = []
    for w in weights:
        v, acc = [Fraction(0)] * J, Fraction(0)
        for k in range(J - 1, -1, -1):
            acc += w.get(k, 0)
            v[k] = acc
        out.append(v)
    return out


def _best_vertex(part: _Partition, vertices: list[list[Fraction]]) -> tuple[Fraction, list[Fraction]]:
    weights = [l * g for l, g in zip(part.lengths, part.gamma)]
    best = (Fraction(0), [Fraction(0)] * len(part.lengths))
    for v in vertices:
        val = sum((w * x for w, x in zip(weights, v)), Fraction(0))
        if val > best[0]:
            best = (val, v)
    return best


# -- separable power norms --------------------------------------------------------------


def _power_dual(part: _Partition, r: Fraction) -> tuple[float, list[float]]:
    """Max of ``sum len*gamma*v`` over decreasing v >= 0 with ``sum len*v**r <= 1`` (r > 1).

    Minimizes ``sum len*(v**r/r - gamma*v)`` by pool-adjacent-violators; a pooled block
    takes the value ``mean_gamma ** (1/(r-1))``. The minimizer is then rescaled onto
    the unit sphere.
    """
    r_ = float(r)
    blocks: list[list[float]] = []  # [weight, weighted gamma sum, count]
    for l, g in zip(part.lengths, part.gamma):
        blocks.append([float(l), float(l) * float(g), 1])
        while len(blocks) > 1 and blocks[-2][1] / blocks[-2][0] < blocks[-1][1] / blocks[-1][0]:
            w, s, c = blocks.pop()
            blocks[-1][0] += w
            blocks[-1][1] += s
            blocks[-1][2] += c
    u: list[float] = []
    for w, s, c in blocks:
        mean = s / w
        u.extend([max(mean, 0.0) ** (1 / (r_ - 1))] * c)
    lengths = [float(l) for l in part.lengths]
    size = math.fsum(l * x ** r_ for l, x in zip(lengths, u)) ** (1 / r_)
    if size == 0:
        return 0.0, [0.0] * len(u)
    v = [x / size for x in u]
    value = math.fsum(l * float(g) * x for l, g, x in zip(lengths, part.gamma, v))
    return value, v


def _dual_exponent(p: Fraction) -> Fraction:
    return p / (p - 1)


def _as_profile(part: _Partition, values: Sequence[float]) -> DecreasingProfile:
    clean, floor = [], math.inf
    for x in values:
        floor = min(floor, max(x, 0.0))
        clean.append(Fraction(floor))
    return part.profile(clean)


# -- level 1: the associate norm --------------------------------------------------------


def _check_banach(spec: NormSpec) -> None:
    if not spec.is_banach:
        raise QuasiNormSpec(
            f"{spec} is not normable; its associate space is not computed (it may be trivial)"
        )


def _infinite_witness(spec: NormSpec) -> DecreasingProfile:
    unbounded, _ = _growth(spec, 0)
    if not unbounded:
        phi = fundamental_function(spec, INF)
        return DecreasingProfile(((INF, 1 / phi.exact),))
    phi = fundamental_function(spec, _FAR)
    height = Fraction(1 / phi.approx) if phi.exact is None else 1 / phi.exact
    return DecreasingProfile(((_FAR, height), (INF, Fraction(0))))


def dual_norm_oracle(g: StepFunction, spec: NormSpec, refinement: int = 1) -> DualNormResult:
    """Maximize the rearrangement pairing over the unit ball of E on the partition of xi_g.

    ``refinement`` splits every segment into that many equal parts, so finer grids
    can be checked against the partition-aligned optimum.
    """
    _check_banach(spec)
    part = _partition(rearrangement(g), refinement)
    if part.tail and _growth(spec, 0)[1]:
        return DualNormResult(NormValue.infinite(), _infinite_witness(spec), "oracle")
    if spec.variant == "Lp" and spec.p > 1:
        value, v = _power_dual(part, spec.p)
        return DualNormResult(NormValue(None, value), _as_profile(part, v), "oracle")
    value, v = _best_vertex(part, _vertices(_rows(spec, part.lengths), len(part.lengths)))
    return DualNormResult(NormValue.rational(value), part.profile(v), "oracle")


def associate_norm(g: StepFunction, spec: NormSpec) -> DualNormResult:
    """``||g||_{E^1}``: closed form for L_p, L_1 and L_inf, the oracle for the others."""
    _check_banach(spec)
    if spec.variant == "Lp" and spec.p > 1:
        value = norm(g, NormSpec.lp(_dual_exponent(spec.p)))
    elif spec.is_l1:
        value = norm(g, NormSpec("LInf"))
    elif spec.variant == "LInf":
        value = norm(g, NormSpec.lp(1))
    else:
        return dual_norm_oracle(g, spec)
    witness = dual_norm_oracle(g, spec).witness
    return DualNormResult(value, witness, "analytic")


# -- levels 2 and 3 ---------------------------------------------------------------------


def _dual_rows(spec: NormSpec, part: _Partition) -> np.ndarray:
    """Rows ``len * v_t`` over the vertices v_t of the unit ball of E: the forms of E^1."""
    verts = _vertices(_rows(spec, part.lengths), len(part.lengths))
    lengths = [float(l) for l in part.lengths]
    return np.array([[l * float(x) for l, x in zip(lengths, v)] for v in verts], dtype=float)


def _monotone_ub(J: int, offset: int, width: int) -> np.ndarray:
    """Rows ``x_{i+1} - x_i <= 0`` on variables offset..offset+J-1."""
    rows = np.zeros((max(J - 1, 0), width))
    for i in range(J - 1):
        rows[i, offset + i] = -1.0
        rows[i, offset + i + 1] = 1.0
    return rows


def _solve(c, A_ub, b_ub, A_eq=None, b_eq=None) -> float:
    res = linprog(-np.asarray(c), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")
    return float(-res.fun)


def second_associate_norm(f: StepFunction, spec: NormSpec, refinement: int = 1) -> NormValue:
    """``||f||_{E^11}``: sup of the pairing with xi_f over the unit ball of E^1."""
    _check_banach(spec)
    part = _partition(rearrangement(f), refinement)
    if part.tail and _growth(spec, 1)[1]:
        return NormValue.infinite()
    if spec.variant == "Lp" and spec.p > 1:
        return NormValue(None, _power_dual(part, _dual_exponent(spec.p))[0])
    J = len(part.lengths)
    B = _dual_rows(spec, part)
    c = [float(l) * float(g) for l, g in zip(part.lengths, part.gamma)]
    A = np.vstack([B, _monotone_ub(J, 0, J)])
    b = np.concatenate([np.ones(len(B)), np.zeros(max(J - 1, 0))])
    return NormValue(None, _solve(c, A, b))


def third_associate_norm(g: StepFunction, spec: NormSpec, refinement: int = 1) -> NormValue:
    """``||g||_{E^111}`` with the E^11 constraint written through LP duality.

    ``||f||_{E^11} <= 1`` iff some y, z >= 0 satisfy ``B^T y - M^T z = len * f`` and
    ``sum y <= 1``, where B holds the E^1 forms and M h >= 0 encodes the cone.
    """
    _check_banach(spec)
    part = _partition(rearrangement(g), refinement)
    if part.tail and _growth(spec, 2)[1]:
        return NormValue.infinite()
    if spec.variant == "Lp" and spec.p > 1:
        return NormValue(None, _power_dual(part, spec.p)[0])
    J = len(part.lengths)
    B = _dual_rows(spec, part)
    T = len(B)
    M = np.zeros((J, J))
    for i in range(J - 1):
        M[i, i], M[i, i + 1] = 1.0, -1.0
    M[J - 1, J - 1] = 1.0
    width = J + T + J  # variables: f, y, z
    lengths = np.array([float(l) for l in part.lengths])
    A_eq = np.hstack([-np.diag(lengths), B.T, -M.T])
    b_eq = np.zeros(J)
    budget = np.zeros((1, width))
    budget[0, J : J + T] = 1.0
    A_ub = np.vstack([budget, _monotone_ub(J, 0, width)])
    b_ub = np.concatenate([[1.0], np.zeros(max(J - 1, 0))])
    c = np.zeros(width)
    c[:J] = lengths * np.array([float(x) for x in part.gamma])
    return NormValue(None, _solve(c, A_ub, b_ub, A_eq, b_eq))


# -- order properties -------------------------------------------------------------------


class PropertyCGap(NamedTuple):
    sup_chain_norm: NormValue
    limit_norm: NormValue
    gap: NormValue


def _difference(a: NormValue, b: NormValue) -> NormValue:
    if a.is_infinite and not b.is_infinite:
        return NormValue.infinite()
    if a.is_infinite:
        return NormValue(None, math.nan)
    if a.exact is not None and b.exact is not None:
        return NormValue.rational(a.exact - b.exact)
    return NormValue(None, a.approx - b.approx)


def _nonneg(f: StepFunction) -> bool:
    return all(v >= 0 for v, _ in f.pieces)


def _le_pointwise(f: StepFunction, g: StepFunction) -> bool:
    cells, (tf, tg) = refine([f, g])
    if any(a > b for _, (a, b) in cells):
        return False
    return f.space.is_finite or tf <= tg


def property_C_gap(chain: Sequence[StepFunction], limit: StepFunction, spec: NormSpec) -> PropertyCGap:
    """Compare ``sup ||f_n||`` with ``||f||`` for ``0 <= f_n`` increasing to f.

    A positive gap certifies that the norm is not order semi-continuous.
    """
    if not chain:
        raise NotAChain("empty chain")
    _same_space(*chain, limit)
    if not all(_nonneg(f) for f in chain):
        raise NotAChain("chain elements must be nonnegative")
    for a, b in zip(chain, chain[1:]):
        if not _le_pointwise(a, b):
            raise NotAChain("chain is not pointwise non-decreasing")
    if not _le_pointwise(chain[-1], limit):
        raise NotAChain("chain exceeds its limit")
    norms = [norm(f, spec) for f in chain]
    sup = norms[0]
    for x in norms[1:]:
        if compare(x, sup) > 0:
            sup = x
    lim = norm(limit, spec)
    return PropertyCGap(sup, lim, _difference(lim, sup))


class FatouReport(NamedTuple):
    liminf_norms: NormValue
    limit_norm: NormValue
    holds: Optional[bool]
    status: str  # "holds", "fails" or "not-applicable"


def _converges(values: Sequence[Fraction], target: Fraction) -> bool:
    """Distances to target over the second half of the prefix are non-increasing and shrink."""
    window = values[len(values) // 2 :] if len(values) > 1 else values
    dist = [abs(v - target) for v in window]
    if any(b > a for a, b in zip(dist, dist[1:])):
        return False
    return dist[-1] == 0 or dist[-1] < dist[0]


def fatou_check(sequence: Sequence[StepFunction], limit: StepFunction, spec: NormSpec) -> FatouReport:
    """Finite-horizon Fatou test ``||f|| <= liminf ||f_n||``.

    The prefix must converge on every finite cell of the common refinement. The liminf of
    the norms is taken as the norm of the pointwise limit on the observed cells, joined
    to the tail of the last element; the tail is used only if the tails themselves
    are not converging. If ``sup ||f_n||`` looks unbounded (norms still strictly
    increasing toward an infinite limit norm) the precondition fails and the status is
    ``"not-applicable"``.
    """
    if not sequence:
        raise NoConvergence("empty sequence")
    _same_space(*sequence, limit)
    cells, tails = refine(list(sequence) + [limit])
    for _, vals in cells:
        if not _converges(vals[:-1], vals[-1]):
            raise NoConvergence("sequence does not converge pointwise to the limit")
    tail = tails[-1] if _converges(tails[:-1], tails[-1]) else tails[-2]
    pieces = tuple((vals[-1], m) for m, vals in cells)
    observed = StepFunction(limit.space, pieces, tail if not limit.space.is_finite else Fraction(0))
    liminf = norm(observed, spec)
    lim = norm(limit, spec)
    norms = [norm(f, spec) for f in sequence]
    window = norms[len(norms) // 2 :]
    growing = len(window) > 1 and all(compare(b, a) > 0 for a, b in zip(window, window[1:]))
    if any(x.is_infinite for x in norms) or (lim.is_infinite and growing):
        return FatouReport(liminf, lim, None, "not-applicable")
    holds = compare(lim, liminf) <= 0
    return FatouReport(liminf, lim, holds, "holds" if holds else "fails")
