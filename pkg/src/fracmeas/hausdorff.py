"""Maximal density over unions of basic intervals.

The maximum over all level-k unions is attained by a consecutive union, and
among consecutive unions with the same number p of basic intervals the
shortest hull wins exactly.  So the search reduces to one candidate length
per count p, and only those n**k candidates need a certified comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clusters import ClusterId, boundary_type, cluster_of, cluster_units
from .exact import (DEFAULT_PRECISION_CAP, Density, Ordering, canonicalize,
                    density_compare, pow_s_bracket)
from .ifs import ConsecutiveUnion, Params, all_left_units, level_set_diameter

#: default bound on n**k for the consecutive search
SEARCH_MAX_BASIC = 2 ** 13
#: default bound on n**k for the all-subsets oracle
ORACLE_MAX_BASIC = 16


class FalsificationError(AssertionError):
    """A computed quantity contradicts a proven inequality."""


@dataclass(frozen=True)
class MaxDensityResult:
    level: int
    argmax: list[ConsecutiveUnion]
    max_density: Density
    equals_Ok: bool
    candidates: int

    @property
    def unique(self) -> bool:
        return len(self.argmax) == 1


def level_density(params: Params, k: int) -> Density:
    """d(O_k) as a canonical Density; mu(O_k) = 1."""
    units = level_set_diameter(params, k) * params.l ** k
    return canonicalize(Density(params.n ** k, int(units), params))


def _certified_max(items, cap):
    """Maximise (density, payload) pairs, keeping every tie."""
    best, payloads = None, []
    for dens, payload in items:
        if best is None:
            best, payloads = dens, [payload]
            continue
        order = density_compare(dens, best, cap).ordering
        if order is Ordering.GREATER:
            best, payloads = dens, [payload]
        elif order is Ordering.EQUAL:
            payloads.append(payload)
    return best, payloads


def max_density_consecutive(params: Params, k: int, cap: int = DEFAULT_PRECISION_CAP,
                            max_basic: int = SEARCH_MAX_BASIC) -> MaxDensityResult:
    if k < 1:
        raise ValueError("level must be >= 1")
    params.check_level(k, max_basic)
    lefts = all_left_units(params, k)
    N = len(lefts)
    candidates = []
    for p in range(1, N + 1):
        spans = lefts[p - 1:] + 1 - lefts[:N - p + 1]
        shortest = int(spans.min())
        starts = np.flatnonzero(spans == shortest).tolist()
        windows = [ConsecutiveUnion(params, k, a, a + p - 1) for a in starts]
        candidates.append((canonicalize(Density(p, shortest, params)), windows))
    best, groups = _certified_max(candidates, cap)
    argmax = [w for g in groups for w in g]
    argmax.sort(key=lambda u: (u.left_index, u.right_index))
    equals_Ok = any(u.is_full() for u in argmax)
    return MaxDensityResult(k, argmax, best, equals_Ok, N * (N + 1) // 2)


def _oracle(params: Params, k: int, cap: int, max_basic: int):
    params.check_level(k, max_basic)
    lefts = all_left_units(params, k).tolist()
    N = len(lefts)
    by_pair: dict[tuple[int, int], list[int]] = {}
    for mask in range(1, 1 << N):
        lo = (mask & -mask).bit_length() - 1
        hi = mask.bit_length() - 1
        d = canonicalize(Density(bin(mask).count("1"), lefts[hi] + 1 - lefts[lo], params))
        by_pair.setdefault(d.pair, []).append(mask)
    items = [(Density(p, L, params), masks) for (p, L), masks in by_pair.items()]
    best, groups = _certified_max(items, cap)
    maximizers = sorted(tuple(i for i in range(N) if m >> i & 1)
                        for g in groups for m in g)
    return best, maximizers


def exhaustive_union_oracle(params: Params, k: int, cap: int = DEFAULT_PRECISION_CAP,
                            max_basic: int = ORACLE_MAX_BASIC) -> Density:
    """Maximum density over every nonempty union of level-k basic intervals."""
    return _oracle(params, k, cap, max_basic)[0]


def exhaustive_union_maximizers(params: Params, k: int, cap: int = DEFAULT_PRECISION_CAP,
                                max_basic: int = ORACLE_MAX_BASIC) -> list[tuple[int, ...]]:
    """Index sets of every union attaining the maximum."""
    return _oracle(params, k, cap, max_basic)[1]


# ---------------------------------------------------------------------------
# absorption chains

@dataclass(frozen=True)
class AbsorptionStep:
    level: int
    before: ConsecutiveUnion
    absorbed_cluster: ClusterId
    gap_type: int
    lambda_inv: int
    p: int
    N: int
    density_before: Density
    density_after: Density
    ordering: Ordering
    after: ConsecutiveUnion


@dataclass(frozen=True)
class AbsorptionChain:
    """Steps run after blowing the union down ``depth`` times."""

    start: ConsecutiveUnion
    depth: int
    steps: list[AbsorptionStep] = field(default_factory=list)

    @property
    def level(self) -> int:
        return self.start.level - self.depth


def _union_density(U: ConsecutiveUnion) -> Density:
    return Density(U.count, U.length_units, U.params)


def absorption_chain(params: Params, U: ConsecutiveUnion,
                     cap: int = DEFAULT_PRECISION_CAP) -> AbsorptionChain:
    """Grow U cluster by cluster until it fills O_k, checking every step.

    A union inside a single type-(k-1, k) cluster is first blown down until
    it straddles the top-level gap; its chain then ends at the lower-level
    O_j, and d(O_j) < d(O_k) is checked for the final lift.
    """
    if U.params != params:
        raise ValueError("union belongs to different parameters")
    start, depth = U, 0
    while U.level > 0:
        block = params.n ** (U.level - 1)
        lead = U.left_index // block
        if U.right_index // block != lead:
            break
        U = ConsecutiveUnion(params, U.level - 1, U.left_index - lead * block,
                             U.right_index - lead * block)
        depth += 1
    k = U.level
    n, l = params.n, params.l
    N_total = n ** k
    steps = []
    while not U.is_full():
        a, b = U.left_index, U.right_index
        left_t = boundary_type(params, a - 1, k) if a > 0 else None
        right_t = boundary_type(params, b, k) if b < N_total - 1 else None
        i = min(t for t in (left_t, right_t) if t is not None)
        size = n ** i
        if a % size or (b + 1) % size:
            raise FalsificationError(f"{U} is not a union of type-({i}, {k}) clusters")
        p = U.count // size
        if p < 2:
            raise FalsificationError(f"{U} holds fewer than two type-({i}, {k}) clusters")
        # inner gaps between the p clusters, each of type >= i
        N = 0
        for t in range(1, p):
            gt = boundary_type(params, a + t * size - 1, k)
            N += (l ** (gt - i) - 1) // (l - 1)
        if left_t == i:
            after = ConsecutiveUnion(params, k, a - size, b)
            absorbed = cluster_of(params, a - size, i, k)
        else:
            after = ConsecutiveUnion(params, k, a, b + size)
            absorbed = cluster_of(params, b + 1, i, k)
        whole, part, other = after.length_units, U.length_units, cluster_units(params, i)
        lam = Fraction(whole - part, whole - other)
        lambda_inv = p + (l - n) * N
        if lam != Fraction(1, lambda_inv):
            raise FalsificationError(
                f"lambda = {lam} but p + (l-n)N = {lambda_inv} for {U}")
        d_before, d_after = _union_density(U), _union_density(after)
        order = density_compare(d_before, d_after, cap).ordering
        if order is Ordering.GREATER:
            raise FalsificationError(f"density drops when {U} absorbs {absorbed}")
        steps.append(AbsorptionStep(k, U, absorbed, i, lambda_inv, p, N,
                                    canonicalize(d_before), canonicalize(d_after), order, after))
        U = after
    if depth:
        lift = density_compare(level_density(params, k),
                               level_density(params, start.level), cap).ordering
        if lift is not Ordering.LESS:
            raise FalsificationError(
                f"d(O_{k}) is not below d(O_{start.level})")
    return AbsorptionChain(start, depth, steps)


def absorb_clusters(params: Params, U: ConsecutiveUnion,
                    cap: int = DEFAULT_PRECISION_CAP) -> list[AbsorptionStep]:
    return absorption_chain(params, U, cap).steps


# ---------------------------------------------------------------------------
# per-level report

@dataclass(frozen=True)
class HausdorffRow:
    k: int
    diameter: Fraction
    density: Density
    density_bracket: tuple[Fraction, Fraction]
    limit_bracket: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class HausdorffReport:
    rows: list[HausdorffRow]
    measure_bracket: tuple[Fraction, Fraction]
    strictly_increasing: bool


def hausdorff_report(params: Params, k_max: int, bits: int = 64,
                     cap: int = DEFAULT_PRECISION_CAP) -> HausdorffReport:
    """d(O_k) for k = 1..k_max against the limit r**-s; H^s = r**s."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    r = params.r
    limit = pow_s_bracket(1 / r, params, bits)
    rows = []
    for k in range(1, k_max + 1):
        d = level_density(params, k)
        rows.append(HausdorffRow(k, level_set_diameter(params, k), d,
                                 d.bracket(bits), limit))
    increasing = all(
        density_compare(a.density, b.density, cap).ordering is Ordering.LESS
        for a, b in zip(rows, rows[1:]))
    return HausdorffReport(rows, pow_s_bracket(r, params, bits), increasing)
