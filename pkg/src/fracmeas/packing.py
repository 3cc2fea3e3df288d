"""Centered densities: the boundary inequalities and the packing scan.

The scan evaluates mu on millions of intervals, so it works on integer
numerators over one common denominator D.  F(x) * n**J is bracketed by two
integers after reading J base-l digits, which keeps the screen exact; only
the float ranking of densities is approximate.  Every interval that the
float screen cannot place clearly above the target 2**-s is re-evaluated
with exact rationals and a certified comparison.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import (DEFAULT_PRECISION_CAP, Density, Ordering, as_density,
                    compare_mass_length, pow_s_bracket, s_bracket)
from .hausdorff import FalsificationError
from .ifs import Params, all_left_units
from .measure import measure_interval

#: relative gap below which the float screen defers to exact evaluation
SCREEN_MARGIN = 1e-9
DEFAULT_MAX_CENTERS = 8192
_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# boundary densities d([0, y]) and d([x, r])

@dataclass(frozen=True)
class BoundaryCheck:
    left: Fraction
    right: Fraction
    mass: Fraction
    ordering: Ordering  # density compared with 1
    bits: int


@dataclass(frozen=True)
class BoundaryScanReport:
    critical_left: list[BoundaryCheck]
    critical_right: list[BoundaryCheck]
    random_left: list[BoundaryCheck]
    random_right: list[BoundaryCheck]

    @property
    def checks(self) -> list[BoundaryCheck]:
        return self.critical_left + self.critical_right + self.random_left + self.random_right

    @property
    def equalities(self) -> list[BoundaryCheck]:
        return [c for c in self.checks if c.ordering is Ordering.EQUAL]

    @property
    def passed(self) -> bool:
        return all(c.ordering is not Ordering.LESS for c in self.checks)


def _boundary_check(params: Params, a: Fraction, b: Fraction, cap: int) -> BoundaryCheck:
    mass = measure_interval(params, a, b)
    out = compare_mass_length(mass, b - a, 1, 1, params, cap)
    check = BoundaryCheck(a, b, mass, out.ordering, out.precision_bits_used)
    if out.ordering is Ordering.LESS:
        raise FalsificationError(f"d([{a}, {b}]) < 1")
    return check


def boundary_density_scan(params: Params, samples_per_branch: int, seed: int = 0,
                          cap: int = DEFAULT_PRECISION_CAP,
                          denominator_bound: int = 10 ** 6) -> BoundaryScanReport:
    """Check d([0, y]) >= 1 and d([x, r]) >= 1 at the extremal and random points."""
    if samples_per_branch < 1:
        raise ValueError("samples_per_branch must be >= 1")
    n, l, r = params.n, params.l, params.r
    zero = Fraction(0)
    crit_left = [_boundary_check(params, zero, Fraction(i, l), cap) for i in range(1, n)]
    crit_left.append(_boundary_check(params, zero, r, cap))
    crit_right = [_boundary_check(params, (i + r) / l, r, cap) for i in range(n - 1)]
    crit_right.append(_boundary_check(params, zero, r, cap))
    rng = random.Random(seed)
    rand_left, rand_right = [], []
    for _ in range(samples_per_branch):
        den = rng.randint(2, denominator_bound)
        y = r * Fraction(rng.randint(1, den), den)
        rand_left.append(_boundary_check(params, zero, y, cap))
        den = rng.randint(2, denominator_bound)
        x = r * Fraction(rng.randint(0, den - 1), den)
        rand_right.append(_boundary_check(params, x, r, cap))
    return BoundaryScanReport(crit_left, crit_right, rand_left, rand_right)


# ---------------------------------------------------------------------------
# centered intervals

@dataclass(frozen=True)
class CenteredInterval:
    center: Fraction
    radius: Fraction

    @property
    def left(self) -> Fraction:
        return self.center - self.radius

    @property
    def right(self) -> Fraction:
        return self.center + self.radius


def normalize(params: Params, iv: CenteredInterval) -> tuple[CenteredInterval, int]:
    """Blow the interval up while it lies inside one level-one basic interval.

    Returns the normalized interval and the number of blow-ups applied; the
    density is unchanged by each of them.
    """
    depth = 0
    while True:
        a, b = iv.left, iv.right
        i = math.floor(a * params.l)
        if not (0 <= i < params.n and b <= Fraction(i + 1, params.l)):
            return iv, depth
        iv = CenteredInterval(iv.center * params.l - i, iv.radius * params.l)
        depth += 1


def candidate_interval(params: Params) -> CenteredInterval:
    """[r - 1/l, r + 1/l]: half on the set, half in the final gap."""
    return CenteredInterval(params.r, Fraction(1, params.l))


@dataclass(frozen=True)
class ExactEvaluation:
    interval: CenteredInterval
    mass: Fraction
    density: Density | None
    bracket: tuple[Fraction, Fraction]
    vs_target: Ordering


def evaluate_centered(params: Params, iv: CenteredInterval, bits: int = 64,
                      cap: int = DEFAULT_PRECISION_CAP) -> ExactEvaluation:
    mass = measure_interval(params, iv.left, iv.right)
    length = 2 * iv.radius
    order = compare_mass_length(mass, length, 1, 2, params, cap).ordering
    dens = as_density(mass, length, params)
    if dens is not None:
        bracket = dens.bracket(bits)
    else:
        lo, hi = pow_s_bracket(1 / length, params, bits)
        bracket = (mass * lo, mass * hi)
    return ExactEvaluation(iv, mass, dens, bracket, order)


@dataclass
class PackingScanResult:
    min_density_bracket: tuple[Fraction, Fraction]
    argmin: CenteredInterval
    argmin_normalized: CenteredInterval
    target: tuple[Fraction, Fraction]
    candidate_density: Density | None
    scanned: int
    flagged: int
    screened_above: int
    exact_checked: int
    ties: list[CenteredInterval] = field(default_factory=list)
    centers: int = 0

    @property
    def candidate_attains_target(self) -> bool:
        return self.candidate_density is not None and self.candidate_density.pair == (1, 2)


def _digits_cap(n: int) -> int:
    J = 0
    while n ** (J + 1) < 2 ** 62:
        J += 1
    return J


def cdf_bracket_scaled(params: Params, X: np.ndarray, D: int, J: int):
    """Integers lo <= F(X/D) * n**J <= hi with hi - lo <= 1, elementwise."""
    n, l = params.n, params.l
    num = X.astype(np.int64).copy()
    A = np.zeros_like(num)
    lo = np.zeros_like(num)
    hi = np.zeros_like(num)
    done = np.zeros(num.shape, dtype=bool)
    for j in range(1, J + 1):
        num *= l
        d = num // D
        num -= d * D
        stop = ~done & (d >= n)
        if stop.any():
            v = (A[stop] + 1) * n ** (J - j + 1)
            lo[stop] = v
            hi[stop] = v
            done |= stop
        go = ~done
        A[go] = A[go] * n + d[go]
        if done.all():
            break
    rest = ~done
    lo[rest] = A[rest]
    hi[rest] = A[rest] + 1
    return lo, hi


def _centers(params: Params, level: int, max_centers: int, rng: random.Random,
             Dc: int) -> np.ndarray:
    """Numerators over Dc of scan centers, shallow ones first."""
    n, l = params.n, params.l
    by_depth = []
    for j in range(level + 1):
        # left endpoints new at depth j, then the images phi_w(r) with |w| = j
        lefts = all_left_units(params, j)
        fresh = lefts[lefts % l != 0] if j else lefts
        images = (lefts * (l - 1) + (n - 1)) * l ** (level + 1 - j)
        by_depth.append(np.unique(np.concatenate(
            [fresh * ((l - 1) * l ** (level + 1 - j)), images])))
    chosen, total = [], 0
    for j, pts in enumerate(by_depth):
        if chosen:
            pts = np.setdiff1d(pts, np.concatenate(chosen))
        if total + len(pts) <= max_centers:
            chosen.append(pts)
            total += len(pts)
            continue
        # seeded sample of everything deeper, so the count stays bounded
        pool = np.unique(np.concatenate(by_depth[j:]))
        if chosen:
            pool = np.setdiff1d(pool, np.concatenate(chosen))
        take = max_centers - total
        chosen.append(pool[sorted(rng.sample(range(len(pool)), take))])
        break
    return np.unique(np.concatenate(chosen))


def _gap_endpoints(params: Params, depth: int, Dc: int, level: int) -> list[int]:
    """Endpoints of the complementary intervals of C cut by words of length <= depth."""
    n, l = params.n, params.l
    out = {0, (n - 1) * l ** (level + 1)}
    for j in range(depth + 1):
        scale = l ** (level + 1 - j - 1)
        for w in all_left_units(params, j).tolist():
            for i in range(n - 1):
                # (phi_{wi}(r), phi_{w(i+1)}(0))
                out.add(((w * l + i) * (l - 1) + (n - 1)) * scale)
                out.add((w * l + i + 1) * (l - 1) * scale)
    return sorted(out)


def packing_scan(params: Params, center_level: int = 6, radius_grid: int = 512,
                 seed: int = 0, cap: int = DEFAULT_PRECISION_CAP,
                 max_centers: int = DEFAULT_MAX_CENTERS, gap_depth: int = 1,
                 bits: int = 64) -> PackingScanResult:
    """Search intervals centered in C for a density below 2**-s."""
    if center_level < 0 or radius_grid < 1:
        raise ValueError("center_level must be >= 0 and radius_grid >= 1")
    gap_depth = min(gap_depth, center_level)
    n, l = params.n, params.l
    rng = random.Random(seed)
    Dc = (l - 1) * l ** (center_level + 1)
    D = Dc * radius_grid
    if D * l >= 2 ** 62:
        raise ValueError("center_level and radius_grid too large for the integer screen")
    J = _digits_cap(n)
    nJ = n ** J
    centers = _centers(params, center_level, max_centers, rng, Dc)
    # radii shared by all centers, as numerators over D
    shared = [j * Dc for j in range(1, radius_grid + 1)]
    shared += [radius_grid * Dc // l ** j for j in range(1, center_level + 2)]
    shared = np.unique(np.array(shared, dtype=np.int64))
    gap_pts = np.array(_gap_endpoints(params, gap_depth, Dc, center_level), dtype=np.int64)
    s_lo, s_hi = s_bracket(params, 53)
    s = float((s_lo + s_hi) / 2)
    target = 2.0 ** -s
    threshold = target * (1 + SCREEN_MARGIN)

    flagged = above = 0
    review: list[tuple[int, int]] = []
    per_center = len(shared) + len(gap_pts)
    batch = max(1, _CHUNK // per_center)
    for start in range(0, len(centers), batch):
        C = centers[start:start + batch] * radius_grid
        structural = np.abs(gap_pts[None, :] * radius_grid - C[:, None])
        radii = np.concatenate([np.broadcast_to(shared, (len(C), len(shared))),
                                structural], axis=1)
        cc = np.broadcast_to(C[:, None], radii.shape).ravel()
        rr = radii.ravel()
        keep = rr > 0
        pair = np.unique(np.stack([cc[keep], rr[keep]], axis=1), axis=0)
        cc, rr = pair[:, 0], pair[:, 1]
        a, b = cc - rr, cc + rr
        # intervals leaving [0, 1] are flagged and kept out of the statistic
        inside = (a >= 0) & (b <= D)
        flagged += int((~inside).sum())
        cc, rr, a, b = cc[inside], rr[inside], a[inside], b[inside]
        if not len(cc):
            continue
        alo, ahi = cdf_bracket_scaled(params, a, D, J)
        blo, bhi = cdf_bracket_scaled(params, b, D, J)
        mass_lo = (blo - ahi).astype(np.float64) / nJ
        dens_lo = mass_lo / np.power(2.0 * rr / D, s)
        ok = dens_lo >= threshold
        above += int(ok.sum())
        review.extend(zip(cc[~ok].tolist(), rr[~ok].tolist()))
    # batches split by center, so no pair is counted twice
    scanned = above + len(review)

    cand = candidate_interval(params)
    cand_eval = evaluate_centered(params, cand, bits, cap)
    seen: set[tuple[int, int]] = set()
    ties: list[CenteredInterval] = []
    best_key = best_vs = None
    for key in [(int(cand.center * D), int(cand.radius * D))] + review:
        if key in seen:
            continue
        seen.add(key)
        iv = CenteredInterval(Fraction(key[0], D), Fraction(key[1], D))
        mass = measure_interval(params, iv.left, iv.right)
        length = 2 * iv.radius
        vs = compare_mass_length(mass, length, 1, 2, params, cap).ordering
        if vs is Ordering.LESS:
            raise FalsificationError(
                f"centered density below 2**-s on [{iv.left}, {iv.right}]")
        if best_key is None:
            ties, best_key, best_vs = [iv], (mass, length), vs
            continue
        if vs is Ordering.EQUAL and best_vs is Ordering.EQUAL:
            order = Ordering.EQUAL
        elif vs is not best_vs:
            # exactly one of the two sits on the target, and it is the smaller
            order = Ordering.LESS if vs is Ordering.EQUAL else Ordering.GREATER
        else:
            order = compare_mass_length(mass, length, *best_key, params, cap).ordering
        if order is Ordering.LESS:
            ties, best_key, best_vs = [iv], (mass, length), vs
        elif order is Ordering.EQUAL:
            ties.append(iv)
    ties.sort(key=lambda iv: (iv.center, iv.radius))
    winner = evaluate_centered(params, ties[0], bits, cap)
    return PackingScanResult(
        min_density_bracket=winner.bracket,
        argmin=winner.interval,
        argmin_normalized=normalize(params, winner.interval)[0],
        target=pow_s_bracket(Fraction(1, 2), params, bits),
        candidate_density=cand_eval.density,
        scanned=scanned,
        flagged=flagged,
        screened_above=above,
        exact_checked=len(seen),
        ties=ties,
        centers=len(centers),
    )
