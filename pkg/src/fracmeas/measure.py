"""The natural self-similar probability measure on C(n, l).

Every level-k basic interval carries mass ``n**-k``.  The distribution
function F(x) = mu([0, x]) is evaluated exactly for rational x by reading
off base-l digits: digits below n contribute ``d * n**-j``; the first digit
>= n means x has passed the part of the current cylinder that meets the set.
An eventually periodic expansion that never hits such a digit is summed as a
geometric series.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Density, as_density, canonicalize, pow_s_bracket
from .ifs import ConsecutiveUnion, IntervalUnion, Params


def measure_union(U) -> Fraction:
    """mu of an IntervalUnion or ConsecutiveUnion."""
    return Fraction(U.count, U.params.n ** U.level)


def cdf(params: Params, x) -> Fraction:
    """F(x) = mu([0, x]) as an exact rational."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} outside [0, 1]")
    if x >= params.r:
        return Fraction(1)
    n, l = params.n, params.l
    num, den = x.numerator, x.denominator
    # greedy digits give the terminating expansion at l-adic points
    seen: dict[int, int] = {}
    digits: list[int] = []
    while num not in seen:
        seen[num] = len(digits)
        num *= l
        d, num = divmod(num, den)
        if d >= n:
            # x lies right of C inside the current cylinder
            acc = Fraction(0)
            for j, dj in enumerate(digits, start=1):
                acc += Fraction(dj, n ** j)
            return acc + Fraction(1, n ** len(digits))
        digits.append(d)
    # digits[start:] repeats forever, all below n
    start = seen[num]
    period = len(digits) - start
    head = sum(Fraction(d, n ** j) for j, d in enumerate(digits[:start], start=1))
    cycle = sum(Fraction(d, n ** j) for j, d in enumerate(digits[start:], start=1))
    # tail value T solves T = cycle + n**-period * T
    tail = cycle / (1 - Fraction(1, n ** period))
    return head + tail / n ** start


def measure_interval(params: Params, a, b) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    if not 0 <= a <= b <= 1:
        raise ValueError(f"need 0 <= a <= b <= 1, got [{a}, {b}]")
    return cdf(params, b) - cdf(params, a)


@dataclass(frozen=True)
class DensityQuery:
    """Mass, length and density of a union of basic intervals or a closed interval.

    ``density`` is exact when the set is aligned with some level; otherwise
    it is None and ``bracket`` holds certified bounds.
    """

    set: object
    measure: Fraction
    length: Fraction
    density: Density | None
    bracket: tuple[Fraction, Fraction]


def density_of(params: Params, q, bits: int = 64) -> DensityQuery:
    """Density of an IntervalUnion/ConsecutiveUnion or of a pair ``(a, b)``."""
    if isinstance(q, (IntervalUnion, ConsecutiveUnion)):
        if q.params != params:
            raise ValueError("union belongs to different parameters")
        d = canonicalize(Density(q.count, q.length_units, params))
        return DensityQuery(q, measure_union(q), q.diameter, d, d.bracket(bits))
    a, b = (Fraction(v) for v in q)
    if b <= a:
        raise ValueError("interval must have positive length")
    mass = measure_interval(params, a, b)
    length = b - a
    if mass == 0:
        return DensityQuery((a, b), mass, length, None, (Fraction(0), Fraction(0)))
    d = as_density(mass, length, params)
    if d is not None:
        return DensityQuery((a, b), mass, length, d, d.bracket(bits))
    lo, hi = pow_s_bracket(1 / length, params, bits)
    return DensityQuery((a, b), mass, length, None, (mass * lo, mass * hi))
