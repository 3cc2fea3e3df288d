"""Exact densities and certified comparisons.

Every density that arises from a union of basic intervals has the form
``p / L**s`` with ``s = log n / log l`` and positive integers ``p`` (a count
of basic intervals) and ``L`` (a length in units of ``l**-k``).  Because
``(l**k)**s == n**k`` the pair can be rescaled by ``(n, l)`` without changing
the value, which gives a canonical form.

Comparisons are decided algebraically when possible and otherwise by
interval arithmetic at escalating precision.  Ties are never inferred from
numerics.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath.ctx_iv import MPIntervalContext

from .ifs import Params

START_BITS = 128
DEFAULT_PRECISION_CAP = 4096


class UndecidedAtMaxPrecision(ArithmeticError):
    """A numeric comparison was still ambiguous at the precision cap."""

    def __init__(self, bits: int):
        super().__init__(f"comparison undecided at {bits} bits")
        self.bits = bits


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"

    def flip(self) -> Ordering:
        return {Ordering.LESS: Ordering.GREATER,
                Ordering.GREATER: Ordering.LESS}.get(self, self)


@dataclass(frozen=True)
class ComparisonOutcome:
    ordering: Ordering
    precision_bits_used: int
    certified: bool = True

    def __post_init__(self):
        if self.ordering is Ordering.EQUAL and not self.certified:
            raise ValueError("equality must be certified")


@dataclass(frozen=True)
class Density:
    """The value ``p / L**s`` for the given parameters."""

    p: int
    L: int
    params: Params

    def __post_init__(self):
        if self.p < 1 or self.L < 1:
            raise ValueError(f"density pair must be positive, got ({self.p}, {self.L})")

    @property
    def pair(self) -> tuple[int, int]:
        return self.p, self.L

    def canonical(self) -> Density:
        return canonicalize(self)

    def bracket(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        lo, hi = pow_s_bracket(Fraction(1, self.L), self.params, bits)
        return self.p * lo, self.p * hi


def canonicalize(d: Density) -> Density:
    n, l = d.params.n, d.params.l
    p, L = d.p, d.L
    while p % n == 0 and L % l == 0:
        p //= n
        L //= l
    if (p, L) == (d.p, d.L):
        return d
    return Density(p, L, d.params)


# ---------------------------------------------------------------------------
# interval contexts, one per thread and precision

_local = threading.local()


def _ctx(bits: int) -> MPIntervalContext:
    cache = getattr(_local, "ctx", None)
    if cache is None:
        cache = _local.ctx = {}
    c = cache.get(bits)
    if c is None:
        c = MPIntervalContext()
        c.prec = bits
        cache[bits] = c
    return c


def _mpf_to_fraction(v) -> Fraction:
    sign, man, exp, _ = v
    man = int(man)
    if sign:
        man = -man
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def _endpoints(iv) -> tuple[Fraction, Fraction]:
    a, b = iv._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def _iv_log(c, q: Fraction):
    q = Fraction(q)
    out = c.log(c.mpf(q.numerator))
    if q.denominator != 1:
        out = out - c.log(c.mpf(q.denominator))
    return out


def _iv_s(c, params: Params):
    return c.log(c.mpf(params.n)) / c.log(c.mpf(params.l))


# ---------------------------------------------------------------------------
# algebraic structure of s

def _integer_root(x: int, a: int) -> int | None:
    m = round(x ** (1.0 / a))
    for cand in (m - 1, m, m + 1):
        if cand >= 2 and cand ** a == x:
            return cand
    return None


@lru_cache(maxsize=None)
def multiplicative_base(n: int, l: int) -> tuple[int, int, int] | None:
    """Largest ``m`` with ``n = m**a`` and ``l = m**b``, as ``(m, a, b)``.

    Returns None when n and l are multiplicatively independent, i.e. when
    ``s`` is irrational.
    """
    for a in range(1, n.bit_length() + 1):
        m = _integer_root(n, a)
        if m is None:
            continue
        b, t = 0, l
        while t % m == 0:
            t //= m
            b += 1
        if t == 1:
            return m, a, b
    return None


@lru_cache(maxsize=None)
def _prime_exponents(base: int) -> tuple[tuple[int, int], ...]:
    out, q, x = [], 2, base
    while q * q <= x:
        e = 0
        while x % q == 0:
            x //= q
            e += 1
        if e:
            out.append((q, e))
        q += 1
    if x > 1:
        out.append((x, 1))
    return tuple(out)


def log_exponent(q: Fraction, base: int) -> Fraction | None:
    """Rational ``t`` with ``q == base**t``, or None if there is none."""
    q = Fraction(q)
    if q <= 0:
        return None
    num, den = q.numerator, q.denominator
    t = None
    for prime, e in _prime_exponents(base):
        v = 0
        while num % prime == 0:
            num //= prime
            v += 1
        while den % prime == 0:
            den //= prime
            v -= 1
        ratio = Fraction(v, e)
        if t is None:
            t = ratio
        elif ratio != t:
            return None
    if num != 1 or den != 1:
        return None
    return t


def compare_log_ratio(P: Fraction, Q: Fraction, params: Params,
                      cap: int = DEFAULT_PRECISION_CAP) -> ComparisonOutcome:
    """Sign of ``ln P - s ln Q`` for positive rationals P and Q.

    GREATER means ``P > Q**s``.
    """
    P, Q = Fraction(P), Fraction(Q)
    if P <= 0 or Q <= 0:
        raise ValueError("P and Q must be positive")
    base = multiplicative_base(params.n, params.l)
    if base is not None:
        # s = a/b is rational: compare P**b with Q**a exactly
        _, a, b = base
        lhs, rhs = P ** b, Q ** a
        ordering = (Ordering.GREATER if lhs > rhs else
                    Ordering.LESS if lhs < rhs else Ordering.EQUAL)
        return ComparisonOutcome(ordering, 0, True)
    tp, tq = log_exponent(P, params.n), log_exponent(Q, params.l)
    if tp is not None and tq is not None and tp == tq:
        return ComparisonOutcome(Ordering.EQUAL, 0, True)
    if cap < START_BITS:
        raise UndecidedAtMaxPrecision(cap)
    bits = START_BITS
    while True:
        c = _ctx(bits)
        diff = _iv_log(c, P) - _iv_s(c, params) * _iv_log(c, Q)
        lo, hi = _endpoints(diff)
        if lo > 0:
            return ComparisonOutcome(Ordering.GREATER, bits, True)
        if hi < 0:
            return ComparisonOutcome(Ordering.LESS, bits, True)
        if bits >= cap:
            raise UndecidedAtMaxPrecision(bits)
        bits = min(2 * bits, cap)


def density_compare(a: Density, b: Density,
                    cap: int = DEFAULT_PRECISION_CAP) -> ComparisonOutcome:
    """Order two densities sharing the same parameters."""
    if a.params != b.params:
        raise ValueError("densities belong to different parameters")
    ca, cb = canonicalize(a), canonicalize(b)
    if ca.pair == cb.pair:
        return ComparisonOutcome(Ordering.EQUAL, 0, True)
    return compare_log_ratio(Fraction(ca.p, cb.p), Fraction(ca.L, cb.L), a.params, cap)


def compare_mass_length(mass_a: Fraction, len_a: Fraction, mass_b: Fraction,
                        len_b: Fraction, params: Params,
                        cap: int = DEFAULT_PRECISION_CAP) -> ComparisonOutcome:
    """Compare ``mass_a / len_a**s`` with ``mass_b / len_b**s``."""
    return compare_log_ratio(Fraction(mass_a) / Fraction(mass_b),
                             Fraction(len_a) / Fraction(len_b), params, cap)


def as_density(mass: Fraction, length: Fraction, params: Params,
               max_level: int = 64) -> Density | None:
    """Express ``mass / length**s`` as a Density if some level aligns both."""
    mass, length = Fraction(mass), Fraction(length)
    if mass <= 0 or length <= 0:
        return None
    for k in range(max_level + 1):
        pk, Lk = mass * params.n ** k, length * params.l ** k
        if pk.denominator == 1 and Lk.denominator == 1:
            return canonicalize(Density(pk.numerator, Lk.numerator, params))
    return None


# ---------------------------------------------------------------------------
# brackets of real quantities

def s_bracket(params: Params, bits: int) -> tuple[Fraction, Fraction]:
    prec = bits + 32
    while True:
        lo, hi = _endpoints(_iv_s(_ctx(prec), params))
        if hi - lo <= Fraction(lo, 2 ** bits):
            return lo, hi
        prec *= 2


def pow_s_bracket(x, params: Params, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= x**s <= hi`` with ``hi - lo <= 2**-bits * x**s``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    t = log_exponent(x, params.l)
    if t is not None and t.denominator == 1:
        v = Fraction(params.n) ** int(t)
        return v, v
    prec = bits + 32
    while True:
        c = _ctx(prec)
        lo, hi = _endpoints(c.exp(_iv_s(c, params) * _iv_log(c, x)))
        if hi - lo <= lo / 2 ** bits:
            return lo, hi
        prec *= 2


def decimal_digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + 8


def format_fixed(q: Fraction, digits: int, up: bool = False) -> str:
    """Fixed-point decimal string of q, rounded down (or up) at ``digits`` places."""
    q = Fraction(q)
    scaled = q * 10 ** digits
    v = math.ceil(scaled) if up else math.floor(scaled)
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, frac = divmod(v, 10 ** digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_bracket(lo: Fraction, hi: Fraction, digits: int) -> tuple[str, str]:
    return format_fixed(lo, digits), format_fixed(hi, digits, up=True)
