"""Shared fixtures and the independent decimal oracle."""
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from fracmeas import Params

GRID = [(2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5), (9, 10)]
ORACLE_DIGITS = 80


def _dec(q) -> Decimal:
    q = Fraction(q)
    return Decimal(q.numerator) / Decimal(q.denominator)


def oracle_s(n: int, l: int) -> Decimal:
    """s = ln n / ln l through Python's decimal module."""
    with localcontext() as ctx:
        ctx.prec = ORACLE_DIGITS + 10
        return Decimal(n).ln() / Decimal(l).ln()


def oracle_pow(x, n: int, l: int) -> Decimal:
    """x**s with s = ln n / ln l, independent of mpmath."""
    with localcontext() as ctx:
        ctx.prec = ORACLE_DIGITS + 10
        return (oracle_s(n, l) * _dec(x).ln()).exp()


def oracle_density(p, L, n: int, l: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = ORACLE_DIGITS + 10
        return _dec(p) / oracle_pow(L, n, l)


def contains(lo, hi, value: Decimal) -> bool:
    """lo <= value <= hi, up to the oracle's own rounding error."""
    v = Fraction(value)
    slack = abs(v) / 10 ** (ORACLE_DIGITS - 5)
    return Fraction(lo) - slack <= v <= Fraction(hi) + slack


@pytest.fixture(params=GRID, ids=lambda p: f"n{p[0]}l{p[1]}")
def grid_params(request) -> Params:
    return Params(*request.param)
