from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GRID, contains, oracle_density, oracle_pow
from fracmeas.clusters import enumerate_gaps
from fracmeas.ifs import ConsecutiveUnion, IntervalUnion, Params, all_left_units, level_set
from fracmeas.measure import cdf, density_of, measure_interval, measure_union

P23 = Params(2, 3)


def brute_cdf_bounds(p: Params, x: Fraction, k: int):
    """Bounds on mu([0, x]) from counting level-k basic intervals."""
    lefts = all_left_units(p, k)
    scaled = x * p.l ** k
    below = int(np.count_nonzero(lefts + 1 <= scaled))
    touching = int(np.count_nonzero(lefts < scaled))
    return Fraction(below, p.n ** k), Fraction(touching, p.n ** k)


def test_measure_union_examples():
    assert measure_union(ConsecutiveUnion(P23, 3, 5, 5)) == Fraction(1, 8)
    assert measure_union(IntervalUnion(Params(3, 5), 2, (0, 1, 2, 3, 4))) == Fraction(5, 9)


def test_cdf_examples():
    assert cdf(P23, Fraction(1, 3)) == Fraction(1, 2)
    assert cdf(P23, Fraction(1, 4)) == Fraction(1, 2)
    assert cdf(P23, 0) == 0
    assert cdf(P23, Fraction(1, 2)) == 1
    assert measure_interval(P23, Fraction(1, 9), Fraction(4, 9)) == Fraction(1, 2)
    assert cdf(P23, Fraction(4, 9)) == Fraction(3, 4)
    assert cdf(P23, Fraction(1, 9)) == Fraction(1, 4)


@pytest.mark.parametrize("nl", GRID)
def test_cdf_endpoints_and_tail(nl):
    p = Params(*nl)
    assert cdf(p, p.r) == 1
    assert cdf(p, 1) == 1
    assert measure_interval(p, p.r - Fraction(1, p.l), p.r) == Fraction(1, p.n)
    assert measure_interval(p, p.r, 1) == 0


@pytest.mark.parametrize("x", [-1, Fraction(3, 2)])
def test_cdf_domain(x):
    with pytest.raises(ValueError):
        cdf(P23, x)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(GRID), st.fractions(min_value=0, max_value=1, max_denominator=10 ** 5))
def test_cdf_against_counting(nl, x):
    p = Params(*nl)
    k = 8 if p.n <= 3 else 5 if p.n <= 4 else 3
    lo, hi = brute_cdf_bounds(p, x, k)
    assert lo <= cdf(p, x) <= hi


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(GRID), st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6))
def test_cdf_self_similarity(nl, x):
    p = Params(*nl)
    Fx = cdf(p, x)
    for i in p.alphabet:
        assert cdf(p, (x + i) / p.l) == (i + Fx) / p.n


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(GRID), st.fractions(min_value=0, max_value=1, max_denominator=10 ** 4),
       st.fractions(min_value=0, max_value=1, max_denominator=10 ** 4))
def test_cdf_monotone(nl, x, y):
    p = Params(*nl)
    x, y = min(x, y), max(x, y)
    assert cdf(p, x) <= cdf(p, y)


@pytest.mark.parametrize("nl", GRID)
def test_cdf_constant_on_gaps(nl):
    p = Params(*nl)
    for k in range(1, 4):
        for g in enumerate_gaps(p, k):
            assert cdf(p, g.left) == cdf(p, g.right)


@pytest.mark.parametrize("nl", GRID)
def test_cdf_at_basic_interval_endpoints(nl):
    p = Params(*nl)
    k = 3
    lefts = all_left_units(p, k).tolist()
    for idx, a in enumerate(lefts):
        assert cdf(p, Fraction(a, p.l ** k)) == Fraction(idx, p.n ** k)


def test_density_of_level_set():
    q = density_of(P23, level_set(P23, 2))
    assert q.density.pair == (4, 5)
    assert q.measure == 1 and q.length == Fraction(5, 9)
    value = oracle_density(4, 5, 2, 3)
    assert contains(*q.bracket, value)
    assert abs(float(value) - 1.44897) < 1e-5


def test_density_of_candidate_interval():
    q = density_of(P23, (Fraction(1, 6), Fraction(5, 6)))
    assert q.measure == Fraction(1, 2) and q.length == Fraction(2, 3)
    assert q.density.pair == (1, 2)
    assert contains(*q.bracket, oracle_pow(Fraction(1, 2), 2, 3))
    assert abs(float(q.bracket[0]) - 0.64576) < 1e-5


def test_density_of_unaligned_interval():
    q = density_of(P23, (Fraction(1, 5), Fraction(1, 2)))
    assert q.density is None
    m = cdf(P23, Fraction(1, 2)) - cdf(P23, Fraction(1, 5))
    assert contains(*q.bracket, m * Fraction(oracle_pow(Fraction(10, 3), 2, 3)))


def test_density_of_empty_mass_and_errors():
    q = density_of(P23, (Fraction(5, 9) + Fraction(1, 100), Fraction(9, 10)))
    assert q.measure == 0 and q.bracket == (0, 0)
    with pytest.raises(ValueError):
        density_of(P23, (Fraction(1, 2), Fraction(1, 2)))
