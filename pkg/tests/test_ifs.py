import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GRID
from fracmeas.ifs import (ConsecutiveUnion, IntervalUnion, Params, ResourceLimitError, Word,
                          all_left_units, apply_map, apply_word, basic_interval, blow_down,
                          blow_up, level_set, level_set_diameter)

P23 = Params(2, 3)


@pytest.mark.parametrize("n,l", [(3, 3), (1, 3), (4, 2), (0, 1)])
def test_params_validation(n, l):
    with pytest.raises(ValueError, match="l > n >= 2"):
        Params(n, l)


def test_params_basics():
    assert P23.r == Fraction(1, 2)
    assert Params(9, 10).r == Fraction(8, 9)
    assert list(Params(3, 5).alphabet) == [0, 1, 2]


@pytest.mark.parametrize("nl", GRID)
def test_r_is_fixed_point_of_last_map(nl):
    p = Params(*nl)
    assert apply_map(p, p.n - 1, p.r) == p.r


def test_apply_map_digit_range():
    with pytest.raises(ValueError):
        apply_map(P23, 2, 0)


def test_level_one_and_two():
    O1 = level_set(P23, 1)
    assert [basic_interval(P23, Word.from_index(P23, i, 1)).left for i in range(2)] == [0, Fraction(1, 3)]
    assert O1.diameter == Fraction(2, 3)
    O2 = level_set(P23, 2)
    got = [(b.left, b.right) for b in (basic_interval(P23, Word.from_index(P23, i, 2)) for i in range(4))]
    assert got == [(0, Fraction(1, 9)), (Fraction(1, 9), Fraction(2, 9)),
                   (Fraction(1, 3), Fraction(4, 9)), (Fraction(4, 9), Fraction(5, 9))]
    assert O2.diameter == Fraction(5, 9)


@pytest.mark.parametrize("nl", GRID)
def test_left_units_match_word_images(nl):
    p = Params(*nl)
    for k in range(0, 4):
        if p.n ** k > 1000:
            break
        lefts = all_left_units(p, k).tolist()
        words = list(itertools.product(range(p.n), repeat=k))
        assert len(lefts) == len(words)
        for idx, digits in enumerate(words):
            w = Word(digits)
            assert w.index(p) == idx
            assert Fraction(lefts[idx], p.l ** k) == apply_word(p, w, 0)
        # ordering by index is ordering by position
        assert lefts == sorted(lefts)


@pytest.mark.parametrize("nl", GRID)
def test_level_set_diameter(nl):
    p = Params(*nl)
    for k in range(1, 5):
        brute = (max(all_left_units(p, k).tolist()) + 1) / Fraction(p.l ** k)
        assert level_set_diameter(p, k) == brute == p.r + (1 - p.r) / p.l ** k


@given(st.sampled_from(GRID), st.integers(0, 6), st.data())
def test_word_index_roundtrip(nl, k, data):
    p = Params(*nl)
    idx = data.draw(st.integers(0, p.n ** k - 1))
    w = Word.from_index(p, idx, k)
    assert w.level == k and w.index(p) == idx


def test_blow_down_examples():
    U = ConsecutiveUnion(P23, 2, 2, 3)
    assert blow_down(U) == ConsecutiveUnion(P23, 1, 0, 1)
    p34 = Params(3, 4)
    V = IntervalUnion(p34, 2, (4, 5))
    assert blow_down(V) == IntervalUnion(p34, 1, (1, 2))
    with pytest.raises(ValueError):
        blow_down(ConsecutiveUnion(P23, 2, 1, 2))


@given(st.sampled_from(GRID), st.integers(0, 4), st.data())
def test_blow_up_then_down(nl, k, data):
    p = Params(*nl)
    N = p.n ** k
    a = data.draw(st.integers(0, N - 1))
    b = data.draw(st.integers(a, N - 1))
    i = data.draw(st.integers(0, p.n - 1))
    U = ConsecutiveUnion(p, k, a, b)
    up = blow_up(U, i)
    assert blow_down(up) == U
    # the image is phi_i of the original hull
    assert up.left == apply_map(p, i, U.left)
    assert up.diameter == U.diameter / p.l


def test_interval_union_hull():
    U = IntervalUnion(P23, 2, (0, 3))
    assert U.count == 2
    assert U.diameter == Fraction(5, 9)
    assert not U.is_consecutive()
    assert ConsecutiveUnion(P23, 2, 0, 3).to_union().is_consecutive()


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        P23.check_level(30, max_basic=2 ** 20)
    with pytest.raises(ResourceLimitError):
        level_set(P23, 27, max_basic=2 ** 26)
