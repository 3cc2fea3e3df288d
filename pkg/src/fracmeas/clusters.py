"""Clusters and gaps of the level-k approximation O_k.

A cluster of type (i, k) is the block of n**i consecutive level-k basic
intervals sharing a digit prefix of length k - i.  The positive-length gaps
of O_k come in k sizes; a gap of type (i, k) separates sibling type-(i, k)
clusters inside one type-(i+1, k) cluster, and the type-(k, k) gap is
(|O_k|, 1].
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .ifs import (DEFAULT_MAX_BASIC, ConsecutiveUnion, Params, Word,
                  all_left_units)


@dataclass(frozen=True)
class ClusterId:
    i: int
    k: int
    prefix: Word

    def __post_init__(self):
        if not 0 <= self.i <= self.k:
            raise ValueError(f"cluster type ({self.i}, {self.k}) out of range")
        if self.prefix.level != self.k - self.i:
            raise ValueError("prefix length must be k - i")


@dataclass(frozen=True)
class GapRecord:
    left: Fraction
    right: Fraction
    type_i: int
    level: int

    @property
    def length(self) -> Fraction:
        return self.right - self.left


def geom_sum(params: Params, i: int) -> int:
    """a_i = l + l**2 + ... + l**(i-1); a_1 = 0."""
    if i < 1:
        raise ValueError("i must be >= 1")
    return sum(params.l ** e for e in range(1, i))


def gap_units(params: Params, i: int) -> int:
    """(l - n)(1 + l + ... + l**(i-1)); zero for the degenerate type 0."""
    return (params.l - params.n) * sum(params.l ** e for e in range(i))


def gap_length(params: Params, i: int, k: int) -> Fraction:
    if not 1 <= i <= k:
        raise ValueError(f"gap type ({i}, {k}) out of range")
    return Fraction(gap_units(params, i), params.l ** k)


def cluster_units(params: Params, i: int) -> int:
    """Diameter of a type-(i, k) cluster in units of l**-k."""
    if i < 0:
        raise ValueError("i must be >= 0")
    if i == 0:
        return 1
    return params.n + (params.n - 1) * geom_sum(params, i)


def cluster_diameter(params: Params, i: int, k: int) -> Fraction:
    if not 0 <= i <= k:
        raise ValueError(f"cluster type ({i}, {k}) out of range")
    return Fraction(cluster_units(params, i), params.l ** k)


def cluster(params: Params, i: int, k: int, prefix: Word) -> ConsecutiveUnion:
    ClusterId(i, k, prefix)
    prefix.check(params)
    v = prefix.index(params)
    size = params.n ** i
    return ConsecutiveUnion(params, k, v * size, (v + 1) * size - 1)


def cluster_of(params: Params, index: int, i: int, k: int) -> ClusterId:
    """The type-(i, k) cluster containing basic interval ``index``."""
    return ClusterId(i, k, Word.from_index(params, index // params.n ** i, k - i))


def verify_identity_h1(params: Params, i: int) -> bool:
    """n + (n-1) a_i + (l-n)(1 + a_i) == l**i."""
    n, l = params.n, params.l
    a = geom_sum(params, i)
    return n + (n - 1) * a + (l - n) * (1 + a) == l ** i


def boundary_type(params: Params, index: int, k: int) -> int:
    """Type of the gap right of basic interval ``index`` (0 means touching).

    It is the number of trailing (n-1) digits of the index; the last index
    borders the type-(k, k) gap.
    """
    t = 0
    while t < k and index % params.n == params.n - 1:
        index //= params.n
        t += 1
    return t


class GapClassificationError(AssertionError):
    pass


def enumerate_gaps(params: Params, k: int,
                   max_basic: int = DEFAULT_MAX_BASIC) -> list[GapRecord]:
    """All positive-length gaps of O_k, left to right, typed by exact length."""
    if k < 1:
        raise ValueError("gaps exist from level 1 on")
    params.check_level(k, max_basic)
    lefts = all_left_units(params, k)
    scale = params.l ** k
    by_units = {gap_units(params, i): i for i in range(1, k + 1)}
    gaps = []
    rights = lefts + 1
    # final entry: from the last interval to the point 1
    nexts = list(lefts[1:].tolist()) + [scale]
    for right, nxt in zip(rights.tolist(), nexts):
        width = nxt - right
        if width == 0:
            continue
        if width < 0:
            raise GapClassificationError(f"overlapping basic intervals at {right}/{scale}")
        i = by_units.get(width)
        if i is None:
            raise GapClassificationError(
                f"gap of length {width}/{scale} matches no type at level {k}")
        gaps.append(GapRecord(Fraction(right, scale), Fraction(nxt, scale), i, k))
    return gaps


def gap_type_counts(gaps: list[GapRecord]) -> dict[int, int]:
    return dict(sorted(Counter(g.type_i for g in gaps).items()))


def expected_gap_counts(params: Params, k: int) -> dict[int, int]:
    out = {i: params.n ** (k - i - 1) * (params.n - 1) for i in range(1, k)}
    out[k] = 1
    return out
