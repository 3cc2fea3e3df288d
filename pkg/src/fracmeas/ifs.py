"""The iterated function system generating C(n, l).

The maps are ``phi_i(x) = (x + i) / l`` for digits ``i`` in ``0..n-1``.  A
level-``k`` basic interval is indexed by its digit word read as a base-``n``
integer, so consecutive indices are neighbouring intervals from left to
right.  Endpoints are kept as integers in units of ``l**-k`` wherever a whole
level is handled at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

#: default refusal threshold for n**k
DEFAULT_MAX_BASIC = 2 ** 26


class ResourceLimitError(ValueError):
    """Raised when a level would need more basic intervals than allowed."""


@dataclass(frozen=True)
class Params:
    n: int
    l: int

    def __post_init__(self):
        if isinstance(self.n, bool) or isinstance(self.l, bool) or not (
                isinstance(self.n, int) and isinstance(self.l, int)):
            raise TypeError("n and l must be integers")
        if not (self.l > self.n >= 2):
            raise ValueError(f"require l > n >= 2, got n={self.n}, l={self.l}")

    @property
    def r(self) -> Fraction:
        """sup C(n, l), the fixed point of the last map."""
        return Fraction(self.n - 1, self.l - 1)

    @property
    def ratio(self) -> Fraction:
        return Fraction(1, self.l)

    @property
    def alphabet(self) -> range:
        return range(self.n)

    def check_level(self, k: int, max_basic: int = DEFAULT_MAX_BASIC) -> None:
        if k < 0:
            raise ValueError(f"level must be nonnegative, got {k}")
        if self.n ** k > max_basic:
            raise ResourceLimitError(
                f"n**k = {self.n}**{k} exceeds the bound {max_basic}")


@dataclass(frozen=True)
class Word:
    digits: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.digits)

    def index(self, params: Params) -> int:
        v = 0
        for d in self.digits:
            v = v * params.n + d
        return v

    @classmethod
    def from_index(cls, params: Params, index: int, k: int) -> Word:
        if not 0 <= index < params.n ** k:
            raise ValueError(f"index {index} out of range for level {k}")
        digits = []
        for _ in range(k):
            index, d = divmod(index, params.n)
            digits.append(d)
        return cls(tuple(reversed(digits)))

    def check(self, params: Params) -> None:
        for d in self.digits:
            if not 0 <= d < params.n:
                raise ValueError(f"digit {d} outside 0..{params.n - 1}")


@dataclass(frozen=True)
class BasicInterval:
    word: Word
    left: Fraction
    right: Fraction


def apply_map(params: Params, i: int, x) -> Fraction:
    if not 0 <= i < params.n:
        raise ValueError(f"digit {i} outside 0..{params.n - 1}")
    return (Fraction(x) + i) / params.l


def apply_word(params: Params, word: Word, x) -> Fraction:
    """phi_{w_1} o ... o phi_{w_k}(x); the last digit acts first."""
    x = Fraction(x)
    for d in reversed(word.digits):
        x = apply_map(params, d, x)
    return x


def left_units(params: Params, index: int, k: int) -> int:
    """Left endpoint of basic interval ``index`` at level k, in units of l**-k."""
    v, place = 0, 1
    for _ in range(k):
        index, d = divmod(index, params.n)
        v += d * place
        place *= params.l
    return v


def all_left_units(params: Params, k: int) -> np.ndarray:
    """Left endpoints (units of l**-k) of every level-k basic interval, by index."""
    if params.l ** k >= 2 ** 62:
        raise ResourceLimitError(f"l**k overflows int64 at level {k}")
    out = np.zeros(1, dtype=np.int64)
    place = 1
    for _ in range(k):
        # new leading digit is the most significant base-n and base-l place
        out = np.add.outer(np.arange(params.n, dtype=np.int64) * place, out).ravel()
        place *= params.l
    return out


def basic_interval(params: Params, word: Word) -> BasicInterval:
    word.check(params)
    k = word.level
    left = Fraction(left_units(params, word.index(params), k), params.l ** k)
    return BasicInterval(word, left, left + Fraction(1, params.l ** k))


@dataclass(frozen=True)
class IntervalUnion:
    """A union of level-k basic intervals, stored as sorted indices."""

    params: Params
    level: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if not idx:
            raise ValueError("an IntervalUnion needs at least one basic interval")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly increasing")
        if idx[0] < 0 or idx[-1] >= self.params.n ** self.level:
            raise ValueError(f"indices must lie in [0, n**{self.level})")

    @property
    def count(self) -> int:
        return len(self.indices)

    @property
    def left(self) -> Fraction:
        return Fraction(left_units(self.params, self.indices[0], self.level),
                        self.params.l ** self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(left_units(self.params, self.indices[-1], self.level) + 1,
                        self.params.l ** self.level)

    @property
    def length_units(self) -> int:
        """Diameter of the hull in units of l**-k."""
        p, k = self.params, self.level
        return left_units(p, self.indices[-1], k) + 1 - left_units(p, self.indices[0], k)

    @property
    def diameter(self) -> Fraction:
        return Fraction(self.length_units, self.params.l ** self.level)

    def is_consecutive(self) -> bool:
        return self.indices[-1] - self.indices[0] + 1 == len(self.indices)


@dataclass(frozen=True)
class ConsecutiveUnion:
    """All level-k basic intervals with index in ``[left_index, right_index]``."""

    params: Params
    level: int
    left_index: int
    right_index: int

    def __post_init__(self):
        if not 0 <= self.left_index <= self.right_index < self.params.n ** self.level:
            raise ValueError(
                f"bad index range [{self.left_index}, {self.right_index}] at level {self.level}")

    @property
    def count(self) -> int:
        return self.right_index - self.left_index + 1

    @property
    def length_units(self) -> int:
        p, k = self.params, self.level
        return left_units(p, self.right_index, k) + 1 - left_units(p, self.left_index, k)

    @property
    def left(self) -> Fraction:
        return Fraction(left_units(self.params, self.left_index, self.level),
                        self.params.l ** self.level)

    @property
    def right(self) -> Fraction:
        return self.left + self.diameter

    @property
    def diameter(self) -> Fraction:
        return Fraction(self.length_units, self.params.l ** self.level)

    def is_full(self) -> bool:
        return self.left_index == 0 and self.right_index == self.params.n ** self.level - 1

    def to_union(self) -> IntervalUnion:
        return IntervalUnion(self.params, self.level,
                             tuple(range(self.left_index, self.right_index + 1)))


def level_set(params: Params, k: int, max_basic: int = DEFAULT_MAX_BASIC) -> ConsecutiveUnion:
    """O_k, the union of all n**k level-k basic intervals."""
    params.check_level(k, max_basic)
    return ConsecutiveUnion(params, k, 0, params.n ** k - 1)


def level_set_diameter(params: Params, k: int) -> Fraction:
    """|O_k| = r + (1 - r) l**-k."""
    r = params.r
    return r + (1 - r) / params.l ** k


def blow_down(U):
    """Strip the common leading digit of a union lying in one level-one image.

    Accepts an IntervalUnion or a ConsecutiveUnion at level k >= 1 and
    returns the same kind of object at level k - 1.
    """
    p, k = U.params, U.level
    if k == 0:
        raise ValueError("cannot blow down a level-0 union")
    block = p.n ** (k - 1)
    if isinstance(U, ConsecutiveUnion):
        lead = U.left_index // block
        if U.right_index // block != lead:
            raise ValueError("union meets more than one level-one basic interval")
        return ConsecutiveUnion(p, k - 1, U.left_index - lead * block,
                                U.right_index - lead * block)
    lead = U.indices[0] // block
    if U.indices[-1] // block != lead:
        raise ValueError("union meets more than one level-one basic interval")
    return IntervalUnion(p, k - 1, tuple(i - lead * block for i in U.indices))


def blow_up(U, i: int):
    """phi_i applied to a union: prepend digit ``i``."""
    p, k = U.params, U.level
    if not 0 <= i < p.n:
        raise ValueError(f"digit {i} outside 0..{p.n - 1}")
    shift = i * p.n ** k
    if isinstance(U, ConsecutiveUnion):
        return ConsecutiveUnion(p, k + 1, U.left_index + shift, U.right_index + shift)
    return IntervalUnion(p, k + 1, tuple(j + shift for j in U.indices))
