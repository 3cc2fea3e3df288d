"""Exact Hausdorff and packing measure checks for the digit-restricted Cantor sets C(n, l)."""

from .exact import (ComparisonOutcome, Density, Ordering, UndecidedAtMaxPrecision,
                    canonicalize, density_compare, pow_s_bracket)
from .ifs import (BasicInterval, ConsecutiveUnion, IntervalUnion, Params, Word,
                  apply_map, blow_down, level_set)
from .measure import cdf, density_of, measure_interval, measure_union

__all__ = [
    "BasicInterval", "ComparisonOutcome", "ConsecutiveUnion", "Density",
    "IntervalUnion", "Ordering", "Params", "UndecidedAtMaxPrecision", "Word",
    "apply_map", "blow_down", "canonicalize", "cdf", "density_compare",
    "density_of", "level_set", "measure_interval", "measure_union",
    "pow_s_bracket",
]
