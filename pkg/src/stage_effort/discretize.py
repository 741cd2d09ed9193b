"""Padded universes of discourse, equal-width partitions and interval fuzzy sets.

Each stage's observed efforts span ``[D_min, D_max]``. The universe extends that
range by a positive pad on either side and is cut into ``n`` equal intervals
``W_1..W_n``. The fuzzy set ``A_i`` gives interval ``W_i`` membership 1, its
immediate neighbours 0.5 and every other interval 0. Defuzzifying ``A_i``
returns the membership-weighted mean of the interval midpoints.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .dataset import Stage
from .errors import DegenerateUniverseError, ParameterError


@dataclass(frozen=True)
class Explicit:
    """Fixed pads below the minimum (``d1``) and above the maximum (``d2``)."""

    d1: float
    d2: float

    def __post_init__(self):
        if not (self.d1 >= 0 and self.d2 >= 0):
            raise ParameterError(f"explicit pads must be >= 0, got d1={self.d1}, d2={self.d2}")

    def scaled(self, factor: float) -> "Explicit":
        return Explicit(self.d1 * factor, self.d2 * factor)


@dataclass(frozen=True)
class Fraction:
    """Pads of ``fraction * (max - min)`` on both sides.

    When every value is equal the pads become ``fraction * max(1, value)`` so
    the universe keeps a positive width.
    """

    fraction: float = 0.05

    def __post_init__(self):
        if not self.fraction > 0:
            raise ParameterError(f"padding fraction must be > 0, got {self.fraction}")

    def scaled(self, factor: float) -> "Fraction":
        return self


PaddingPolicy = Union[Explicit, Fraction]


@dataclass(frozen=True)
class Universe:
    lower: float
    upper: float
    d1: float
    d2: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def build_universe(values: Sequence[float], pad: PaddingPolicy = Fraction()) -> Universe:
    if len(values) == 0:
        raise ParameterError("cannot build a universe from no values")
    lo, hi = min(values), max(values)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterError("universe values must be finite")
    if isinstance(pad, Explicit):
        d1, d2 = pad.d1, pad.d2
    elif isinstance(pad, Fraction):
        if hi > lo:
            d1 = d2 = pad.fraction * (hi - lo)
        else:
            d1 = d2 = pad.fraction * max(1.0, hi)
    else:
        raise ParameterError(f"unsupported padding policy {pad!r}")
    lower, upper = lo - d1, hi + d2
    if not lower < upper:
        raise DegenerateUniverseError(f"degenerate universe [{lower}, {upper}]")
    return Universe(lower, upper, d1, d2)


@dataclass(frozen=True)
class IntervalScheme:
    """A universe cut into ``n`` equal intervals.

    Intervals are half-open ``[bounds[j-1], bounds[j])`` except the last one,
    which also contains ``upper``.
    """

    stage: Optional[Stage]
    universe: Universe
    n: int
    length: float
    bounds: tuple[float, ...]
    midpoints: tuple[float, ...]

    @property
    def lower(self) -> float:
        return self.universe.lower

    @property
    def upper(self) -> float:
        return self.universe.upper

    def interval(self, j: int) -> tuple[float, float]:
        if not 1 <= j <= self.n:
            raise ParameterError(f"interval index {j} outside 1..{self.n}")
        return self.bounds[j - 1], self.bounds[j]


def partition(universe: Universe, n: int, stage: Optional[Stage] = None) -> IntervalScheme:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"interval count must be an integer >= 1, got {n!r}")
    n = int(n)
    length = (universe.upper - universe.lower) / n
    bounds = [universe.lower + i * length for i in range(n)]
    bounds.append(universe.upper)
    midpoints = tuple((bounds[j] + bounds[j + 1]) / 2 for j in range(n))
    return IntervalScheme(stage, universe, n, length, tuple(bounds), midpoints)


class Location(NamedTuple):
    index: int
    out_of_universe: bool


def locate(scheme: IntervalScheme, value: float) -> Location:
    """1-based interval containing ``value``; values outside the universe are
    clamped to the nearest edge interval and flagged."""
    if math.isnan(value):
        raise ParameterError("cannot locate NaN")
    if value < scheme.lower:
        return Location(1, True)
    if value > scheme.upper:
        return Location(scheme.n, True)
    # interior bounds only; a value equal to a bound belongs to the upper interval
    j = bisect.bisect_right(scheme.bounds, value, 1, scheme.n) - 1
    return Location(j + 1, False)


def membership(i: int, j: int, n: int) -> float:
    """Degree of interval ``W_j`` in fuzzy set ``A_i``."""
    if n < 1 or not (1 <= i <= n and 1 <= j <= n):
        raise ParameterError(f"fuzzy set/interval index out of range: i={i}, j={j}, n={n}")
    gap = abs(i - j)
    if gap == 0:
        return 1.0
    if gap == 1:
        return 0.5
    return 0.0


def defuzzify(scheme: Union[IntervalScheme, Sequence[float]], i: int) -> float:
    """Crisp value of fuzzy set ``A_i``.

    ``scheme`` is an :class:`IntervalScheme` or just the sequence of interval
    midpoints (handy for hand-worked examples whose midpoints are not evenly
    spaced).
    """
    midpoints = scheme.midpoints if isinstance(scheme, IntervalScheme) else tuple(scheme)
    n = len(midpoints)
    weights = [membership(i, j, n) for j in range(1, n + 1)]
    return math.fsum(w * m for w, m in zip(weights, midpoints)) / math.fsum(weights)
