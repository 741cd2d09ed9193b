"""Wilcoxon rank-sum test with midranks and a normal approximation."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .errors import DegenerateTestError, ParameterError

EXACT_MAX_SIZE = 12


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of the positions they span."""
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        stop = start
        while stop + 1 < len(order) and values[order[stop + 1]] == values[order[start]]:
            stop += 1
        shared = (start + stop) / 2 + 1
        for k in order[start : stop + 1]:
            ranks[k] = shared
        start = stop + 1
    return ranks


@dataclass(frozen=True)
class WilcoxonResult:
    rank_sum: float
    z_value: float
    p_value: float
    n_a: int
    n_b: int
    exact_p_value: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "rank_sum": self.rank_sum,
            "z_value": self.z_value,
            "p_value": self.p_value,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "exact_p_value": self.exact_p_value,
        }


def exact_p_value(ranks: Sequence[float], n_a: int, observed: float) -> float:
    """Two-sided permutation p: share of all size-``n_a`` rank subsets whose
    sum is at least as far from its mean as ``observed``."""
    total_n = len(ranks)
    mean = n_a * (total_n + 1) / 2
    distance = abs(observed - mean) - 1e-9
    hits = total = 0
    for subset in combinations(ranks, n_a):
        total += 1
        if abs(math.fsum(subset) - mean) >= distance:
            hits += 1
    return hits / total


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float], *, exact: Optional[bool] = None) -> WilcoxonResult:
    """Rank-sum test of sample ``a`` against ``b``.

    ``z`` uses the tie-corrected variance and a 0.5 continuity correction;
    the p-value is two-sided. The exact permutation p-value is added for
    combined sizes up to 12 (or when ``exact`` is forced).
    """
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise ParameterError("both samples must be non-empty")
    combined = [float(v) for v in a] + [float(v) for v in b]
    n = n_a + n_b
    ranks = midranks(combined)
    rank_sum = math.fsum(ranks[:n_a])

    ties = sum(t**3 - t for t in Counter(combined).values())
    variance = n_a * n_b / 12 * ((n + 1) - ties / (n * (n - 1)))
    if variance <= 0:
        raise DegenerateTestError("all values are identical; the rank-sum test is undefined")
    mean = n_a * (n + 1) / 2
    deviation = rank_sum - mean
    corrected = max(abs(deviation) - 0.5, 0.0)
    z = math.copysign(corrected, deviation) / math.sqrt(variance) if corrected else 0.0
    p = min(1.0, math.erfc(abs(z) / math.sqrt(2)))

    want_exact = n <= EXACT_MAX_SIZE if exact is None else exact
    exact_p = exact_p_value(ranks, n_a, rank_sum) if want_exact else None
    return WilcoxonResult(rank_sum, z, p, n_a, n_b, exact_p)
