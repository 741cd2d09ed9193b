"""Accuracy criteria and boxplot summaries."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .dataset import quartiles
from .errors import ParameterError, UndefinedMetricError


def bias(actual: float, estimated: float) -> float:
    """Relative error ``(actual - estimated) / actual``; positive means the
    estimate fell short of the actual effort."""
    if actual == 0:
        raise UndefinedMetricError("bias is undefined for a zero actual effort")
    return (actual - estimated) / actual


def _magnitudes(biases: Sequence[float]) -> list[float]:
    if len(biases) == 0:
        raise ParameterError("need at least one bias value")
    return [abs(b) for b in biases]


def mmre(biases: Sequence[float]) -> float:
    return math.fsum(_magnitudes(biases)) / len(biases)


def mdmre(biases: Sequence[float]) -> float:
    return float(statistics.median(_magnitudes(biases)))


@dataclass(frozen=True)
class BoxplotSummary:
    median: float
    q1: float
    q3: float
    iqr: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "iqr": self.iqr,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outliers": list(self.outliers),
        }


def boxplot_stats(values: Sequence[float], whisker: float = 1.5) -> BoxplotSummary:
    """Tukey boxplot: whiskers reach the furthest points within
    ``whisker * IQR`` of the quartiles; anything beyond is an outlier."""
    if len(values) < 4:
        raise ParameterError(f"boxplot needs at least 4 values, got {len(values)}")
    data = sorted(float(v) for v in values)
    q1, median, q3 = quartiles(data)
    spread = q3 - q1
    low_fence, high_fence = q1 - whisker * spread, q3 + whisker * spread
    inside = [v for v in data if low_fence <= v <= high_fence]
    outliers = tuple(v for v in data if v < low_fence or v > high_fence)
    return BoxplotSummary(median, q1, q3, spread, inside[0], inside[-1], outliers)
