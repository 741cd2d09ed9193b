"""Exponential-regression baseline: OLS of log target effort on raw prior efforts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dataset import Dataset, Stage
from .errors import FitError, ParameterError


@dataclass(frozen=True)
class RegressionModel:
    target: Stage
    stages: tuple[Stage, ...]
    intercept: float
    coefficients: tuple[float, ...]

    def predict(self, prior_efforts: Mapping[Stage, float]) -> float:
        try:
            x = [prior_efforts[s] for s in self.stages]
        except KeyError as exc:
            raise ParameterError(f"missing prior effort for {exc.args[0]}") from None
        return math.exp(self.intercept + math.fsum(b * v for b, v in zip(self.coefficients, x)))

    def to_dict(self) -> dict:
        return {
            "target": self.target.name,
            "intercept": self.intercept,
            "coefficients": {s.name: b for s, b in zip(self.stages, self.coefficients)},
        }


def _collinear_columns(design: np.ndarray, names: list[str]) -> list[str]:
    """Columns that add nothing to the rank of the columns before them."""
    bad, rank = [], 0
    for k in range(design.shape[1]):
        new_rank = np.linalg.matrix_rank(design[:, : k + 1])
        if new_rank == rank:
            bad.append(names[k])
        rank = new_rank
    return bad


def fit_exp_regression(train: Dataset, target: Stage) -> RegressionModel:
    """Fit ``ln(target) = b0 + sum_i b_i * x_i`` over every earlier stage."""
    stages = target.predecessors()
    if not stages:
        raise ParameterError(f"{target} has no prior stage to regress on")
    rows, y = [], []
    for record in train:
        value = record.effort(target)
        priors = [record.effort(s) for s in stages]
        if value is None or any(p is None for p in priors):
            raise FitError(f"project {record.project_id} lacks efforts needed for the {target} regression")
        if value <= 0:
            raise FitError(f"project {record.project_id}: {target} effort must be > 0 for a log fit, got {value}")
        rows.append([1.0] + priors)
        y.append(math.log(value))
    if len(rows) <= len(stages) + 1:
        raise FitError(f"{target} regression needs more than {len(stages) + 1} records, got {len(rows)}")

    design = np.array(rows)
    names = ["intercept"] + [s.name for s in stages]
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise FitError(f"rank-deficient design for {target}; collinear columns: {', '.join(_collinear_columns(design, names))}")
    beta, *_ = np.linalg.lstsq(design, np.array(y), rcond=None)
    return RegressionModel(target, stages, float(beta[0]), tuple(float(b) for b in beta[1:]))
