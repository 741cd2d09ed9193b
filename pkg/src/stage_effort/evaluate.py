"""Leave-one-out evaluation of the rule model against the regression baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .config import PipelineConfig
from .dataset import STAGES, TARGET_STAGES, Dataset, Stage
from .errors import DataInsufficientError, DegenerateTestError, ParameterError, StageEffortError
from .metrics import BoxplotSummary, bias, boxplot_stats, mdmre, mmre
from .pipeline import build_model
from .ranktest import WilcoxonResult, wilcoxon_rank_sum
from .regression import fit_exp_regression

MODEL = "model"
REGRESSION = "regression"


@dataclass(frozen=True)
class FoldResult:
    project_id: str
    actual: float
    estimated: Optional[float]
    bias: Optional[float]
    abs_residual: Optional[float]
    fallback_used: bool = False
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.bias is not None

    def to_dict(self) -> dict:
        return {
            "estimated": self.estimated,
            "bias": self.bias,
            "abs_residual": self.abs_residual,
            "fallback_used": self.fallback_used,
            "error": self.error,
        }


@dataclass(frozen=True)
class StageMetrics:
    mean_bias: Optional[float]
    mmre: Optional[float]
    mdmre: Optional[float]
    fold_results: tuple[FoldResult, ...]

    @property
    def failures(self) -> int:
        return sum(not f.ok for f in self.fold_results)

    @property
    def fallbacks(self) -> int:
        return sum(f.fallback_used for f in self.fold_results)

    def to_dict(self) -> dict:
        return {
            "mean_bias": self.mean_bias,
            "mmre": self.mmre,
            "mdmre": self.mdmre,
            "n_folds": len(self.fold_results),
            "n_failed": self.failures,
            "n_fallback": self.fallbacks,
        }


def summarize(folds: Sequence[FoldResult]) -> StageMetrics:
    biases = [f.bias for f in folds if f.ok]
    if not biases:
        return StageMetrics(None, None, None, tuple(folds))
    return StageMetrics(math.fsum(biases) / len(biases), mmre(biases), mdmre(biases), tuple(folds))


def _fold(project_id: str, actual: float, estimated: float, fallback_used: bool = False) -> FoldResult:
    try:
        b = bias(actual, estimated)
    except StageEffortError as exc:
        return FoldResult(project_id, actual, estimated, None, abs(actual - estimated), fallback_used, str(exc))
    return FoldResult(project_id, actual, estimated, b, abs(actual - estimated), fallback_used)


def _failed(project_id: str, actual: float, exc: Exception) -> FoldResult:
    return FoldResult(project_id, actual, None, None, None, False, f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class StageReport:
    target: Stage
    rules: tuple
    model: StageMetrics
    regression: StageMetrics
    wilcoxon: Optional[WilcoxonResult]
    wilcoxon_note: Optional[str]
    boxplots: dict = field(default_factory=dict)

    def residuals(self, method: str) -> list[float]:
        metrics = self.model if method == MODEL else self.regression
        return [f.abs_residual for f in metrics.fold_results if f.abs_residual is not None]

    def to_dict(self) -> dict:
        folds = []
        for ours, theirs in zip(self.model.fold_results, self.regression.fold_results):
            folds.append({"project_id": ours.project_id, "actual": ours.actual, MODEL: ours.to_dict(), REGRESSION: theirs.to_dict()})
        wilcoxon = self.wilcoxon.to_dict() if self.wilcoxon else None
        return {
            "target": self.target.name,
            "rules": [r.to_dict() for r in self.rules],
            "folds": folds,
            "metrics_model": self.model.to_dict(),
            "metrics_regression": self.regression.to_dict(),
            "wilcoxon": {"result": wilcoxon, "note": self.wilcoxon_note},
            "boxplots": {k: (v.to_dict() if isinstance(v, BoxplotSummary) else None) for k, v in self.boxplots.items()},
        }


def fold_models(dataset: Dataset, config: PipelineConfig) -> dict[str, object]:
    """Model trained without each project, keyed by the held-out id.

    A fold whose model cannot be built maps to the raised exception.
    """
    models = {}
    for record in dataset:
        try:
            models[record.project_id] = build_model(dataset.without(record.project_id), config, single_consequent=True)
        except StageEffortError as exc:
            models[record.project_id] = exc
    return models


def jackknife(
    dataset: Dataset,
    config: PipelineConfig,
    target: Stage,
    *,
    models: Optional[Mapping[str, object]] = None,
) -> StageReport:
    """Predict each project from a model rebuilt on all the others.

    The rule model falls back to the training median of the target stage
    when configured to (``config.fallback == "median"``); fold failures are
    recorded rather than raised. ``models`` takes the output of
    :func:`fold_models` so several targets can share one set of folds.
    """
    if target not in TARGET_STAGES:
        raise ParameterError(f"{target} has no prior stage and cannot be a prediction target")
    if not dataset.complete:
        raise ParameterError("jackknife needs a complete dataset; run filter_complete first")
    if len(dataset) < 3:
        raise DataInsufficientError(f"jackknife needs at least 3 records, got {len(dataset)}")

    if models is None:
        models = fold_models(dataset, config)
    ours, theirs = [], []
    for record in dataset:
        train = dataset.without(record.project_id)
        actual = record.effort(target)
        priors = {s: record.effort(s) for s in target.predecessors()}
        try:
            model = models[record.project_id]
            if isinstance(model, Exception):
                raise model
            estimate = model.estimate(target, priors, fallback=config.fallback)
            ours.append(_fold(record.project_id, actual, estimate.value, estimate.fallback_used))
        except StageEffortError as exc:
            ours.append(_failed(record.project_id, actual, exc))
        try:
            baseline = fit_exp_regression(train, target)
            theirs.append(_fold(record.project_id, actual, baseline.predict(priors)))
        except (StageEffortError, OverflowError) as exc:
            theirs.append(_failed(record.project_id, actual, exc))

    full = build_model(dataset, config, single_consequent=True)
    report_model, report_regression = summarize(ours), summarize(theirs)

    a = [f.abs_residual for f in ours if f.abs_residual is not None]
    b = [f.abs_residual for f in theirs if f.abs_residual is not None]
    wilcoxon, note = None, None
    try:
        wilcoxon = wilcoxon_rank_sum(a, b)
    except (DegenerateTestError, ParameterError) as exc:
        note = str(exc)

    boxplots = {}
    for name, sample in ((MODEL, a), (REGRESSION, b)):
        boxplots[name] = boxplot_stats(sample) if len(sample) >= 4 else None
    return StageReport(target, tuple(full.rules_for(target)), report_model, report_regression, wilcoxon, note, boxplots)


@dataclass(frozen=True)
class EvaluationReport:
    config: PipelineConfig
    dataset_summary: dict
    stages: tuple[StageReport, ...]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "dataset_summary": self.dataset_summary,
            "stages": [s.to_dict() for s in self.stages],
        }


def dataset_summary(dataset: Dataset, **extra) -> dict:
    stages = {}
    for stage in STAGES:
        column = dataset.column(stage)
        stages[stage.name] = {
            "present": int(column.size),
            "missing": len(dataset) - int(column.size),
            "min": float(column.min()) if column.size else None,
            "max": float(column.max()) if column.size else None,
        }
    return dict({"n_records": len(dataset), "unit": dataset.unit_label, "stages": stages}, **extra)


def evaluate(dataset: Dataset, config: PipelineConfig, targets: Sequence[Stage] = TARGET_STAGES, **summary) -> EvaluationReport:
    models = fold_models(dataset, config)
    stages = tuple(jackknife(dataset, config, t, models=models) for t in targets)
    return EvaluationReport(config, dataset_summary(dataset, **summary), stages)
