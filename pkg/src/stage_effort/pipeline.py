"""End-to-end fitting: discretize every stage, itemize, mine."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .config import PipelineConfig
from .dataset import STAGES, Dataset, Stage
from .discretize import IntervalScheme, build_universe, partition
from .errors import EmptyDatasetError
from .predict import Estimate, make_query, match_rules, predict
from .rules import AssociationRule, TransactionDB, filter_rules, itemize, mine_rules


def build_schemes(dataset: Dataset, config: PipelineConfig) -> dict[Stage, IntervalScheme]:
    schemes = {}
    for stage in STAGES:
        values = dataset.column(stage)
        if values.size == 0:
            raise EmptyDatasetError(f"no {stage} efforts to build a universe from")
        universe = build_universe(values.tolist(), config.padding[stage])
        schemes[stage] = partition(universe, config.intervals[stage], stage)
    return schemes


@dataclass(frozen=True)
class StageModel:
    """Everything learned from one training set."""

    schemes: Mapping[Stage, IntervalScheme]
    db: TransactionDB
    rules: tuple[AssociationRule, ...]
    target_medians: Mapping[Stage, float]

    def rules_for(self, target: Stage) -> list[AssociationRule]:
        return filter_rules(self.rules, target)

    def estimate(
        self,
        target: Stage,
        prior_efforts: Mapping[Stage, float],
        fallback: Optional[str] = "error",
        rules: Optional[Sequence[AssociationRule]] = None,
        midpoints: Optional[Sequence[float]] = None,
    ) -> Estimate:
        """Predict ``target`` from ``prior_efforts``.

        ``fallback="median"`` answers with the training median of the target
        stage when no rule matches. ``rules`` replaces the mined rules and
        ``midpoints`` the target stage's interval centres.
        """
        query = make_query(target, prior_efforts, self.schemes)
        candidates = self.rules_for(target) if rules is None else filter_rules(rules, target)
        default = self.target_medians[target] if fallback == "median" else None
        centres = self.schemes[target] if midpoints is None else midpoints
        estimate = predict(match_rules(candidates, query), centres, default)
        return Estimate(estimate.value, estimate.contributions, estimate.fallback_used, query.out_of_universe)


def build_model(train: Dataset, config: PipelineConfig, *, single_consequent: bool = False) -> StageModel:
    """Fit schemes and rules on ``train``.

    ``single_consequent`` skips multi-item consequents, which never survive
    target filtering; the filtered rule sets are the same either way.
    """
    schemes = build_schemes(train, config)
    db = itemize(train, schemes)
    rules = mine_rules(db, config.min_support, config.min_confidence, single_consequent=single_consequent)
    medians = {s: float(np.median(train.column(s))) for s in STAGES}
    return StageModel(schemes, db, tuple(rules), medians)
