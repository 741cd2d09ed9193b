"""Confidence-weighted estimates from matched association rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .dataset import Stage
from .discretize import IntervalScheme, defuzzify, locate
from .errors import ConfigurationError, NoApplicableRulesError, ParameterError
from .rules import AssociationRule, Item, canonical_order


@dataclass(frozen=True)
class Query:
    target: Stage
    prior_efforts: Mapping[Stage, float]
    items: frozenset
    out_of_universe: tuple[Stage, ...] = ()


def make_query(target: Stage, prior_efforts: Mapping[Stage, float], schemes: Mapping[Stage, IntervalScheme]) -> Query:
    """Itemize the known prior-stage efforts of a project."""
    items, flagged = [], []
    for stage in sorted(prior_efforts):
        if stage >= target:
            raise ParameterError(f"prior effort for {stage} does not precede target {target}")
        if stage not in schemes:
            raise ConfigurationError(f"no interval scheme for stage {stage}")
        where = locate(schemes[stage], prior_efforts[stage])
        items.append(Item(stage, where.index))
        if where.out_of_universe:
            flagged.append(stage)
    return Query(target, dict(prior_efforts), frozenset(items), tuple(flagged))


def match_rules(rules: Sequence[AssociationRule], query: Query) -> list[AssociationRule]:
    return canonical_order(r for r in rules if r.antecedent <= query.items)


@dataclass(frozen=True)
class Contribution:
    rule: AssociationRule
    defuzzified: float
    confidence: float


@dataclass(frozen=True)
class Estimate:
    value: float
    contributions: tuple[Contribution, ...] = ()
    fallback_used: bool = False
    out_of_universe: tuple[Stage, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "fallback_used": self.fallback_used,
            "out_of_universe": [s.name for s in self.out_of_universe],
            "contributions": [
                dict(c.rule.to_dict(), defuzzified=c.defuzzified, weight=c.confidence) for c in self.contributions
            ],
        }


def predict(
    matched: Sequence[AssociationRule],
    scheme: Union[IntervalScheme, Sequence[float]],
    fallback: Optional[float] = None,
) -> Estimate:
    """Weighted mean of the defuzzified consequents, weighted by confidence.

    ``scheme`` is the target stage's scheme (or its midpoints). With no
    matched rule, ``fallback`` is returned flagged, or
    :class:`NoApplicableRulesError` is raised when it is ``None``.
    """
    if not matched:
        if fallback is None:
            raise NoApplicableRulesError("no rule applies to the query")
        return Estimate(float(fallback), (), True)

    contributions = []
    for rule in canonical_order(matched):
        if len(rule.consequent) != 1:
            raise ParameterError(f"rule {rule} must have a single consequent item")
        (outcome,) = rule.consequent
        contributions.append(Contribution(rule, defuzzify(scheme, outcome.interval), rule.confidence))

    values = [c.defuzzified for c in contributions]
    raw = math.fsum(c.defuzzified * c.confidence for c in contributions) / math.fsum(c.confidence for c in contributions)
    # rounding must not push a convex combination outside its hull
    value = min(max(raw, min(values)), max(values))
    return Estimate(value, tuple(contributions), False)
