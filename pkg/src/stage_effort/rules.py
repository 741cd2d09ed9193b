"""Stage-interval items, Apriori mining and rule filtering.

The miner itself is generic: any hashable, mutually orderable items work.
Supports are reported as ``count / |D|`` and confidences as
``count(A | B) / count(A)``; threshold tests are done in exact rational
arithmetic against the decimal value of the threshold, so ``0.01`` on 100
transactions admits an itemset that occurs once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Optional, Sequence

from .dataset import Dataset, Stage
from .discretize import IntervalScheme, locate
from .errors import ConfigurationError, ConsistencyError, EmptyDatasetError, ParameterError, ParseError

_ITEM_RE = re.compile(r"^(EP|ES|ED|EB|ET|EI)(\d+)$", re.IGNORECASE)


class Item(NamedTuple):
    """A stage paired with a 1-based interval index, written ``EP1``."""

    stage: Stage
    interval: int

    @property
    def code(self) -> str:
        return f"{self.stage.name}{self.interval}"

    @classmethod
    def parse(cls, code: str) -> "Item":
        m = _ITEM_RE.match(code.strip())
        if not m or int(m.group(2)) < 1:
            raise ParseError(f"bad item code {code!r}; expected e.g. EP1")
        return cls(Stage[m.group(1).upper()], int(m.group(2)))

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class TransactionDB:
    transactions: tuple[frozenset, ...]
    schemes: Mapping[Stage, IntervalScheme]

    def __len__(self) -> int:
        return len(self.transactions)


def itemize(dataset: Dataset, schemes: Mapping[Stage, IntervalScheme]) -> TransactionDB:
    """One transaction per project: the interval item of each populated stage."""
    transactions = []
    for record in dataset:
        items = []
        for stage, value in record.as_dict().items():
            if value is None:
                continue
            if stage not in schemes:
                raise ConfigurationError(f"no interval scheme for stage {stage} (project {record.project_id})")
            items.append(Item(stage, locate(schemes[stage], value).index))
        transactions.append(frozenset(items))
    return TransactionDB(tuple(transactions), dict(schemes))


def _exact(threshold: float, name: str) -> Q:
    try:
        value = Q(str(threshold))
    except (ValueError, TypeError):
        raise ParameterError(f"{name} must be a number, got {threshold!r}") from None
    if not 0 < value <= 1:
        raise ParameterError(f"{name} must lie in (0, 1], got {threshold}")
    return value


def _transactions(db) -> list[frozenset]:
    return [frozenset(t) for t in getattr(db, "transactions", db)]


def mine_frequent(
    db,
    min_support: float,
    *,
    exclusive_key: Optional[Callable[[Hashable], Hashable]] = None,
) -> dict[frozenset, float]:
    """All itemsets with support >= ``min_support``, level by level.

    ``db`` is a :class:`TransactionDB` or any sequence of item collections.
    ``exclusive_key`` skips candidates holding two items with the same key
    (e.g. two intervals of one stage, which itemization never produces).
    """
    transactions = _transactions(db)
    n = len(transactions)
    if n == 0:
        raise EmptyDatasetError("cannot mine an empty transaction database")
    threshold = _exact(min_support, "min_support")
    # count/n >= threshold  <=>  count >= ceil(threshold * n)
    scaled = threshold * n
    min_count = -(-scaled.numerator // scaled.denominator)

    tids: dict = {}
    for position, transaction in enumerate(transactions):
        bit = 1 << position
        for item in transaction:
            tids[item] = tids.get(item, 0) | bit

    level = {frozenset([item]): mask for item, mask in tids.items() if mask.bit_count() >= min_count}
    counts: dict[frozenset, int] = {}
    while level:
        for itemset, mask in level.items():
            counts[itemset] = mask.bit_count()
        ordered = sorted((tuple(sorted(s)), mask) for s, mask in level.items())
        following = {}
        for a_pos, (a, a_mask) in enumerate(ordered):
            for b, _ in ordered[a_pos + 1 :]:
                if a[:-1] != b[:-1]:
                    break
                last = b[-1]
                if exclusive_key is not None and exclusive_key(a[-1]) == exclusive_key(last):
                    continue
                candidate = a + (last,)
                # the two subsets dropping either of the last items are a and b themselves
                if any(frozenset(candidate[:k] + candidate[k + 1 :]) not in level for k in range(len(candidate) - 2)):
                    continue
                mask = a_mask & tids[last]
                if mask.bit_count() >= min_count:
                    following[frozenset(candidate)] = mask
        level = following
    return {itemset: count / n for itemset, count in counts.items()}


@dataclass(frozen=True)
class AssociationRule:
    antecedent: frozenset
    consequent: frozenset
    support: Optional[float]
    confidence: float

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "consequent", frozenset(self.consequent))
        if not self.antecedent or not self.consequent:
            raise ParameterError("rule sides must be non-empty")
        if self.antecedent & self.consequent:
            raise ParameterError("antecedent and consequent must be disjoint")
        if not 0 < self.confidence <= 1:
            raise ParameterError(f"confidence must lie in (0, 1], got {self.confidence}")

    def sort_key(self):
        support = -1.0 if self.support is None else self.support
        return (-support, -self.confidence, tuple(sorted(self.antecedent)), tuple(sorted(self.consequent)))

    def __str__(self) -> str:
        return f"{_side(self.antecedent)} => {_side(self.consequent)}"

    def to_dict(self) -> dict:
        return {
            "antecedent": [str(i) for i in sorted(self.antecedent)],
            "consequent": [str(i) for i in sorted(self.consequent)],
            "support": None if self.support is None else round(self.support, 6),
            "confidence": round(self.confidence, 6),
        }


def _side(items) -> str:
    return " ".join(str(i) for i in sorted(items))


def canonical_order(rules: Iterable[AssociationRule]) -> list[AssociationRule]:
    return sorted(rules, key=AssociationRule.sort_key)


def generate_rules(
    frequent: Mapping[frozenset, float],
    min_confidence: float,
    db_size: int,
    *,
    max_consequent: Optional[int] = None,
) -> list[AssociationRule]:
    """Every rule ``A => B`` with ``A | B`` frequent and confidence >= ``min_confidence``.

    ``max_consequent`` optionally caps the consequent size; filtering for a
    target stage only ever keeps single-item consequents.
    """
    threshold = _exact(min_confidence, "min_confidence")
    if db_size < 1:
        raise ParameterError("db_size must be >= 1")
    counts = {frozenset(s): round(sup * db_size) for s, sup in frequent.items()}
    for itemset in counts:
        if len(itemset) > 1:
            for item in itemset:
                if itemset - {item} not in counts:
                    raise ConsistencyError(f"frequent itemsets not downward closed: missing subset of {set(itemset)}")

    limit = max_consequent or 0
    rules = []
    for itemset, joint in counts.items():
        size = len(itemset)
        if size < 2:
            continue
        members = sorted(itemset)
        top = size - 1 if not limit else min(limit, size - 1)
        for k in range(1, top + 1):
            for consequent in combinations(members, k):
                antecedent = itemset.difference(consequent)
                base = counts[antecedent]
                if joint * threshold.denominator >= threshold.numerator * base:
                    rules.append(AssociationRule(antecedent, frozenset(consequent), frequent[itemset], joint / base))
    return canonical_order(rules)


def filter_rules(rules: Iterable[AssociationRule], target: Stage) -> list[AssociationRule]:
    """Rules predicting exactly one ``target`` interval from strictly earlier stages."""
    kept = []
    for rule in rules:
        if len(rule.consequent) != 1:
            continue
        (outcome,) = rule.consequent
        if outcome.stage != target:
            continue
        if all(item.stage < target for item in rule.antecedent):
            kept.append(rule)
    return kept


def mine_rules(
    db: TransactionDB, min_support: float, min_confidence: float, *, single_consequent: bool = False
) -> list[AssociationRule]:
    frequent = mine_frequent(db, min_support, exclusive_key=lambda item: item.stage)
    return generate_rules(frequent, min_confidence, len(db), max_consequent=1 if single_consequent else None)


_RULE_LINE = re.compile(r"^(?P<lhs>.+?)\s*=>\s*(?P<rhs>.+?)\s+(?P<attrs>(?:\w+\s*=\s*\S+\s*)+)$")
_ATTR = re.compile(r"(\w+)\s*=\s*(\S+)")


def _parse_items(text: str) -> frozenset:
    tokens = [t for t in re.split(r"[\s,&]+|\band\b", text) if t]
    return frozenset(Item.parse(t) for t in tokens)


def parse_rules(text: str) -> list[AssociationRule]:
    """Read rules written as ``EP1 ES2 => ED2 confidence=0.85 [support=0.1]``.

    Blank lines and ``#`` comments are ignored; antecedent items may also be
    joined with ``and``.
    """
    rules = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RULE_LINE.match(line)
        if not m:
            raise ParseError(f"rules line {line_no}: expected 'ITEMS => ITEM confidence=<p>': {raw!r}", row=line_no)
        attrs = dict((k.lower(), v) for k, v in _ATTR.findall(m.group("attrs")))
        unknown = set(attrs) - {"confidence", "support"}
        if unknown or "confidence" not in attrs:
            raise ParseError(f"rules line {line_no}: need confidence=, got {sorted(attrs)}", row=line_no)
        try:
            confidence = float(attrs["confidence"])
            support = float(attrs["support"]) if "support" in attrs else None
            rules.append(AssociationRule(_parse_items(m.group("lhs")), _parse_items(m.group("rhs")), support, confidence))
        except (ValueError, ParameterError) as exc:
            raise ParseError(f"rules line {line_no}: {exc}", row=line_no) from None
    return rules


def format_rules(rules: Sequence[AssociationRule]) -> str:
    lines = []
    for rule in rules:
        line = f"{rule} confidence={rule.confidence:.6f}"
        if rule.support is not None:
            line += f" support={rule.support:.6f}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
