import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_dataset
from oracles import brute_frequent, brute_rules
from stage_effort import (
    AssociationRule,
    Item,
    Stage,
    build_universe,
    filter_rules,
    generate_rules,
    itemize,
    mine_frequent,
    partition,
    parse_rules,
)
from stage_effort.discretize import Explicit
from stage_effort.errors import ConfigurationError, ConsistencyError, EmptyDatasetError, ParameterError, ParseError
from stage_effort.rules import canonical_order, format_rules

ABAB = [{"A", "B"}, {"A", "B"}, {"A", "C"}, {"B"}]


def rule(lhs, rhs, confidence=0.9, support=0.1):
    return AssociationRule(frozenset(Item.parse(c) for c in lhs), frozenset(Item.parse(c) for c in rhs), support, confidence)


def test_item_codes():
    assert Item(Stage.EP, 1).code == "EP1"
    assert Item.parse("ed10") == Item(Stage.ED, 10)
    with pytest.raises(ParseError):
        Item.parse("EX1")


def test_itemize_worked_value():
    scheme = partition(build_universe([22, 162], Explicit(12, 8)), 4)
    schemes = {s: scheme for s in Stage}
    d = make_dataset([[22, 50, 170, 90, 130, 10], [22, 50, 170, 90, 130, 10]])
    db = itemize(d, schemes)
    assert db.transactions[0] == db.transactions[1]
    assert db.transactions[0] == {Item(Stage.EP, 1), Item(Stage.ES, 2), Item(Stage.ED, 4), Item(Stage.EB, 3),
                                  Item(Stage.ET, 4), Item(Stage.EI, 1)}


def test_itemize_missing_scheme():
    d = make_dataset([[1, 2, 3, 4, 5, 6]])
    scheme = partition(build_universe([0, 10], Explicit(1, 1)), 2)
    with pytest.raises(ConfigurationError):
        itemize(d, {Stage.EP: scheme})


def test_mine_frequent_small_example():
    found = mine_frequent(ABAB, 0.5)
    assert found == {frozenset("A"): 0.75, frozenset("B"): 0.75, frozenset("AB"): 0.5}
    assert found == brute_frequent(ABAB, 0.5)


def test_full_support_on_identical_transactions():
    found = mine_frequent([{1, 2, 3}] * 3, 1.0)
    assert set(found) == {frozenset(s) for s in [{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]}


def test_threshold_just_above_one_occurrence():
    db = [{1, 2}, {1}, {1, 3}, {4}]
    found = mine_frequent(db, 0.2500001)
    assert frozenset({4}) not in found and frozenset({1, 2}) not in found
    assert found == {frozenset({1}): 0.75}


def test_exact_threshold_at_one_percent():
    # 1/100 >= 0.01 must hold despite 0.01 not being exact in binary
    db = [{k} for k in range(100)]
    assert len(mine_frequent(db, 0.01)) == 100


def test_empty_db():
    with pytest.raises(EmptyDatasetError):
        mine_frequent([], 0.5)


@pytest.mark.parametrize("bad", [0, -0.1, 1.5])
def test_bad_support(bad):
    with pytest.raises(ParameterError):
        mine_frequent(ABAB, bad)


def test_generate_rules_small_example():
    frequent = mine_frequent(ABAB, 0.5)
    assert generate_rules(frequent, 0.8, 4) == []
    rules = generate_rules(frequent, 0.6, 4)
    assert {(tuple(r.antecedent), tuple(r.consequent)) for r in rules} == {(("A",), ("B",)), (("B",), ("A",))}
    assert all(r.confidence == 0.5 / 0.75 for r in rules)


def test_consequent_in_every_transaction():
    db = [{1, 9}, {1, 2, 9}, {3, 9}]
    rules = generate_rules(mine_frequent(db, 0.3), 0.99, 3)
    assert all(r.confidence == 1 for r in rules if r.consequent == {9})
    assert {frozenset({1}), frozenset({3}), frozenset({1, 2})} <= {r.antecedent for r in rules if r.consequent == {9}}


def test_not_downward_closed():
    with pytest.raises(ConsistencyError):
        generate_rules({frozenset("AB"): 0.5, frozenset("A"): 0.5}, 0.5, 4)


# --- filtering ------------------------------------------------------------


def test_worked_filter_examples():
    kept = rule(["EP1"], ["ED4"])
    kept2 = rule(["ES2", "EP3"], ["ED2"])
    multi = rule(["EP1", "ES2"], ["ED1", "ET3"])
    late = rule(["ES1", "EI1"], ["ED1"])
    assert filter_rules([kept, kept2, multi, late], Stage.ED) == [kept, kept2]


def test_filter_rejects_other_targets():
    assert filter_rules([rule(["EP1"], ["ES4"])], Stage.ED) == []
    assert filter_rules([rule(["ED1"], ["ED2"])], Stage.ED) == []


items = st.builds(Item, st.sampled_from(list(Stage)), st.integers(1, 4))
sides = st.frozensets(items, min_size=1, max_size=4)


@st.composite
def rules_strategy(draw):
    a = draw(sides)
    b = draw(sides.filter(lambda s: not (s & a)))
    return AssociationRule(a, b, draw(st.floats(0, 1)), draw(st.floats(0.01, 1)))


@given(st.lists(rules_strategy(), max_size=30), st.sampled_from(list(Stage)))
def test_filter_property(rules, target):
    kept = filter_rules(rules, target)
    for r in kept:
        assert len(r.consequent) == 1 and next(iter(r.consequent)).stage == target
        assert max(i.stage for i in r.antecedent) < target
    expected = [r for r in rules if len(r.consequent) == 1 and next(iter(r.consequent)).stage == target
                and all(i.stage < target for i in r.antecedent)]
    assert kept == expected


# --- oracle equivalence ---------------------------------------------------

databases = st.lists(st.frozensets(st.integers(0, 7), max_size=8), min_size=1, max_size=20)
thresholds = st.floats(0.01, 1.0).map(lambda x: round(x, 3)).filter(lambda x: x > 0)


@settings(max_examples=150, deadline=None)
@given(databases, thresholds, thresholds)
def test_miner_equals_brute_force(db, min_support, min_confidence):
    frequent = mine_frequent(db, min_support)
    assert frequent == brute_frequent(db, min_support)
    mined = {(r.antecedent, r.consequent, r.support, r.confidence) for r in generate_rules(frequent, min_confidence, len(db))}
    assert mined == brute_rules(db, min_support, min_confidence)


@settings(max_examples=80, deadline=None)
@given(databases, thresholds, thresholds, thresholds, thresholds)
def test_threshold_monotonicity(db, s1, s2, c1, c2):
    lo_s, hi_s = sorted((s1, s2))
    lo_c, hi_c = sorted((c1, c2))
    loose = {(r.antecedent, r.consequent) for r in generate_rules(mine_frequent(db, lo_s), lo_c, len(db))}
    tight = {(r.antecedent, r.consequent) for r in generate_rules(mine_frequent(db, hi_s), hi_c, len(db))}
    assert tight <= loose


@settings(max_examples=80, deadline=None)
@given(databases, thresholds)
def test_anti_monotone_support(db, min_support):
    frequent = mine_frequent(db, min_support)
    for itemset, support in frequent.items():
        for item in itemset:
            rest = itemset - {item}
            if rest:
                assert frequent[rest] >= support


@settings(max_examples=60, deadline=None)
@given(databases, thresholds, thresholds, st.randoms(use_true_random=False))
def test_mining_is_deterministic_and_canonical(db, s, c, rnd):
    first = generate_rules(mine_frequent(db, s), c, len(db))
    shuffled = list(db)
    rnd.shuffle(shuffled)
    second = generate_rules(mine_frequent(shuffled, s), c, len(db))
    assert first == second
    assert first == canonical_order(first)
    keys = [(-r.support, -r.confidence) for r in first]
    assert keys == sorted(keys)


def test_single_consequent_option_matches_filtered_full_set(synthetic34):
    from stage_effort import PipelineConfig, build_model

    full = build_model(synthetic34, PipelineConfig())
    slim = build_model(synthetic34, PipelineConfig(), single_consequent=True)
    for target in list(Stage)[1:]:
        assert full.rules_for(target) == slim.rules_for(target)


# --- rules file -----------------------------------------------------------


def test_parse_rules_file():
    text = """
    # worked example
    EP1 => ES4 confidence=0.932
    EP1 and ES2 => ED2 confidence=0.85 support=0.1
    EP1, ES2 => ED3 confidence=1
    """
    rules = parse_rules(text)
    assert rules[0].antecedent == {Item(Stage.EP, 1)} and rules[0].consequent == {Item(Stage.ES, 4)}
    assert rules[0].confidence == 0.932 and rules[0].support is None
    assert rules[1].antecedent == {Item(Stage.EP, 1), Item(Stage.ES, 2)} and rules[1].support == 0.1
    assert rules[2].antecedent == rules[1].antecedent
    assert parse_rules(format_rules(rules)) == rules


@pytest.mark.parametrize("line", ["EP1 ES4 confidence=0.9", "EP1 => ES4", "EP1 => ES4 confidence=1.5", "EP1 => EP1 confidence=0.5",
                                  "EX1 => ES4 confidence=0.9", "EP1 => ES4 lift=2"])
def test_parse_rules_errors(line):
    with pytest.raises(ParseError):
        parse_rules(line)


def test_rule_report_format():
    r = rule(["EP1"], ["ES4"], confidence=2 / 3, support=1 / 3)
    assert r.to_dict() == {"antecedent": ["EP1"], "consequent": ["ES4"], "support": 0.333333, "confidence": 0.666667}
