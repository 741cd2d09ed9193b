import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import HEADER, make_dataset
from stage_effort import (
    STAGES,
    Dataset,
    IQRPolicy,
    ProjectRecord,
    Stage,
    filter_complete,
    find_outliers,
    parse_dataset,
    quartiles,
    remove_outliers,
    serialize_dataset,
)
from stage_effort.errors import EmptyDatasetError, ParameterError, ParseError, PolicyError, SchemaError


def test_stage_order_and_codes():
    assert [s.code for s in STAGES] == ["EP", "ES", "ED", "EB", "ET", "EI"]
    assert [s.ordinal for s in STAGES] == [1, 2, 3, 4, 5, 6]
    assert Stage.EP < Stage.ES < Stage.ED < Stage.EB < Stage.ET < Stage.EI
    assert {Stage.parse(s.code) for s in STAGES} == set(STAGES)
    assert Stage.ED.predecessors() == (Stage.EP, Stage.ES)
    assert Stage.EI.display_name == "Implementation"
    with pytest.raises(ParameterError):
        Stage.parse("EX")


def test_parse_complete_row():
    d = parse_dataset(HEADER + "p1,4,22,80,120,60,30\n")
    assert len(d) == 1
    assert d["p1"].efforts == (4.0, 22.0, 80.0, 120.0, 60.0, 30.0)
    assert d["p1"].complete


def test_parse_missing_field():
    d = parse_dataset(HEADER + "p2,4,,80,120,60,30\n")
    assert d["p2"].effort(Stage.ES) is None
    assert d["p2"].missing_stages() == (Stage.ES,)


def test_parse_bad_number_names_row_and_column():
    with pytest.raises(ParseError) as info:
        parse_dataset(HEADER + "p3,4,abc,80,120,60,30\n")
    assert info.value.row == "p3" and info.value.column == "ES"
    assert "p3" in str(info.value) and "ES" in str(info.value)


def test_parse_negative_rejected():
    with pytest.raises(ParseError) as info:
        parse_dataset(HEADER + "p3,4,5,-1,120,60,30\n")
    assert info.value.column == "ED"


def test_columns_any_order():
    d = parse_dataset("EI,ET,EB,ED,ES,EP,project_id\n6,5,4,3,2,1,a\n")
    assert d["a"].efforts == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)


@pytest.mark.parametrize(
    "header, column",
    [
        ("project_id,EP,ES,ED,EB,ET,EI,EX", "EX"),
        ("project_id,EP,ES,ED,EB,ET,ET", "ET"),
        ("project_id,EP,ES,ED,EB,ET", "EI"),
    ],
)
def test_schema_errors_name_column(header, column):
    with pytest.raises(SchemaError) as info:
        parse_dataset(header + "\n")
    assert info.value.column == column


def test_duplicate_ids_rejected():
    with pytest.raises(ParseError):
        parse_dataset(HEADER + "a,1,1,1,1,1,1\na,2,2,2,2,2,2\n")


def test_filter_complete():
    d = parse_dataset(HEADER + "a,1,1,1,1,1,1\nb,1,,1,1,1,1\nc,2,2,2,2,2,2\n")
    assert filter_complete(d).ids == ("a", "c")
    full = filter_complete(d)
    assert filter_complete(full) == full


def test_filter_complete_all_incomplete():
    d = parse_dataset(HEADER + "a,1,,1,1,1,1\n")
    with pytest.raises(EmptyDatasetError):
        filter_complete(d)


def test_quartile_convention_matches_positions():
    # Q1 at position 0.25*(n-1)+1 = 3.25 -> 3.25; Q3 at 7.75 -> 7.75
    assert quartiles(list(range(1, 10)) + [1000]) == (3.25, 5.5, 7.75)


def test_iqr_drops_extreme_record():
    rows = [[v, 1, 1, 1, 1, 1] for v in list(range(1, 10)) + [1000]]
    d = make_dataset(rows)
    # fences: 3.25 - 6.75 = -3.5 and 7.75 + 6.75 = 14.5
    assert find_outliers(d, IQRPolicy(1.5)) == {"p9": (Stage.EP,)}
    assert remove_outliers(d, IQRPolicy(1.5)).ids == tuple(f"p{k}" for k in range(9))


def test_iqr_all_equal_drops_nothing():
    d = make_dataset([[5, 5, 5, 5, 5, 5]] * 6)
    assert remove_outliers(d, IQRPolicy()) == d


def test_no_policy_is_identity():
    d = make_dataset([[1, 2, 3, 4, 5, 6], [1, 2, 3, 4, 5, 600]])
    assert remove_outliers(d, None) is d


def test_iqr_needs_four_records():
    with pytest.raises(PolicyError):
        remove_outliers(make_dataset([[1] * 6] * 3), IQRPolicy())


efforts = st.one_of(st.none(), st.floats(min_value=0, max_value=1e7, allow_nan=False))


@st.composite
def datasets(draw):
    n = draw(st.integers(1, 8))
    recs = [ProjectRecord(f"id{k}", tuple(draw(efforts) for _ in STAGES)) for k in range(n)]
    return Dataset(tuple(recs))


@given(datasets())
def test_serialize_round_trip(d):
    assert parse_dataset(serialize_dataset(d)) == d


@given(datasets())
def test_filter_complete_idempotent(d):
    try:
        once = filter_complete(d)
    except EmptyDatasetError:
        return
    assert filter_complete(once) == once


@given(st.lists(st.lists(st.floats(0, 1e4, allow_nan=False), min_size=6, max_size=6), min_size=4, max_size=15))
def test_outlier_removal_is_subset(rows):
    d = make_dataset(rows)
    kept = remove_outliers(d, IQRPolicy())
    assert set(kept.ids) <= set(d.ids)
    assert kept.ids == tuple(i for i in d.ids if i in set(kept.ids))


def test_column_array():
    d = make_dataset([[1, 2, 3, 4, 5, 6], [7, 8, 9, 10, 11, 12]])
    np.testing.assert_array_equal(d.column(Stage.EB), [4.0, 10.0])
