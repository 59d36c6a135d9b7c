import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fuzzyrand import (
    Classification,
    MembershipMatrix,
    ParseError,
    ValidationError,
    classify,
    harden,
    read_csv,
    write_csv,
)

from conftest import make_fuzzy, one_hot


# --- construction and classification


def test_identity_matrix_is_hard():
    m = MembershipMatrix([[1.0, 0.0], [0.0, 1.0]])
    assert classify(m) is Classification.HARD


def test_low_fuzzy_rows_are_fuzzy():
    rows = [[0.98, 0.01, 0.01]] * 9
    assert classify(MembershipMatrix(rows)) is Classification.FUZZY


def test_row_not_summing_to_one_is_possibilistic():
    m = MembershipMatrix([[0.5, 0.7]])
    assert classify(m) is Classification.POSSIBILISTIC


def test_hard_is_also_valid_fuzzy_rows():
    # hard rows sit on the simplex, so HARD is reported before FUZZY
    m = MembershipMatrix([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    assert classify(m) is Classification.HARD
    assert np.allclose(m.values.sum(axis=1), 1.0)


def test_negative_entry_rejected_with_position():
    with pytest.raises(ValidationError, match="row 1, column 0"):
        MembershipMatrix([[0.5, 0.5], [-0.1, 1.1]])


def test_non_finite_entry_rejected():
    with pytest.raises(ValidationError, match="row 0"):
        MembershipMatrix([[np.nan, 1.0], [0.5, 0.5]])


def test_empty_and_one_dimensional_rejected():
    with pytest.raises(ValidationError):
        MembershipMatrix(np.zeros((0, 3)))
    with pytest.raises(ValidationError):
        MembershipMatrix([1.0, 0.0])


@given(
    arrays(np.float64, (4, 3), elements=st.floats(0.05, 1.0)),
    st.permutations(list(range(4))),
)
def test_classification_invariant_under_row_permutation(raw, order):
    values = make_fuzzy(raw)
    m1 = MembershipMatrix(values)
    m2 = MembershipMatrix(values[order])
    assert classify(m1) is classify(m2)


# --- harden


def test_harden_picks_argmax():
    m = MembershipMatrix([[0.98, 0.01, 0.01], [0.01, 0.98, 0.01]])
    hardened = harden(m)
    assert classify(hardened) is Classification.HARD
    assert hardened.values.tolist() == [[1, 0, 0], [0, 1, 0]]


def test_harden_idempotent_on_hard_rows():
    m = MembershipMatrix([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert harden(m).values.tolist() == m.values.tolist()


def test_harden_breaks_ties_toward_lowest_column():
    m = MembershipMatrix([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
    assert harden(m).values.tolist() == [[1, 0, 0], [0, 1, 0]]


@given(arrays(np.float64, (5, 4), elements=st.floats(0.01, 1.0)))
def test_harden_always_yields_hard(raw):
    m = MembershipMatrix(make_fuzzy(raw))
    assert classify(harden(m)) is Classification.HARD


# --- CSV round trips


def test_read_csv_plain(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,0\n0,1\n")
    m = read_csv(path)
    assert m.values.tolist() == [[1, 0], [0, 1]]
    assert classify(m) is Classification.HARD


def test_read_csv_header(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("c1,c2\n1,0\n0,1\n")
    m = read_csv(path, has_header=True)
    assert m.values.tolist() == [[1, 0], [0, 1]]


def test_read_csv_ragged_row_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,0\n0\n")
    with pytest.raises(ParseError) as exc:
        read_csv(path)
    assert exc.value.line == 2


def test_read_csv_bad_field_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,0\n0,x\n")
    with pytest.raises(ParseError) as exc:
        read_csv(path)
    assert exc.value.line == 2


def test_read_csv_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ParseError):
        read_csv(path)


def test_read_csv_header_only(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("a,b\n")
    with pytest.raises(ParseError):
        read_csv(path, has_header=True)


@settings(max_examples=20)
@given(arrays(np.float64, (3, 3), elements=st.floats(0.001, 1.0)))
def test_csv_round_trip_preserves_values(tmp_path_factory, raw):
    values = make_fuzzy(raw)
    path = tmp_path_factory.mktemp("csv") / "m.csv"
    write_csv(MembershipMatrix(values), path)
    back = read_csv(path)
    assert np.allclose(back.values, values, rtol=1e-12, atol=0)


def test_write_csv_with_header(tmp_path):
    path = tmp_path / "m.csv"
    write_csv(MembershipMatrix([[1.0, 0.0]]), path, header=["a", "b"])
    text = path.read_text().splitlines()
    assert text[0] == "a,b"
    assert read_csv(path, has_header=True).values.tolist() == [[1, 0]]


# --- content hash


def test_content_hash_tracks_values():
    a = MembershipMatrix([[0.5, 0.5], [1.0, 0.0]])
    b = MembershipMatrix([[0.5, 0.5], [1.0, 0.0]])
    c = MembershipMatrix([[0.5, 0.5], [0.0, 1.0]])
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != c.content_hash()


def test_one_hot_helper_matches_hard_classification():
    m = MembershipMatrix(one_hot([0, 1, 2, 1]))
    assert classify(m) is Classification.HARD
