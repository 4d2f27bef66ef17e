import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import seq_partitions
from llp.seqmatch import match_seq, splice
from llp.terms import NonGround, Seq, Var, seq


def P(*items):
    """Pattern from a mix of one-letter literals and variable names."""
    return Seq(tuple(Var(x) if x.isupper() else x for x in items))


def as_text(env):
    return {k: "".join(v.items) for k, v in env.items()}


def all_matches(pattern, subject, s=None):
    return [as_text(m) for m in match_seq(pattern, seq(subject), dict(s or {}))]


def test_prefix_pattern():
    assert all_matches(P("m", "X"), "mi") == [{"X": "i"}]
    (m,) = match_seq(P("m", "X"), seq("mi"), {})
    assert splice(P("m", "X", "X"), m) == seq("mii")


def test_suffix_pattern():
    assert all_matches(P("X", "i"), "mi") == [{"X": "m"}]
    (m,) = match_seq(P("X", "i"), seq("mi"), {})
    assert splice(P("X", "i", "u"), m) == seq("miu")


def test_infix_literals():
    assert all_matches(P("X", "i", "i", "i", "Y"), "miii") == [{"X": "m", "Y": ""}]
    assert all_matches(P("X", "u", "u", "Y"), "muuu") == [
        {"X": "m", "Y": "u"},
        {"X": "mu", "Y": ""},
    ]


def test_no_match_is_an_empty_stream():
    assert all_matches(P("X", "u"), "mi") == []
    assert all_matches(P("m", "i"), "mii") == []
    assert all_matches(P(), "m") == []
    assert all_matches(P(), "") == [{}]


def test_prebound_variable_must_splice_consistently():
    assert all_matches(P("X", "Y"), "miu", {"X": seq("mi")}) == [{"X": "mi", "Y": "u"}]
    assert all_matches(P("X", "Y"), "miu", {"X": seq("u")}) == []
    assert all_matches(P("X", "X"), "mimi") == [{"X": "mi"}]
    assert all_matches(P("X", "X"), "mim") == []


def test_shorter_splits_come_first():
    got = all_matches(P("X", "Y"), "miu")
    assert [m["X"] for m in got] == ["", "m", "mi", "miu"]


@pytest.mark.parametrize("n", range(7))
def test_two_variables_split_n_plus_one_ways(n):
    subject = ("miu" * 3)[:n]
    assert len(all_matches(P("X", "Y"), subject)) == n + 1


def _oracle_pattern(items):
    return [("var", x) if x.isupper() else x for x in items]


def _patterns(max_len=4):
    alphabet = ["m", "i", "u", "X", "Y"]
    for n in range(max_len + 1):
        for items in itertools.product(alphabet, repeat=n):
            yield items


def _same_matches(items, subject):
    got = all_matches(P(*items), subject)
    expected = seq_partitions(_oracle_pattern(items), subject)
    assert len(got) == len({tuple(sorted(g.items())) for g in got}), (items, subject)
    assert sorted(sorted(g.items()) for g in got) == sorted(
        sorted(e.items()) for e in expected
    ), (items, subject)


def _subjects(lengths):
    return ["".join(p) for n in lengths for p in itertools.product("miu", repeat=n)]


def test_matches_equal_brute_force_on_short_subjects():
    for items in _patterns():
        for subject in _subjects(range(5)):
            _same_matches(items, subject)


LONG_SUBJECT_PATTERNS = [
    "XY", "YX", "XX", "XiY", "XiiiY", "XuuY", "mX", "Xi", "XYi", "mXY", "XmY", "iXuYi", "XYX",
]


@pytest.mark.parametrize("items", LONG_SUBJECT_PATTERNS)
def test_matches_equal_brute_force_on_long_subjects(items):
    for subject in _subjects((5, 6)):
        _same_matches(tuple(items), subject)


@given(
    st.lists(st.sampled_from(["m", "i", "u", "X", "Y", "Z"]), max_size=6),
    st.text(alphabet="miu", max_size=8),
)
def test_every_match_splices_back(items, subject):
    pattern = P(*items)
    for m in match_seq(pattern, seq(subject), {}):
        assert splice(pattern, m) == seq(subject)


def test_splice_examples():
    assert splice(P("X", "u", "Y"), {"X": seq("m"), "Y": seq("")}) == seq("mu")
    assert splice(P("m", "X", "X"), {"X": seq("iu")}) == seq("miuiu")
    assert splice(P(), {}) == seq("")


def test_splice_requires_bindings():
    with pytest.raises(NonGround):
        splice(P("m", "X"), {})
    with pytest.raises(NonGround):
        splice(P("m", "X"), {"X": Seq((Var("Y"),))})
