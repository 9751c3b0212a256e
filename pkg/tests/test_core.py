import pytest
from hypothesis import given, strategies as st

from dupcodes.core import (
    INF, ChannelParams, SpaceSq, check_word, format_word, iter_space, membership_Sq,
    parse_r, parse_word, split_runs, to_run_form, to_word, weight,
)
from conftest import w


@pytest.mark.parametrize("q,ell,r", [(1, 1, 1), (2, 0, 1), (2, 1, 0), (2, 1, 1.5), (2**16 + 1, 1, 1)])
def test_params_rejects_bad_values(q, ell, r):
    with pytest.raises(ValueError):
        ChannelParams(q, ell, r)


def test_params_unbounded():
    p = ChannelParams(3, 2, INF)
    assert not p.bounded
    assert str(p) == "q=3 ell=2 r=inf"
    assert ChannelParams(2, 1, 4).bounded


def test_parse_r():
    assert parse_r("inf") == INF
    assert parse_r(" INF ") == INF
    assert parse_r("7") == 7
    with pytest.raises(ValueError):
        parse_r("seven")


def test_run_form_examples():
    assert to_run_form(w("1211021")) == ((1, 0), (2, 0), (1, 0), (1, 1), (2, 0), (1, 0))
    assert to_run_form(w("1")) == ((1, 0),)
    assert to_run_form(w("10020")) == ((1, 2), (2, 1))
    assert weight(w("1211021")) == 6


def test_run_form_rejects_leading_zero_and_empty():
    with pytest.raises(ValueError):
        to_run_form(w("01"))
    with pytest.raises(ValueError):
        to_run_form(())


def test_to_word_examples():
    assert to_word([(1, 2), (2, 1)]) == w("10020")
    assert to_word([]) == ()
    assert to_word([(1, 0)]) == (1,)


def test_split_runs_leading_zeros():
    assert split_runs(w("00102")) == (2, ((1, 1), (2, 0)))
    assert split_runs(w("000")) == (3, ())


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(0, 6)), min_size=1, max_size=8))
def test_run_form_round_trip(segs):
    assert to_run_form(to_word(segs)) == tuple(segs)


def test_space_membership():
    s3 = SpaceSq(ChannelParams(2, 1, 1), 3)
    assert membership_Sq(s3, w("100"))
    assert not membership_Sq(s3, w("0110"))
    assert not membership_Sq(s3, ())
    assert membership_Sq(SpaceSq(ChannelParams(2, 1, 1), 19), w("1001") + (0,) * 14)
    assert len(s3) == 7


def test_iter_space_order_and_size():
    words = list(iter_space(2, 3))
    assert words == [w(x) for x in ("1", "10", "11", "100", "101", "110", "111")]
    assert len(list(iter_space(3, 4))) == sum(2 * 3 ** (m - 1) for m in range(1, 5))
    with_zero = list(iter_space(2, 2, min_length=2, leading_zero=True))
    assert with_zero == [w(x) for x in ("00", "01", "10", "11")]


def test_word_text_format():
    assert parse_word("10020", 3) == w("10020")
    assert format_word(w("10020"), 3) == "10020"
    assert format_word((11, 0, 3), 12) == "11 0 3"
    assert parse_word("11 0 3", 12) == (11, 0, 3)
    with pytest.raises(ValueError):
        parse_word("13", 3)
    with pytest.raises(ValueError):
        check_word((1, -1), 3)
