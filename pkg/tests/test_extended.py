from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stoplat import (
    INF,
    Infinity,
    ext_add,
    ext_scale,
    ext_sub,
    ext_sum,
    fmt,
    is_finite,
    parse_rational,
    parse_time_value,
)

finite = st.fractions(min_value=0, max_value=100)
ext = st.one_of(finite, st.just(INF))


def test_infinity_is_a_singleton():
    assert Infinity() is INF
    assert INF == INF
    assert hash(INF) == hash(Infinity())


def test_infinity_ordering():
    assert Fraction(10**9) < INF
    assert not INF < Fraction(10**9)
    assert INF <= INF
    assert not INF < INF
    assert INF > Fraction(0)
    assert not Fraction(0) > INF
    assert INF >= INF
    assert INF != Fraction(1)


@given(ext, ext)
def test_ext_add_commutes(a, b):
    assert ext_add(a, b) == ext_add(b, a)


@given(ext, ext, ext)
def test_ext_add_associates(a, b, c):
    assert ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c))


@given(ext)
def test_ext_sum_matches_fold(a):
    assert ext_sum([a, Fraction(1), INF]) is INF
    assert ext_sum([]) == 0
    assert ext_sum([a]) == a


def test_undefined_operations_raise():
    with pytest.raises(ValueError):
        ext_scale(Fraction(0), INF)
    with pytest.raises(ValueError):
        ext_scale(Fraction(-1), Fraction(1))
    with pytest.raises(ValueError):
        ext_sub(INF, Fraction(1))
    with pytest.raises(ValueError):
        ext_sub(Fraction(1), INF)


@given(finite, finite)
def test_ext_sub_inverts_add(a, b):
    assert ext_sub(ext_add(a, b), b) == a


@given(st.fractions(min_value=0, max_value=10), ext)
def test_ext_scale_positive(lam, a):
    out = ext_scale(lam, a) if not (lam == 0 and a is INF) else None
    if out is None:
        return
    if a is INF:
        assert out is INF if lam > 0 else out == 0
    else:
        assert out == lam * a


def test_is_finite():
    assert is_finite(Fraction(3, 2))
    assert not is_finite(INF)


@given(ext)
def test_fmt_parse_round_trip(a):
    assert parse_time_value(fmt(a)) == a


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == Fraction(-2)
    for bad in ("", "1/0", "x", "1.5", "inf"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_parse_time_value():
    assert parse_time_value("inf") is INF
    assert parse_time_value("5/2") == Fraction(5, 2)
    with pytest.raises(ValueError):
        parse_time_value("-1")
