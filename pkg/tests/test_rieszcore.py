import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stoplat import (
    PreconditionError,
    RealRV,
    SampleSpace,
    rv_decompose,
    rv_interpolate,
)

SP2 = SampleSpace(("a", "b"))
SP1 = SampleSpace(("a",))


def rv(sp, *vals):
    return RealRV(sp, tuple(Fraction(v) for v in vals))


def test_forced_decomposition():
    out = rv_decompose(rv(SP2, 1, 1), [rv(SP2, 1, 0), rv(SP2, 0, 1)])
    assert [p.values for p in out.parts] == [(1, 0), (0, 1)]


def test_scalar_greedy():
    out = rv_decompose(rv(SP1, 3), [rv(SP1, 2), rv(SP1, 2)])
    assert [p.values for p in out.parts] == [(2,), (1,)]


def test_decomposition_exists_where_no_stopping_split_does():
    # the r.v. layer ignores the filtration entirely, so this splits even
    # though the corresponding stopping-time search finds nothing
    out = rv_decompose(rv(SP2, 1, 2), [rv(SP2, 1, 1), rv(SP2, 1, 1)])
    assert [p.values for p in out.parts] == [(1, 1), (0, 1)]


def test_preconditions_name_the_outcome():
    with pytest.raises(PreconditionError, match="outcome b"):
        rv_decompose(rv(SP2, 1, -1), [rv(SP2, 1, 1)])
    with pytest.raises(PreconditionError, match="outcome a"):
        rv_decompose(rv(SP2, 1, 0), [rv(SP2, -1, 1)])
    with pytest.raises(PreconditionError, match="outcome b"):
        rv_decompose(rv(SP2, 1, 3), [rv(SP2, 1, 1), rv(SP2, 1, 1)])
    with pytest.raises(PreconditionError):
        rv_decompose(rv(SP2, 1, 1), [])


nonneg = st.integers(0, 6).map(Fraction)


@st.composite
def st_valid_inputs(draw):
    m = draw(st.integers(1, 4))
    sp = SampleSpace(tuple("abcd"[:m]))
    n = draw(st.integers(1, 4))
    ys = [
        RealRV(sp, tuple(draw(nonneg) for _ in range(m))) for _ in range(n)
    ]
    total = [sum(y.values[w] for y in ys) for w in range(m)]
    x = RealRV(
        sp,
        tuple(
            draw(st.integers(0, int(total[w]))) * Fraction(1) for w in range(m)
        ),
    )
    return x, ys


@given(st_valid_inputs())
def test_greedy_output_is_always_valid(inputs):
    x, ys = inputs
    out = rv_decompose(x, ys)
    assert out.target.values == x.values
    assert len(out.parts) == len(ys)
    for w in range(x.space.size):
        assert sum(p.values[w] for p in out.parts) == x.values[w]
        for p, y in zip(out.parts, ys):
            assert 0 <= p.values[w] <= y.values[w]


@given(st_valid_inputs())
def test_permuting_bounds_stays_valid(inputs):
    x, ys = inputs
    for perm in itertools.islice(itertools.permutations(ys), 6):
        out = rv_decompose(x, list(perm))
        for w in range(x.space.size):
            assert sum(p.values[w] for p in out.parts) == x.values[w]
            for p, y in zip(out.parts, perm):
                assert 0 <= p.values[w] <= y.values[w]


def test_interpolate_examples():
    a = [rv(SP2, 0, 1), rv(SP2, 1, 0)]
    b = [rv(SP2, 2, 2)]
    assert rv_interpolate(a, b).values == (1, 1)
    x = rv(SP2, 1, -3)
    assert rv_interpolate([x], [x]).values == x.values
    assert rv_interpolate([rv(SP2, 0, 0)], [rv(SP2, 1, 0), rv(SP2, 0, 1)]).values == (0, 0)


def test_interpolate_reports_witness():
    with pytest.raises(PreconditionError, match="lower element 1"):
        rv_interpolate([rv(SP2, 0, 0), rv(SP2, 3, 0)], [rv(SP2, 2, 2)])
    with pytest.raises(PreconditionError):
        rv_interpolate([], [rv(SP2, 1, 1)])


signed = st.integers(-5, 5).map(Fraction)


@st.composite
def st_ordered_families(draw):
    m = draw(st.integers(1, 3))
    sp = SampleSpace(tuple("abc"[:m]))
    k = draw(st.integers(1, 3))
    lows = [
        RealRV(sp, tuple(draw(signed) for _ in range(m))) for _ in range(k)
    ]
    tops = [max(a.values[w] for a in lows) for w in range(m)]
    uppers = [
        RealRV(
            sp,
            tuple(tops[w] + draw(nonneg) for w in range(m)),
        )
        for _ in range(draw(st.integers(1, 3)))
    ]
    return lows, uppers


@given(st_ordered_families())
def test_interpolate_is_least(families):
    lows, uppers = families
    z = rv_interpolate(lows, uppers)
    for w in range(z.space.size):
        assert max(a.values[w] for a in lows) == z.values[w]
        for a in lows:
            assert a.values[w] <= z.values[w]
        for b in uppers:
            assert z.values[w] <= b.values[w]
