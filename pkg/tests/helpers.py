"""Shared fixtures: independent reference predicates, canned instances,
random scene generators, and hypothesis strategies.

The two reference predicates below are deliberately different computations
from the production check-point sweep:

* value-levels: [T <= v] measurable at the right sigma-algebra for each
  finite value v of T.  Sufficient because [T <= t] equals [T <= v] for the
  largest value v <= t and sigma-algebras only grow with t; the optional
  variant needs the algebra just after v, which is at_right(v).
* pairwise: T fails iff two outcomes with values v1 < v2 share a block of
  the sigma-algebra at v1 (at_right(v1) for the optional variant), i.e.
  the filtration cannot yet separate an outcome that stopped from one that
  has not.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from stoplat import (
    INF,
    Infinity,
    Boundary,
    Filtration,
    Partition,
    RandomTime,
    SampleSpace,
    max_stopping_minorant,
    time_add,
    time_meet,
)

LETTERS = "abcdef"


# ---------------------------------------------------------------------------
# Independent reference predicates


def levels_is_stopping(t: RandomTime, f: Filtration) -> bool:
    return all(
        f.at(v).is_measurable(t.level_at_most(v)) for v in t.finite_values()
    )


def levels_is_optional(t: RandomTime, f: Filtration) -> bool:
    return all(
        f.at_right(v).is_measurable(t.level_at_most(v))
        for v in t.finite_values()
    )


def _pairwise(t: RandomTime, f: Filtration, right: bool) -> bool:
    m = t.space.size
    for w1 in range(m):
        v1 = t.values[w1]
        if isinstance(v1, Infinity):
            continue
        part = f.at_right(v1) if right else f.at(v1)
        block = part.block_containing(w1)
        for w2 in block:
            if v1 < t.values[w2]:
                return False
    return True


def pairwise_is_stopping(t: RandomTime, f: Filtration) -> bool:
    return _pairwise(t, f, right=False)


def pairwise_is_optional(t: RandomTime, f: Filtration) -> bool:
    return _pairwise(t, f, right=True)


# ---------------------------------------------------------------------------
# Canned instances


def space2() -> SampleSpace:
    return SampleSpace(("a", "b"))


def reveal_at_one() -> Filtration:
    """Two outcomes; trivial until 1, discrete from 1 on (inclusive)."""
    sp = space2()
    return Filtration(
        sp,
        (
            (Fraction(0), Partition.trivial(sp), Boundary.INCLUSIVE),
            (Fraction(1), Partition.discrete(sp), Boundary.INCLUSIVE),
        ),
    )


def reveal_after_one() -> Filtration:
    """Same as reveal_at_one but the refinement at 1 is exclusive, so the
    discrete algebra is available only strictly after 1."""
    sp = space2()
    return Filtration(
        sp,
        (
            (Fraction(0), Partition.trivial(sp), Boundary.INCLUSIVE),
            (Fraction(1), Partition.discrete(sp), Boundary.EXCLUSIVE),
        ),
    )


def discrete_filtration(sp: SampleSpace) -> Filtration:
    return Filtration(
        sp, ((Fraction(0), Partition.discrete(sp), Boundary.INCLUSIVE),)
    )


def trivial_filtration(sp: SampleSpace) -> Filtration:
    return Filtration(
        sp, ((Fraction(0), Partition.trivial(sp), Boundary.INCLUSIVE),)
    )


def t(f_or_sp, *vals) -> RandomTime:
    sp = f_or_sp.space if isinstance(f_or_sp, Filtration) else f_or_sp
    return RandomTime(
        sp, tuple(v if v is INF else Fraction(v) for v in vals)
    )


# ---------------------------------------------------------------------------
# Seeded random scenes (plain random module; independent of the package's
# own instance generator)


def grid_values(q: int, max_value) -> list[Fraction]:
    mx = Fraction(max_value)
    return [Fraction(k, q) for k in range(int(mx * q) + 1)]


def random_partition(
    rng: random.Random, sp: SampleSpace, coarser: Partition | None = None
) -> Partition:
    if coarser is None:
        buckets = rng.randint(1, sp.size)
        groups: dict[int, list[int]] = {}
        for w in range(sp.size):
            groups.setdefault(rng.randrange(buckets), []).append(w)
        return Partition.from_blocks(sp, groups.values())
    blocks = []
    for block in coarser.blocks:
        if len(block) == 1 or rng.random() < 0.5:
            blocks.append(list(block))
            continue
        sides = [rng.randrange(2) for _ in block]
        left = [w for w, s in zip(block, sides) if s == 0]
        right = [w for w, s in zip(block, sides) if s == 1]
        if left and right:
            blocks.extend([left, right])
        else:
            blocks.append(list(block))
    return Partition.from_blocks(sp, blocks)


def random_filtration(
    rng: random.Random,
    sp: SampleSpace,
    q: int = 2,
    max_value=2,
    max_breakpoints: int = 3,
    all_inclusive: bool = False,
) -> Filtration:
    positive = [v for v in grid_values(q, max_value) if v > 0]
    k = rng.randint(0, min(max_breakpoints, len(positive)))
    part = random_partition(rng, sp)
    entries = [(Fraction(0), part, Boundary.INCLUSIVE)]
    for u in sorted(rng.sample(positive, k)):
        part = random_partition(rng, sp, coarser=part)
        flag = (
            Boundary.INCLUSIVE
            if all_inclusive
            else rng.choice((Boundary.INCLUSIVE, Boundary.EXCLUSIVE))
        )
        entries.append((u, part, flag))
    return Filtration(sp, tuple(entries))


def random_time(
    rng: random.Random,
    sp: SampleSpace,
    q: int = 2,
    max_value=2,
    inf_chance: float = 0.0,
) -> RandomTime:
    vals = grid_values(q, max_value)
    return RandomTime(
        sp,
        tuple(
            INF if inf_chance and rng.random() < inf_chance else rng.choice(vals)
            for _ in range(sp.size)
        ),
    )


def random_space(rng: random.Random, max_omega: int = 4) -> SampleSpace:
    return SampleSpace(tuple(LETTERS[: rng.randint(2, max_omega)]))


def random_stopping_time(
    rng: random.Random,
    f: Filtration,
    q: int = 2,
    max_value=2,
    optional_mode: bool = False,
) -> RandomTime:
    u = random_time(rng, f.space, q, max_value)
    return max_stopping_minorant(u, f, optional_mode)


def random_dominated_target(
    rng: random.Random,
    f: Filtration,
    bounds,
    q: int = 2,
    max_value=2,
    optional_mode: bool = False,
) -> RandomTime:
    """A passing time below the pointwise sum of the bounds."""
    total = bounds[0]
    for b in bounds[1:]:
        total = time_add(total, b)
    u = time_meet(random_time(rng, f.space, q, max_value), total)
    return max_stopping_minorant(u, f, optional_mode)


# ---------------------------------------------------------------------------
# Hypothesis strategies


@st.composite
def st_partition(draw, sp: SampleSpace, coarser: Partition | None = None):
    if coarser is None:
        assign = draw(
            st.lists(
                st.integers(0, sp.size - 1),
                min_size=sp.size,
                max_size=sp.size,
            )
        )
        groups: dict[int, list[int]] = {}
        for w, g in enumerate(assign):
            groups.setdefault(g, []).append(w)
        return Partition.from_blocks(sp, groups.values())
    blocks = []
    for block in coarser.blocks:
        if len(block) == 1 or not draw(st.booleans()):
            blocks.append(list(block))
            continue
        sides = draw(
            st.lists(
                st.booleans(), min_size=len(block), max_size=len(block)
            )
        )
        left = [w for w, s in zip(block, sides) if not s]
        right = [w for w, s in zip(block, sides) if s]
        if left and right:
            blocks.extend([left, right])
        else:
            blocks.append(list(block))
    return Partition.from_blocks(sp, blocks)


@st.composite
def st_filtration(draw, sp: SampleSpace, q: int = 2, max_value=2):
    positive = [v for v in grid_values(q, max_value) if v > 0]
    breakpoints = draw(
        st.lists(
            st.sampled_from(positive), unique=True, min_size=0, max_size=3
        ).map(sorted)
    )
    part = draw(st_partition(sp))
    entries = [(Fraction(0), part, Boundary.INCLUSIVE)]
    for u in breakpoints:
        part = draw(st_partition(sp, coarser=part))
        flag = draw(
            st.sampled_from((Boundary.INCLUSIVE, Boundary.EXCLUSIVE))
        )
        entries.append((u, part, flag))
    return Filtration(sp, tuple(entries))


@st.composite
def st_time(draw, sp: SampleSpace, q: int = 2, max_value=2,
            allow_inf: bool = False):
    vals: list = list(grid_values(q, max_value))
    if allow_inf:
        vals.append(INF)
    return RandomTime(
        sp, tuple(draw(st.sampled_from(vals)) for _ in range(sp.size))
    )


@st.composite
def st_scene(draw, max_omega: int = 4, q: int = 2, max_value=2,
             n_times: int = 2, allow_inf: bool = False):
    """(filtration, times): the workhorse strategy for predicate laws."""
    m = draw(st.integers(2, max_omega))
    sp = SampleSpace(tuple(LETTERS[:m]))
    f = draw(st_filtration(sp, q, max_value))
    times = tuple(
        draw(st_time(sp, q, max_value, allow_inf)) for _ in range(n_times)
    )
    return f, times
