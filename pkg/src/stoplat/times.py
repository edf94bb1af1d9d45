"""Random times, real random variables, and the stopping/optional predicates.

A RandomTime maps outcomes to [0, inf] with exact rational finite values; a
RealRV maps outcomes to exact rationals.  The stopping predicate asks that
every level set [T <= t] be measurable at time t; the optional predicate asks
the same of the strict level sets [T < t].  Both quantify over all real t,
which is decided exactly by a finite check-point sweep: the level sets and
the filtration are step functions whose discontinuities lie in the finite set
of time values and breakpoints, so each point of that set plus one interior
witness per gap (and one past the last point) settles every t.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import SpaceMismatchError
from .extended import (
    INF,
    ExtTime,
    Infinity,
    ext_add,
    ext_scale,
    fmt,
    is_finite,
)
from .space import Filtration, Partition, SampleSpace, _require_same_space


def _as_time_value(v) -> ExtTime:
    if isinstance(v, Infinity):
        return INF
    v = Fraction(v)
    if v < 0:
        raise ValueError(f"time values must be nonnegative, got {v}")
    return v


@dataclass(frozen=True)
class RandomTime:
    """Map from outcomes to [0, inf], ordered by the sample-space labels."""

    space: SampleSpace
    values: tuple[ExtTime, ...]

    def __post_init__(self):
        values = tuple(_as_time_value(v) for v in self.values)
        if len(values) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} values, got {len(values)}"
            )
        object.__setattr__(self, "values", values)

    @staticmethod
    def constant(space: SampleSpace, v) -> "RandomTime":
        return RandomTime(space, (v,) * space.size)

    @property
    def is_finite(self) -> bool:
        return all(is_finite(v) for v in self.values)

    def finite_values(self) -> tuple[Fraction, ...]:
        """Distinct finite values, ascending."""
        return tuple(sorted({v for v in self.values if is_finite(v)}))

    def level_at_most(self, t: Fraction) -> frozenset[int]:
        """[T <= t]"""
        return frozenset(w for w, v in enumerate(self.values) if v <= t)

    def level_below(self, t: Fraction) -> frozenset[int]:
        """[T < t]"""
        return frozenset(w for w, v in enumerate(self.values) if v < t)

    def as_real_rv(self) -> "RealRV":
        if not self.is_finite:
            raise ValueError("infinite value cannot embed into a real r.v.")
        return RealRV(self.space, self.values)

    def __str__(self):
        return "(" + ", ".join(fmt(v) for v in self.values) + ")"


@dataclass(frozen=True)
class RealRV:
    """Map from outcomes to finite exact rationals."""

    space: SampleSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} values, got {len(values)}"
            )
        object.__setattr__(self, "values", values)

    @staticmethod
    def constant(space: SampleSpace, v) -> "RealRV":
        return RealRV(space, (Fraction(v),) * space.size)

    def as_random_time(self) -> RandomTime:
        if any(v < 0 for v in self.values):
            raise ValueError("negative value cannot embed into a random time")
        return RandomTime(self.space, self.values)

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


class OrderKind(Enum):
    POINTWISE = "pointwise"
    CONE = "cone"


# ---------------------------------------------------------------------------
# Stopping / optional predicates


def check_points(time: RandomTime, filtration: Filtration) -> list[Fraction]:
    """0, the finite values of the time, and the breakpoints, ascending."""
    pts = {Fraction(0)}
    pts.update(time.finite_values())
    pts.update(filtration.breakpoints)
    return sorted(pts)


def is_stopping_time(time: RandomTime, filtration: Filtration) -> bool:
    """True iff [T <= t] is measurable at t for every t >= 0.

    The level sets are right-continuous and the filtration only grows inside
    each gap between check points, so the point checks alone decide all t.
    """
    _require_same_space(time, filtration)
    for c in check_points(time, filtration):
        if not filtration.at(c).is_measurable(time.level_at_most(c)):
            return False
    return True


def is_optional_time(time: RandomTime, filtration: Filtration) -> bool:
    """True iff [T < t] is measurable at t for every t >= 0.

    The strict level sets are left-continuous, so each gap (c, c') carries the
    set [T <= c] against the partition just after c; one midpoint witness per
    gap plus one witness past the last check point decides all t.
    """
    _require_same_space(time, filtration)
    pts = check_points(time, filtration)
    for c in pts:
        if not filtration.at(c).is_measurable(time.level_below(c)):
            return False
    for c, c_next in zip(pts, pts[1:]):
        mid = (c + c_next) / 2
        if not filtration.at(mid).is_measurable(time.level_at_most(c)):
            return False
    last = pts[-1]
    return filtration.at(last + 1).is_measurable(time.level_at_most(last))


@dataclass(frozen=True)
class LevelCheck:
    """One measurability check performed by a predicate sweep.

    The set is [T <= level] (kind "at-most") or [T < level] (kind "below");
    it is tested against the partition in effect at time `at`.  Point checks
    have at == level; interval witnesses evaluate a level set strictly inside
    the gap after the level.
    """

    level: Fraction
    at: Fraction
    kind: str  # "at-most" or "below"
    outcomes: frozenset[int]
    ok: bool


def predicate_transcript(
    time: RandomTime, filtration: Filtration, optional_mode: bool = False
) -> tuple[LevelCheck, ...]:
    """Full record of the check-point sweep behind the predicate.

    all(c.ok) reproduces is_stopping_time / is_optional_time exactly.
    """
    _require_same_space(time, filtration)
    pts = check_points(time, filtration)
    checks = []
    if not optional_mode:
        for c in pts:
            a = time.level_at_most(c)
            checks.append(
                LevelCheck(c, c, "at-most", a, filtration.at(c).is_measurable(a))
            )
    else:
        for c in pts:
            a = time.level_below(c)
            checks.append(
                LevelCheck(c, c, "below", a, filtration.at(c).is_measurable(a))
            )
        for c, c_next in zip(pts, pts[1:]):
            mid = (c + c_next) / 2
            a = time.level_at_most(c)
            checks.append(
                LevelCheck(c, mid, "at-most", a, filtration.at(mid).is_measurable(a))
            )
        last = pts[-1]
        a = time.level_at_most(last)
        checks.append(
            LevelCheck(
                last, last + 1, "at-most", a, filtration.at(last + 1).is_measurable(a)
            )
        )
    return tuple(checks)


def passes(
    time: RandomTime, filtration: Filtration, optional_mode: bool = False
) -> bool:
    """Mode-dispatching predicate."""
    if optional_mode:
        return is_optional_time(time, filtration)
    return is_stopping_time(time, filtration)


# ---------------------------------------------------------------------------
# Lattice / cone operations on times


def time_meet(s: RandomTime, t: RandomTime) -> RandomTime:
    _require_same_space(s, t)
    return RandomTime(s.space, tuple(min(a, b) for a, b in zip(s.values, t.values)))


def time_join(s: RandomTime, t: RandomTime) -> RandomTime:
    _require_same_space(s, t)
    return RandomTime(s.space, tuple(max(a, b) for a, b in zip(s.values, t.values)))


def time_add(s: RandomTime, t: RandomTime) -> RandomTime:
    _require_same_space(s, t)
    return RandomTime(
        s.space, tuple(ext_add(a, b) for a, b in zip(s.values, t.values))
    )


def time_scale(lam, t: RandomTime) -> RandomTime:
    """lam * T for rational lam > 0; lam = 0 is allowed on finite times only."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("only nonnegative scalars keep a time nonnegative")
    if lam == 0 and not t.is_finite:
        raise ValueError("0 * inf is undefined; zero scale needs a finite time")
    return RandomTime(t.space, tuple(ext_scale(lam, v) for v in t.values))


def truncate(t: RandomTime, n: int) -> RandomTime:
    """Cut T off at level n: T where T <= n, n elsewhere. Requires n >= 1."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("truncation level must be a positive integer")
    level = Fraction(n)
    return RandomTime(t.space, tuple(v if v <= level else level for v in t.values))


# ---------------------------------------------------------------------------
# Vector/lattice operations on real random variables


def pos_part(s: RealRV) -> RealRV:
    return RealRV(s.space, tuple(max(v, Fraction(0)) for v in s.values))


def neg_part(s: RealRV) -> RealRV:
    return RealRV(s.space, tuple(max(-v, Fraction(0)) for v in s.values))


def rv_meet(s: RealRV, t: RealRV) -> RealRV:
    _require_same_space(s, t)
    return RealRV(s.space, tuple(min(a, b) for a, b in zip(s.values, t.values)))


def rv_join(s: RealRV, t: RealRV) -> RealRV:
    _require_same_space(s, t)
    return RealRV(s.space, tuple(max(a, b) for a, b in zip(s.values, t.values)))


def rv_add(s: RealRV, t: RealRV) -> RealRV:
    _require_same_space(s, t)
    return RealRV(s.space, tuple(a + b for a, b in zip(s.values, t.values)))


def rv_sub(s: RealRV, t: RealRV) -> RealRV:
    _require_same_space(s, t)
    return RealRV(s.space, tuple(a - b for a, b in zip(s.values, t.values)))


def rv_scale(alpha, s: RealRV) -> RealRV:
    alpha = Fraction(alpha)
    return RealRV(s.space, tuple(alpha * v for v in s.values))


def is_member_x(
    s: RealRV, filtration: Filtration, optional_mode: bool = False
) -> bool:
    """Two-sided membership test: both the positive and the negative part,
    read as random times, must satisfy the (stopping or optional) predicate.
    """
    _require_same_space(s, filtration)
    return passes(
        pos_part(s).as_random_time(), filtration, optional_mode
    ) and passes(neg_part(s).as_random_time(), filtration, optional_mode)


# ---------------------------------------------------------------------------
# Orderings


def leq(
    s: RandomTime,
    t: RandomTime,
    kind: OrderKind = OrderKind.POINTWISE,
    filtration: Filtration | None = None,
    optional_mode: bool = False,
) -> bool:
    """s <= t in the chosen order.

    Pointwise compares outcome by outcome.  The cone order additionally
    requires the difference t - s to satisfy the predicate, which needs both
    operands finite and a filtration; it is strictly stronger than pointwise.
    """
    _require_same_space(s, t)
    if kind is OrderKind.POINTWISE:
        return all(a <= b for a, b in zip(s.values, t.values))
    if not (s.is_finite and t.is_finite):
        raise ValueError("cone comparison requires finite-valued times")
    if filtration is None:
        raise ValueError("cone comparison requires a filtration")
    diff = [b - a for a, b in zip(s.values, t.values)]
    if any(d < 0 for d in diff):
        return False
    return passes(RandomTime(s.space, tuple(diff)), filtration, optional_mode)
