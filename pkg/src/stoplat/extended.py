"""Exact time values: nonnegative rationals extended with a single infinity.

All times in this package are `fractions.Fraction` or the sentinel `INF`.
Floats are never used; the arithmetic conventions on [0, inf] are
  inf + x = inf,   lam * inf = inf for lam > 0,
while inf - inf and 0 * inf are rejected rather than defined.
"""

from __future__ import annotations

import re
from fractions import Fraction


class Infinity:
    """Order-maximal sentinel for extended times. Use the singleton INF."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinity)

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash(("stoplat", "inf"))

    def __repr__(self):
        return "inf"


INF = Infinity()

ExtTime = Fraction | Infinity


def is_finite(v: ExtTime) -> bool:
    return not isinstance(v, Infinity)


def ext_add(a: ExtTime, b: ExtTime) -> ExtTime:
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        return INF
    return a + b


def ext_sum(values) -> ExtTime:
    total = Fraction(0)
    for v in values:
        if isinstance(v, Infinity):
            return INF
        total += v
    return total


def ext_scale(lam: Fraction, v: ExtTime) -> ExtTime:
    """lam * v on [0, inf]. Requires lam >= 0; 0 * inf is rejected."""
    if lam < 0:
        raise ValueError("scaling factor must be nonnegative")
    if isinstance(v, Infinity):
        if lam == 0:
            raise ValueError("0 * inf is undefined")
        return INF
    return lam * v


def ext_sub(a: ExtTime, b: ExtTime) -> Fraction:
    """a - b, defined for finite operands only."""
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        raise ValueError("subtraction requires finite values")
    return a - b


def fmt(v: ExtTime) -> str:
    """Exact text form: integers as-is, other rationals as p/q, INF as 'inf'."""
    if isinstance(v, Infinity):
        return "inf"
    return str(v)


_RATIONAL = re.compile(r"[+-]?[0-9]+(/[0-9]+)?$")


def parse_rational(token: str) -> Fraction:
    """Parse a signed exact rational ('3', '-1/2'). Raises ValueError."""
    if not _RATIONAL.match(token):
        raise ValueError(f"malformed rational {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"malformed rational {token!r}") from None


def parse_time_value(token: str) -> ExtTime:
    """Parse a time value: nonnegative rational or 'inf'."""
    if token == "inf":
        return INF
    v = parse_rational(token)
    if v < 0:
        raise ValueError(f"time value must be nonnegative, got {token!r}")
    return v
