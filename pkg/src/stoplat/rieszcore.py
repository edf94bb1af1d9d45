"""Classical Riesz-space computations on plain random variables.

These hold unconditionally in the pointwise lattice of real-valued functions
on a finite space: a nonnegative function dominated by a finite sum of
nonnegative functions splits greedily along the list, and any finite family
bounded above by another admits the pointwise join as an interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import PreconditionError
from .space import _require_same_space
from .times import RealRV, rv_join, rv_meet, rv_sub


@dataclass(frozen=True)
class RVDecomposition:
    """A split target = sum(parts) with 0 <= parts[i] <= bounds[i]."""

    target: RealRV
    bounds: tuple[RealRV, ...]
    parts: tuple[RealRV, ...]

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(self.bounds))
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) != len(self.bounds):
            raise ValueError("one part per bound required")
        m = self.target.space.size
        sums = [Fraction(0)] * m
        for part, bound in zip(self.parts, self.bounds):
            _require_same_space(part, self.target)
            for w in range(m):
                if not 0 <= part.values[w] <= bound.values[w]:
                    raise ValueError(
                        f"part out of bounds at outcome {self.target.space.labels[w]}"
                    )
                sums[w] += part.values[w]
        if tuple(sums) != self.target.values:
            raise ValueError("parts do not sum to the target")


def rv_decompose(x: RealRV, ys: list[RealRV] | tuple[RealRV, ...]) -> RVDecomposition:
    """Split 0 <= x <= y1+..+yn into parts 0 <= x_i <= y_i summing to x.

    Greedy in list order: each part takes as much of the remainder as its
    bound allows; the tail of the budget guarantees the remainder fits.
    """
    ys = tuple(ys)
    if not ys:
        raise PreconditionError("need at least one bound")
    space = x.space
    for y in ys:
        _require_same_space(y, x)
    for w in range(space.size):
        if x.values[w] < 0:
            raise PreconditionError(
                f"target negative at outcome {space.labels[w]}"
            )
        if any(y.values[w] < 0 for y in ys):
            raise PreconditionError(
                f"bound negative at outcome {space.labels[w]}"
            )
        if x.values[w] > sum(y.values[w] for y in ys):
            raise PreconditionError(
                f"target exceeds the sum of bounds at outcome {space.labels[w]}"
            )
    parts = []
    rest = x
    for y in ys[:-1]:
        part = rv_meet(rest, y)
        parts.append(part)
        rest = rv_sub(rest, part)
    parts.append(rest)
    return RVDecomposition(x, ys, tuple(parts))


def rv_interpolate(
    a: list[RealRV] | tuple[RealRV, ...], b: list[RealRV] | tuple[RealRV, ...]
) -> RealRV:
    """Least z with a <= z <= b pointwise for finite nonempty families.

    Returns the pointwise join of the lower family; the precondition check
    names a violating pair and outcome.
    """
    a, b = tuple(a), tuple(b)
    if not a or not b:
        raise PreconditionError("both families must be nonempty")
    for lo in a:
        _require_same_space(lo, a[0])
    for hi in b:
        _require_same_space(hi, a[0])
        for i, lo in enumerate(a):
            for w in range(lo.space.size):
                if lo.values[w] > hi.values[w]:
                    raise PreconditionError(
                        f"lower element {i} exceeds an upper element at "
                        f"outcome {lo.space.labels[w]}"
                    )
    return reduce(rv_join, a)
