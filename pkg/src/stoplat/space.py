"""Finite sample spaces, sigma-algebras as partitions, and step filtrations.

A sigma-algebra on a finite space is determined by its atoms, so it is stored
as a Partition; a set is measurable iff it is a union of blocks.  A Filtration
is a step function of partitions over exact rational breakpoints; a boundary
flag per breakpoint says whether the new partition takes effect at the
breakpoint itself (inclusive) or only strictly after it (exclusive).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import SpaceMismatchError
from .extended import INF, ExtTime, Infinity


@dataclass(frozen=True)
class SampleSpace:
    """Ordered finite set of distinct outcome labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("sample space needs at least one outcome")
        if any(not isinstance(lab, str) or not lab for lab in self.labels):
            raise ValueError("outcome labels must be nonempty strings")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("outcome labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown outcome {label!r}") from None

    def outcomes(self) -> range:
        return range(self.size)


def _require_same_space(a, b) -> None:
    if a.space != b.space:
        raise SpaceMismatchError(
            f"mismatched sample spaces: {a.space.labels} vs {b.space.labels}"
        )


@dataclass(frozen=True)
class Partition:
    """A partition of the sample space into nonempty atoms.

    Canonical form: every block is a sorted tuple of outcome indices and
    blocks are ordered by their least index.  The constructor validates
    canonicity, so any two equal partitions compare equal structurally.
    """

    space: SampleSpace
    blocks: tuple[tuple[int, ...], ...]
    _block_of: tuple[int, ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self):
        seen = [-1] * self.space.size
        for bi, block in enumerate(self.blocks):
            if not block:
                raise ValueError("empty block")
            if tuple(sorted(block)) != tuple(block):
                raise ValueError("block not sorted; use Partition.from_blocks")
            for w in block:
                if not 0 <= w < self.space.size:
                    raise ValueError(f"outcome index {w} out of range")
                if seen[w] != -1:
                    raise ValueError(f"outcome index {w} appears in two blocks")
                seen[w] = bi
        if any(bi == -1 for bi in seen):
            raise ValueError("blocks do not cover the sample space")
        firsts = [block[0] for block in self.blocks]
        if firsts != sorted(firsts):
            raise ValueError("blocks not in canonical order; use Partition.from_blocks")
        object.__setattr__(self, "_block_of", tuple(seen))

    @staticmethod
    def from_blocks(space: SampleSpace, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Canonicalize and validate arbitrary block order."""
        canon = sorted(tuple(sorted(set(b))) for b in blocks)
        return Partition(space, tuple(canon))

    @staticmethod
    def from_labels(space: SampleSpace, blocks: Iterable[Iterable[str]]) -> "Partition":
        return Partition.from_blocks(
            space, [[space.index(lab) for lab in b] for b in blocks]
        )

    @staticmethod
    def trivial(space: SampleSpace) -> "Partition":
        return Partition(space, (tuple(space.outcomes()),))

    @staticmethod
    def discrete(space: SampleSpace) -> "Partition":
        return Partition(space, tuple((w,) for w in space.outcomes()))

    def block_containing(self, outcome: int) -> tuple[int, ...]:
        return self.blocks[self._block_of[outcome]]

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self lies inside some block of other."""
        _require_same_space(self, other)
        return all(
            {other._block_of[w] for w in block} == {other._block_of[block[0]]}
            for block in self.blocks
        )

    def is_measurable(self, outcomes: Iterable[int]) -> bool:
        """True iff the set is a union of blocks."""
        a = set(outcomes)
        touched = {self._block_of[w] for w in a}
        return sum(len(self.blocks[bi]) for bi in touched) == len(a)

    def measurable_hull(self, outcomes: Iterable[int]) -> frozenset[int]:
        """Smallest measurable superset: the union of all blocks met."""
        touched = {self._block_of[w] for w in outcomes}
        return frozenset(w for bi in touched for w in self.blocks[bi])

    def join(self, other: "Partition") -> "Partition":
        """Common refinement: nonempty blockwise intersections."""
        _require_same_space(self, other)
        pieces = []
        for b in self.blocks:
            for c in other.blocks:
                piece = [w for w in b if w in c]
                if piece:
                    pieces.append(piece)
        return Partition.from_blocks(self.space, pieces)

    def meet(self, other: "Partition") -> "Partition":
        """Finest common coarsening: components of the block-overlap graph."""
        _require_same_space(self, other)
        parent = list(range(self.space.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for block in itertools.chain(self.blocks, other.blocks):
            for w in block[1:]:
                union(block[0], w)
        groups: dict[int, list[int]] = {}
        for w in self.space.outcomes():
            groups.setdefault(find(w), []).append(w)
        return Partition.from_blocks(self.space, groups.values())


def generated_partition(
    space: SampleSpace, sets: Iterable[Iterable[int]]
) -> Partition:
    """Atoms of the sigma-algebra generated by the given sets.

    Two outcomes land in the same atom iff they belong to exactly the same
    input sets (equal indicator fingerprints).
    """
    frozen = [frozenset(s) for s in sets]
    for s in frozen:
        for w in s:
            if not 0 <= w < space.size:
                raise ValueError(f"outcome index {w} out of range")
    groups: dict[tuple[bool, ...], list[int]] = {}
    for w in space.outcomes():
        fingerprint = tuple(w in s for s in frozen)
        groups.setdefault(fingerprint, []).append(w)
    return Partition.from_blocks(space, groups.values())


class Boundary(Enum):
    INCLUSIVE = "inclusive"
    EXCLUSIVE = "exclusive"


@dataclass(frozen=True)
class Filtration:
    """Increasing step function of partitions on [0, inf].

    entries are (u, partition, boundary) with strictly increasing rational u,
    the first entry pinned to (0, P0, inclusive), and each later partition
    refining its predecessor.  With inclusive boundaries the step function is
    right-continuous; an exclusive boundary at u delays the new partition to
    times strictly greater than u.
    """

    space: SampleSpace
    entries: tuple[tuple[Fraction, Partition, Boundary], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("filtration needs an entry at time 0")
        norm = []
        for u, part, boundary in self.entries:
            u = Fraction(u)
            if u < 0:
                raise ValueError("breakpoints must be nonnegative")
            if part.space != self.space:
                raise SpaceMismatchError("partition over a different sample space")
            if not isinstance(boundary, Boundary):
                raise ValueError(f"bad boundary flag {boundary!r}")
            norm.append((u, part, boundary))
        if norm[0][0] != 0 or norm[0][2] is not Boundary.INCLUSIVE:
            raise ValueError("first entry must be (0, P0, inclusive)")
        for (u0, p0, _), (u1, p1, _) in zip(norm, norm[1:]):
            if u1 <= u0:
                raise ValueError("breakpoints not increasing")
            if not p1.refines(p0):
                raise ValueError("non-refining partition chain")
        object.__setattr__(self, "entries", tuple(norm))

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(u for u, _, _ in self.entries)

    def all_inclusive(self) -> bool:
        return all(b is Boundary.INCLUSIVE for _, _, b in self.entries)

    @property
    def final(self) -> Partition:
        """The limit sigma-algebra: join of all steps, i.e. the last partition."""
        return self.entries[-1][1]

    def at(self, t: ExtTime) -> Partition:
        """Partition in effect at time t (t in [0, inf])."""
        if isinstance(t, Infinity):
            return self.final
        if t < 0:
            raise ValueError("time must be nonnegative")
        current = self.entries[0][1]
        for u, part, boundary in self.entries:
            if u < t or (u == t and boundary is Boundary.INCLUSIVE):
                current = part
            else:
                break
        return current

    def at_right(self, t: Fraction) -> Partition:
        """Partition in effect immediately after t (limit from the right)."""
        if t < 0:
            raise ValueError("time must be nonnegative")
        current = self.entries[0][1]
        for u, part, _ in self.entries:
            if u <= t:
                current = part
            else:
                break
        return current
