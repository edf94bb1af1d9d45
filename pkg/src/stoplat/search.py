"""Grid searches over stopping times, each backed by an exhaustive oracle.

Everything here is grid-relative: candidate times take values on a finite
rational grid, searches return Found / NotFoundOnGrid / PreconditionFailed,
and NotFoundOnGrid is never a claim about off-grid values.  Exhaustive
oracles (full enumeration, no pruning) back every search so results can be
cross-checked on capped instances.

The searches prune with a pairwise cut that is exact for step filtrations:
a time passes the stopping predicate iff no two outcomes with values
v < v' share a block of the partition in force at v (for the optional
predicate, of the partition just after v).  Any violating pair keeps the
level set [T <= v] (resp. [T < t] for t slightly above v) non-measurable
no matter how undecided outcomes are filled in, so the cut is sound on
partial assignments and complete on full ones.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Union

from .errors import CapExceededError, PreconditionError
from .space import Boundary, Filtration, Partition, SampleSpace, _require_same_space
from .extended import INF, ExtTime, Infinity, ext_sum, fmt, is_finite
from .times import (
    LevelCheck,
    OrderKind,
    RandomTime,
    leq,
    passes,
    predicate_transcript,
    time_join,
    time_meet,
)


@dataclass(frozen=True)
class Grid:
    """Finite candidate value set {k/q : 0 <= k/q <= max_value} (+ inf)."""

    denominator: int
    max_value: Fraction
    include_inf: bool = False

    def __post_init__(self):
        if not isinstance(self.denominator, int) or self.denominator < 1:
            raise ValueError("grid denominator must be a positive integer")
        mx = Fraction(self.max_value)
        if mx < 0:
            raise ValueError("grid maximum must be nonnegative")
        object.__setattr__(self, "max_value", mx)

    def finite_values(self) -> tuple[Fraction, ...]:
        q = self.denominator
        return tuple(
            Fraction(k, q) for k in range(int(self.max_value * q) + 1)
        )

    def values(self) -> tuple[ExtTime, ...]:
        if self.include_inf:
            return self.finite_values() + (INF,)
        return self.finite_values()

    def contains(self, v: ExtTime) -> bool:
        if isinstance(v, Infinity):
            return self.include_inf
        return (
            0 <= v <= self.max_value
            and (v * self.denominator).denominator == 1
        )

    @staticmethod
    def covering(times: Iterable[RandomTime], denominator: int = 4) -> "Grid":
        """Smallest grid of the given denominator holding every input value."""
        mx = Fraction(0)
        inf_seen = False
        held = []
        for t in times:
            for v in t.values:
                held.append(v)
                if isinstance(v, Infinity):
                    inf_seen = True
                elif v > mx:
                    mx = v
        grid = Grid(denominator, mx, inf_seen)
        for v in held:
            if not grid.contains(v):
                raise ValueError(
                    f"value {fmt(v)} is not a multiple of 1/{denominator}"
                )
        return grid

    def label(self) -> str:
        text = f"q={self.denominator} max={fmt(self.max_value)}"
        return text + " inf" if self.include_inf else text


@dataclass(frozen=True)
class StDecomposition:
    """Parts of a decomposition plus their predicate-sweep transcripts."""

    parts: tuple[RandomTime, ...]
    certificates: tuple[tuple[LevelCheck, ...], ...]


@dataclass(frozen=True)
class Found:
    value: Union[StDecomposition, RandomTime]


@dataclass(frozen=True)
class NotFoundOnGrid:
    grid: Grid
    states_explored: int


@dataclass(frozen=True)
class PreconditionFailed:
    reason: str


SearchOutcome = Union[Found, NotFoundOnGrid, PreconditionFailed]


class _PairCut:
    """The pairwise measurability cut described in the module docstring."""

    def __init__(self, filtration: Filtration, optional_mode: bool):
        self.filtration = filtration
        self.optional_mode = optional_mode
        self._cache: dict[Fraction, Partition] = {}

    def _partition(self, level: Fraction) -> Partition:
        p = self._cache.get(level)
        if p is None:
            if self.optional_mode:
                p = self.filtration.at_right(level)
            else:
                p = self.filtration.at(level)
            self._cache[level] = p
        return p

    def ok(self, values: list, w: int) -> bool:
        """Check the newly decided outcome w against all other decided ones."""
        vw = values[w]
        for x, vx in enumerate(values):
            if vx is None or x == w or vx == vw:
                continue
            lo = vw if vw < vx else vx
            p = self._partition(lo)
            if p._block_of[x] == p._block_of[w]:
                return False
        return True

    def all_ok(self, values: list) -> bool:
        return all(
            self.ok(values, w) for w in range(len(values)) if values[w] is not None
        )


# ---------------------------------------------------------------------------
# Oracle substrate


def enumerate_stopping_times(
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
    *,
    max_omega: int = 6,
    max_grid_values: int = 6,
) -> list[RandomTime]:
    """All grid-valued times passing the predicate, lexicographically.

    Brute force over every value vector; capped because the candidate count
    is |grid| ** |omega|.
    """
    m = filtration.space.size
    vals = grid.values()
    if m > max_omega:
        raise CapExceededError(f"{m} outcomes exceeds the cap of {max_omega}")
    if len(vals) > max_grid_values:
        raise CapExceededError(
            f"{len(vals)} grid values exceeds the cap of {max_grid_values}"
        )
    out = []
    for tup in itertools.product(vals, repeat=m):
        t = RandomTime(filtration.space, tup)
        if passes(t, filtration, optional_mode):
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Maximal minorant


def max_stopping_minorant(
    u: RandomTime, filtration: Filtration, optional_mode: bool = False
) -> RandomTime:
    """Pointwise-largest stopping (or optional) time below u.

    Hull lowering to a fixpoint: take the first failing check of the
    predicate sweep, extend its level set to the measurable hull, and lower
    the hull's new outcomes to the level of the set.  Every stopping
    minorant also satisfies the failed inclusion, so no lowering ever cuts
    below one; values strictly decrease inside a fixed finite level set, so
    the sweep terminates, and a fixpoint passes the whole predicate.

    For a failed strict check [T < c] the bound "below c" is rounded down to
    the next level on the instance's value grid; the maximal optional
    minorant takes values in that grid (rounding any optional minorant up to
    the grid preserves optionality), so the rounding loses nothing.
    """
    _require_same_space(u, filtration)
    levels = sorted(
        {Fraction(0), *u.finite_values(), *filtration.breakpoints}
    )
    vals = list(u.values)
    while True:
        t = RandomTime(u.space, tuple(vals))
        bad = next(
            (
                c
                for c in predicate_transcript(t, filtration, optional_mode)
                if not c.ok
            ),
            None,
        )
        if bad is None:
            return t
        hull = filtration.at(bad.at).measurable_hull(bad.outcomes)
        if bad.kind == "at-most":
            bound = bad.level
        else:
            bound = max(v for v in levels if v < bad.level)
        for w in hull - bad.outcomes:
            vals[w] = bound


# ---------------------------------------------------------------------------
# Decomposition search


def verify_decomposition(
    s: RandomTime,
    ts: tuple[RandomTime, ...],
    parts: tuple[RandomTime, ...],
    filtration: Filtration,
    optional_mode: bool = False,
) -> bool:
    """Full re-check: each part passes the predicate, 0 <= part <= bound
    pointwise, and the parts sum to the target exactly."""
    if len(parts) != len(ts):
        return False
    m = s.space.size
    for part, bound in zip(parts, ts):
        if part.space != s.space:
            return False
        if any(part.values[w] > bound.values[w] for w in range(m)):
            return False
        if not passes(part, filtration, optional_mode):
            return False
    return all(
        ext_sum(part.values[w] for part in parts) == s.values[w]
        for w in range(m)
    )


def decompose_stopping(
    s: RandomTime,
    ts: list[RandomTime] | tuple[RandomTime, ...],
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
) -> SearchOutcome:
    """Split a stopping time s <= t1+..+tn into stopping parts s_i <= t_i.

    Depth-first over the first n-1 parts, part by part, outcomes in label
    order, candidate values descending, so the first complete solution
    maximizes S1 lexicographically, then S2, and so on.  The last part is
    forced by the sum wherever the running remainder is exact; once some
    part takes the value inf at an outcome the sum there is inf for good and
    later parts at that outcome become free variables.  Pruning: candidate
    intervals from the running remainder and the remaining capacity, plus
    the pairwise measurability cut on every part including the forced last
    one.
    """
    ts = tuple(ts)
    _require_same_space(s, filtration)
    for t in ts:
        _require_same_space(t, filtration)
    if not ts:
        return PreconditionFailed("need at least one part bound")
    m = s.space.size
    n = len(ts)
    labels = s.space.labels
    if not passes(s, filtration, optional_mode):
        return PreconditionFailed("target fails the predicate")
    for i, t in enumerate(ts):
        if not passes(t, filtration, optional_mode):
            return PreconditionFailed(f"bound {i + 1} fails the predicate")
    for w in range(m):
        if s.values[w] > ext_sum(t.values[w] for t in ts):
            return PreconditionFailed(
                f"target exceeds the sum of bounds at outcome {labels[w]}"
            )
    for name, t in [("target", s)] + [
        (f"bound {i + 1}", t) for i, t in enumerate(ts)
    ]:
        for w in range(m):
            if not grid.contains(t.values[w]):
                return PreconditionFailed(
                    f"{name} value {fmt(t.values[w])} at outcome {labels[w]} "
                    "is off the grid"
                )

    fin_desc = tuple(reversed(grid.finite_values()))
    cut = _PairCut(filtration, optional_mode)
    parts_vals: list[list[ExtTime | None]] = [[None] * m for _ in range(n)]
    rem: list[ExtTime] = list(s.values)
    free = [False] * m
    explored = 0

    def candidates(i: int, w: int) -> list[ExtTime]:
        cap = ts[i].values[w]
        out: list[ExtTime] = []
        if free[w]:
            if grid.include_inf and isinstance(cap, Infinity):
                out.append(INF)
            out.extend(v for v in fin_desc if v <= cap)
            return out
        r = rem[w]
        future = ext_sum(ts[j].values[w] for j in range(i + 1, n))
        if isinstance(r, Infinity):
            if grid.include_inf and isinstance(cap, Infinity):
                out.append(INF)
            if grid.include_inf and isinstance(future, Infinity):
                out.extend(v for v in fin_desc if v <= cap)
            return out
        for v in fin_desc:
            if v <= cap and v <= r and r - v <= future:
                out.append(v)
        return out

    def build_solution(last: list[ExtTime | None]) -> StDecomposition:
        rows = parts_vals[: n - 1] + [last]
        parts = tuple(RandomTime(s.space, tuple(pv)) for pv in rows)
        if not verify_decomposition(s, ts, parts, filtration, optional_mode):
            raise RuntimeError("internal error: invalid decomposition found")
        certs = tuple(
            predicate_transcript(part, filtration, optional_mode)
            for part in parts
        )
        return StDecomposition(parts, certs)

    def finish_implied() -> StDecomposition | None:
        nonlocal explored
        # work on a copy so explicit-level backtracking state stays intact
        last: list[ExtTime | None] = list(parts_vals[n - 1])
        for w in range(m):
            if last[w] is None and not free[w]:
                last[w] = rem[w]
                if not cut.ok(last, w):
                    return None
        free_ws = [w for w in range(m) if last[w] is None]

        def dfs_free(k: int) -> StDecomposition | None:
            nonlocal explored
            if k == len(free_ws):
                return build_solution(last)
            w = free_ws[k]
            cap = ts[n - 1].values[w]
            cands: list[ExtTime] = []
            if grid.include_inf and isinstance(cap, Infinity):
                cands.append(INF)
            cands.extend(v for v in fin_desc if v <= cap)
            for v in cands:
                explored += 1
                last[w] = v
                if cut.ok(last, w):
                    sol = dfs_free(k + 1)
                    if sol is not None:
                        return sol
                last[w] = None
            return None

        return dfs_free(0)

    def dfs(i: int, w: int) -> StDecomposition | None:
        nonlocal explored
        if i == n - 1:
            return finish_implied()
        if w == m:
            return dfs(i + 1, 0)
        for v in candidates(i, w):
            explored += 1
            old = (rem[w], free[w])
            parts_vals[i][w] = v
            if isinstance(v, Infinity):
                free[w] = True
            elif not free[w] and not isinstance(rem[w], Infinity):
                rem[w] = rem[w] - v
            ok = cut.ok(parts_vals[i], w)
            pinned = False
            if ok and i == n - 2 and not free[w]:
                parts_vals[n - 1][w] = rem[w]
                pinned = True
                ok = cut.ok(parts_vals[n - 1], w)
            if ok:
                sol = dfs(i, w + 1)
                if sol is not None:
                    return sol
            if pinned:
                parts_vals[n - 1][w] = None
            parts_vals[i][w] = None
            rem[w], free[w] = old
        return None

    solution = dfs(0, 0)
    if solution is None:
        return NotFoundOnGrid(grid, explored)
    return Found(solution)


def oracle_decompose(
    s: RandomTime,
    ts: list[RandomTime] | tuple[RandomTime, ...],
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
    *,
    cap: int = 500_000,
) -> tuple[tuple[RandomTime, ...] | None, int, str]:
    """Exhaustive reference for decompose_stopping.

    Enumerates every grid assignment of the first n-1 parts (no pruning, no
    ordering tricks), solves the last part from the sum, keeps all valid
    decompositions, and selects the lexicographically maximal one.  Returns
    (parts or None, candidates explored, digest of the candidate log).
    """
    ts = tuple(ts)
    space = s.space
    m, n = space.size, len(ts)
    vals_all = grid.values()
    per_var = [
        [[v for v in vals_all if v <= ts[i].values[w]] for w in range(m)]
        for i in range(n)
    ]
    count = 1
    for i in range(n - 1):
        for w in range(m):
            count *= len(per_var[i][w])
    if count > cap:
        raise CapExceededError(f"{count} oracle candidates exceeds cap {cap}")

    def show(tup: tuple[ExtTime, ...]) -> str:
        return ",".join(fmt(v) for v in tup)

    lines: list[str] = []
    valid: list[tuple[tuple[ExtTime, ...], ...]] = []
    explored = 0
    explicit_axes = [per_var[i][w] for i in range(n - 1) for w in range(m)]
    for flat in itertools.product(*explicit_axes):
        explored += 1
        combo = tuple(
            tuple(flat[i * m + w] for w in range(m)) for i in range(n - 1)
        )
        tag = "|".join(show(p) for p in combo)
        opts_per_w: list[list[ExtTime]] = []
        feasible = True
        for w in range(m):
            sv = s.values[w]
            assigned = [combo[i][w] for i in range(n - 1)]
            if any(isinstance(a, Infinity) for a in assigned):
                if not isinstance(sv, Infinity):
                    feasible = False
                    break
                opts = list(per_var[n - 1][w])
            elif isinstance(sv, Infinity):
                opts = (
                    [INF]
                    if grid.include_inf
                    and isinstance(ts[n - 1].values[w], Infinity)
                    else []
                )
            else:
                needed = sv - sum(assigned, Fraction(0))
                opts = (
                    [needed]
                    if needed >= 0
                    and grid.contains(needed)
                    and needed <= ts[n - 1].values[w]
                    else []
                )
            if not opts:
                feasible = False
                break
            opts_per_w.append(opts)
        if not feasible:
            lines.append(f"cand {tag} none")
            continue
        for last_tup in itertools.product(*opts_per_w):
            parts_vals = combo + (last_tup,)
            times = [RandomTime(space, p) for p in parts_vals]
            ok = all(passes(t, filtration, optional_mode) for t in times)
            lines.append(
                f"cand {tag}|{show(last_tup)} " + ("ok" if ok else "no")
            )
            if ok:
                valid.append(parts_vals)
    digest = _digest(lines)
    if not valid:
        return None, explored, digest
    best = max(valid)
    return tuple(RandomTime(space, p) for p in best), explored, digest


# ---------------------------------------------------------------------------
# Interpolation


def interpolate_pointwise(
    lower: Iterable[RandomTime],
    upper: Iterable[RandomTime],
    filtration: Filtration,
    optional_mode: bool = False,
) -> RandomTime:
    """Interpolant in the pointwise order: the join of the lower family.

    Never fails when the preconditions hold; the join of stopping times is a
    stopping time, lies above the lower family by construction, and below
    the upper family pointwise.
    """
    lower, upper = tuple(lower), tuple(upper)
    if not lower or not upper:
        raise PreconditionError("both families must be nonempty")
    for t in (*lower, *upper):
        _require_same_space(t, filtration)
        if not passes(t, filtration, optional_mode):
            raise PreconditionError("family member fails the predicate")
    labels = lower[0].space.labels
    for i, a in enumerate(lower):
        for j, b in enumerate(upper):
            for w in range(a.space.size):
                if a.values[w] > b.values[w]:
                    raise PreconditionError(
                        f"lower[{i}] exceeds upper[{j}] at outcome {labels[w]}"
                    )
    result = reduce(time_join, lower)
    if not passes(result, filtration, optional_mode):
        raise RuntimeError(
            "internal error: join of the lower family failed the predicate"
        )
    return result


def interpolate_cone(
    lower: Iterable[RandomTime],
    upper: Iterable[RandomTime],
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
) -> SearchOutcome:
    """Interpolant in the cone order: minimal grid-valued T with a <= T <= b
    in the cone sense for all a, b.

    Ascending depth-first scan over the per-outcome boxes; the first valid
    assignment is the lexicographic minimum, and the valid set is closed
    under pointwise meet, so that minimum is the pointwise-minimal solution.
    """
    lower, upper = tuple(lower), tuple(upper)
    for t in (*lower, *upper):
        _require_same_space(t, filtration)
    if not lower or not upper:
        return PreconditionFailed("both families must be nonempty")
    for t in (*lower, *upper):
        if not t.is_finite:
            return PreconditionFailed(
                "cone interpolation requires finite-valued times"
            )
        if not passes(t, filtration, optional_mode):
            return PreconditionFailed("family member fails the predicate")
    for i, a in enumerate(lower):
        for j, b in enumerate(upper):
            if not leq(a, b, OrderKind.CONE, filtration, optional_mode):
                return PreconditionFailed(
                    f"cone order violated: lower[{i}] does not precede "
                    f"upper[{j}]"
                )
    space = lower[0].space
    m = space.size
    lo = [max(a.values[w] for a in lower) for w in range(m)]
    hi = [min(b.values[w] for b in upper) for w in range(m)]
    cands = [
        [v for v in grid.finite_values() if lo[w] <= v <= hi[w]]
        for w in range(m)
    ]
    cut = _PairCut(filtration, optional_mode)
    vals: list[Fraction | None] = [None] * m
    explored = 0

    def valid_leaf() -> bool:
        t = RandomTime(space, tuple(vals))
        if not passes(t, filtration, optional_mode):
            return False
        for a in lower:
            if not leq(a, t, OrderKind.CONE, filtration, optional_mode):
                return False
        return all(
            leq(t, b, OrderKind.CONE, filtration, optional_mode) for b in upper
        )

    def dfs(w: int) -> RandomTime | None:
        nonlocal explored
        if w == m:
            if valid_leaf():
                return RandomTime(space, tuple(vals))
            return None
        for v in cands[w]:
            explored += 1
            vals[w] = v
            if cut.ok(vals, w):
                r = dfs(w + 1)
                if r is not None:
                    return r
            vals[w] = None
        return None

    result = dfs(0)
    if result is None:
        return NotFoundOnGrid(grid, explored)
    return Found(result)


def oracle_min_cone_interpolant(
    lower: Iterable[RandomTime],
    upper: Iterable[RandomTime],
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
    *,
    cap: int = 500_000,
) -> tuple[RandomTime | None, int, str]:
    """Exhaustive reference for interpolate_cone: test every finite grid
    vector, collect all valid interpolants, return their pointwise meet.
    Returns (minimum or None, candidates explored, digest)."""
    lower, upper = tuple(lower), tuple(upper)
    space = lower[0].space
    m = space.size
    fin = grid.finite_values()
    if len(fin) ** m > cap:
        raise CapExceededError(
            f"{len(fin) ** m} oracle candidates exceeds cap {cap}"
        )
    lines: list[str] = []
    valid: list[RandomTime] = []
    explored = 0
    for tup in itertools.product(fin, repeat=m):
        explored += 1
        t = RandomTime(space, tup)
        ok = passes(t, filtration, optional_mode)
        ok = ok and all(
            leq(a, t, OrderKind.CONE, filtration, optional_mode) for a in lower
        )
        ok = ok and all(
            leq(t, b, OrderKind.CONE, filtration, optional_mode) for b in upper
        )
        lines.append(
            "cand " + ",".join(fmt(v) for v in tup) + (" ok" if ok else " no")
        )
        if ok:
            valid.append(t)
    digest = _digest(lines)
    if not valid:
        return None, explored, digest
    minimum = reduce(time_meet, valid)
    if minimum.values not in {t.values for t in valid}:
        raise RuntimeError(
            "internal error: valid cone interpolants are not meet-closed"
        )
    return minimum, explored, digest


def oracle_max_minorant(
    u: RandomTime,
    filtration: Filtration,
    grid: Grid,
    optional_mode: bool = False,
    *,
    cap: int = 500_000,
) -> RandomTime:
    """Exhaustive reference for max_stopping_minorant on grid instances:
    the join of every enumerated time lying below u."""
    m = u.space.size
    count = len(grid.values()) ** m
    if count > cap:
        raise CapExceededError(f"{count} oracle candidates exceeds cap {cap}")
    cands = [
        t
        for t in enumerate_stopping_times(
            filtration,
            grid,
            optional_mode,
            max_omega=m,
            max_grid_values=len(grid.values()),
        )
        if all(tv <= uv for tv, uv in zip(t.values, u.values))
    ]
    best = reduce(time_join, cands)
    if best.values not in {t.values for t in cands}:
        raise RuntimeError(
            "internal error: stopping times below u are not join-closed"
        )
    return best


# ---------------------------------------------------------------------------
# Exhaustive instance sweeps


def all_partitions(space: SampleSpace) -> list[Partition]:
    """Every partition of the space, in restricted-growth order."""
    out: list[Partition] = []
    blocks: list[list[int]] = []

    def rec(w: int) -> None:
        if w == space.size:
            out.append(
                Partition(space, tuple(tuple(b) for b in blocks))
            )
            return
        for b in blocks:
            b.append(w)
            rec(w + 1)
            b.pop()
        blocks.append([w])
        rec(w + 1)
        blocks.pop()

    rec(0)
    return out


def all_filtrations(
    space: SampleSpace,
    breakpoint_times: Iterable[Fraction] = (Fraction(1), Fraction(2)),
) -> list[Filtration]:
    """Every step filtration whose breakpoints form a subset of the given
    times, with strictly refining steps and all boundary-flag combinations.

    Chains with a repeated partition are skipped: they define the same
    partition-valued step function as a shorter chain.
    """
    parts = all_partitions(space)
    times = sorted(Fraction(u) for u in breakpoint_times)

    def chains(last: Partition, k: int) -> Iterator[list[Partition]]:
        if k == 0:
            yield []
            return
        for q in parts:
            if q != last and q.refines(last):
                for rest in chains(q, k - 1):
                    yield [q] + rest

    both = (Boundary.INCLUSIVE, Boundary.EXCLUSIVE)
    out = []
    for k in range(len(times) + 1):
        for combo in itertools.combinations(times, k):
            for p0 in parts:
                for chain in chains(p0, k):
                    for flags in itertools.product(both, repeat=k):
                        entries = [(Fraction(0), p0, Boundary.INCLUSIVE)]
                        entries.extend(zip(combo, chain, flags))
                        out.append(Filtration(space, tuple(entries)))
    return out


def _digest(lines: Iterable[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()
