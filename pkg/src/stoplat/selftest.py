"""Built-in invariant suites runnable from the command line.

Each check exercises one module-level law on small canned inputs and
returns a row (name, ok, detail).  These are smoke tests for installed
copies, not a replacement for the full test suite.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

from .extended import INF, ext_add, ext_scale, ext_sub
from .hunting import HuntConfig, hunt, replay_report
from .instances import emit_instance, parse_instance
from .search import (
    Found,
    Grid,
    decompose_stopping,
    enumerate_stopping_times,
    interpolate_cone,
    max_stopping_minorant,
    oracle_decompose,
    oracle_max_minorant,
    oracle_min_cone_interpolant,
    verify_decomposition,
)
from .space import Boundary, Filtration, Partition, SampleSpace
from .times import (
    RandomTime,
    passes,
    time_add,
    time_join,
    time_meet,
    truncate,
)

Check = tuple[str, bool, str]


def _space3() -> SampleSpace:
    return SampleSpace(("a", "b", "c"))


def _filtration3() -> Filtration:
    space = _space3()
    p0 = Partition.from_labels(space, [["a", "b", "c"]])
    p1 = Partition.from_labels(space, [["a", "b"], ["c"]])
    p2 = Partition.discrete(space)
    return Filtration(
        space,
        (
            (Fraction(0), p0, Boundary.INCLUSIVE),
            (Fraction(1), p1, Boundary.INCLUSIVE),
            (Fraction(2), p2, Boundary.EXCLUSIVE),
        ),
    )


def _check_extended() -> str:
    if ext_add(Fraction(1), INF) is not INF:
        return "finite + inf must be inf"
    if ext_scale(Fraction(2), INF) is not INF:
        return "2 * inf must be inf"
    for bad in (lambda: ext_scale(Fraction(0), INF), lambda: ext_sub(INF, INF)):
        try:
            bad()
        except ValueError:
            continue
        return "undefined extended arithmetic must raise"
    if not (Fraction(10) < INF and INF <= INF and not INF < INF):
        return "extended order is wrong at inf"
    return ""


def _check_partition_lattice() -> str:
    space = _space3()
    parts = [
        Partition.trivial(space),
        Partition.from_labels(space, [["a", "b"], ["c"]]),
        Partition.from_labels(space, [["a", "c"], ["b"]]),
        Partition.discrete(space),
    ]
    # order partitions as the sigma-algebras they generate: finer partition
    # = larger sigma-algebra, and finer means refines per the docstring
    for p in parts:
        for q in parts:
            j = p.join(q)
            m = p.meet(q)
            if not (j.refines(p) and j.refines(q)):
                return f"join not an upper bound for {p} {q}"
            if not (p.refines(m) and q.refines(m)):
                return f"meet not a lower bound for {p} {q}"
            for r in parts:
                if r.refines(p) and r.refines(q) and not r.refines(j):
                    return "join not least"
                if p.refines(r) and q.refines(r) and not m.refines(r):
                    return "meet not greatest"
    hull = parts[1].measurable_hull(frozenset({0}))
    if hull != frozenset({0, 1}):
        return "hull of {a} in {ab|c} must be {a,b}"
    return ""


def _check_predicate_closure() -> str:
    f = _filtration3()
    grid = Grid(1, Fraction(2))
    times = list(enumerate_stopping_times(f, grid))
    if not times:
        return "no passing times on a 3-point space"
    for s in times:
        for t in times:
            for op, name in (
                (time_meet, "meet"),
                (time_join, "join"),
                (time_add, "sum"),
            ):
                if not passes(op(s, t), f):
                    return f"{name} of passing times must pass"
    return ""


def _check_minorant() -> str:
    f = _filtration3()
    grid = Grid(1, Fraction(2))
    u = RandomTime(f.space, (Fraction(2), Fraction(0), Fraction(1)))
    got = max_stopping_minorant(u, f)
    want = oracle_max_minorant(u, f, grid)
    if got.values != want.values:
        return f"minorant {got} disagrees with oracle {want}"
    if not passes(got, f):
        return "minorant must pass the predicate"
    if any(g > uv for g, uv in zip(got.values, u.values)):
        return "minorant must stay below its input"
    return ""


def _check_decompose() -> str:
    f = _filtration3()
    grid = Grid(1, Fraction(2))
    s = RandomTime.constant(f.space, Fraction(2))
    ts = (
        RandomTime.constant(f.space, Fraction(2)),
        RandomTime.constant(f.space, Fraction(1)),
    )
    outcome = decompose_stopping(s, ts, f, grid)
    if not isinstance(outcome, Found):
        return f"expected Found, got {outcome}"
    parts = outcome.value.parts
    if not verify_decomposition(s, ts, parts, f):
        return "found decomposition fails verification"
    best, _, _ = oracle_decompose(s, ts, f, grid)
    if best is None or [p.values for p in parts] != [p.values for p in best]:
        return "search decomposition is not the oracle's canonical one"
    return ""


def _check_cone_interpolation() -> str:
    f = _filtration3()
    grid = Grid(1, Fraction(3))
    lower = [RandomTime.constant(f.space, Fraction(1))]
    upper = [RandomTime.constant(f.space, Fraction(3))]
    outcome = interpolate_cone(lower, upper, f, grid)
    if not isinstance(outcome, Found):
        return f"expected Found, got {outcome}"
    want, _, _ = oracle_min_cone_interpolant(lower, upper, f, grid)
    if want is None or outcome.value.values != want.values:
        return "interpolant is not the oracle minimum"
    return ""


def _check_truncation() -> str:
    f = _filtration3()
    t = RandomTime(f.space, (Fraction(1, 2), INF, Fraction(3)))
    for n in (1, 2, 4):
        cut = truncate(t, n)
        if any(cv > n for cv in cut.values):
            return "truncation must cap at its level"
        if any(cv > tv for cv, tv in zip(cut.values, t.values)):
            return "truncation must not increase values"
    one = truncate(t, 1)
    two = truncate(t, 2)
    if any(a > b for a, b in zip(one.values, two.values)):
        return "truncation must be monotone in the level"
    return ""


def _check_instance_round_trip() -> str:
    text = (
        "omega a b c\n"
        "breakpoint 0 inclusive a,b,c\n"
        "breakpoint 1 exclusive a,b; c\n"
        "time S 1 1 2\n"
        "time T1 1 1 1\n"
        "rv X 1/2 -1 0\n"
        "set A T1\n"
        "role S S\n"
        "role T1 T1\n"
    )
    inst = parse_instance(text)
    emitted = emit_instance(inst)
    if parse_instance(emitted) != inst:
        return "parse(emit(inst)) must equal inst"
    if emit_instance(parse_instance(emitted)) != emitted:
        return "emit must be a canonical form"
    return ""


def _check_hunt_determinism() -> str:
    config = HuntConfig(seed=7, instances=4, max_omega=3)
    first = hunt(config).to_text()
    second = hunt(config).to_text()
    if first != second:
        return "hunt reports must be byte-identical across runs"
    parallel = hunt(HuntConfig(seed=7, instances=4, max_omega=3, jobs=2))
    if parallel.to_text() != first:
        return "hunt reports must not depend on the job count"
    if any(not ok for _, _, ok in replay_report(first)):
        return "flagged instances must replay to their verdicts"
    return ""


_CHECKS = (
    ("extended-arithmetic", _check_extended),
    ("partition-lattice", _check_partition_lattice),
    ("predicate-closure", _check_predicate_closure),
    ("minorant-vs-oracle", _check_minorant),
    ("decompose-vs-oracle", _check_decompose),
    ("cone-interpolation-vs-oracle", _check_cone_interpolation),
    ("truncation-laws", _check_truncation),
    ("instance-round-trip", _check_instance_round_trip),
    ("hunt-determinism", _check_hunt_determinism),
)


def run_selftests() -> list[Check]:
    rows: list[Check] = []
    for name, check in _CHECKS:
        try:
            detail = check()
        except Exception as exc:  # surface, never bury, a broken invariant
            detail = f"raised {exc!r}"
        rows.append((name, not detail, detail))
    return rows
