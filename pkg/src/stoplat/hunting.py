"""Seeded counterexample hunting over random finite filtered spaces.

Each instance is generated from its own stream `Random(f"{seed}:{index}")`,
evaluated against the selected properties, and tallied; failures and
grid-relative not-found verdicts are re-verified (exhaustive oracle or full
transcript evidence) and flagged with the serialized instance plus a digest
of the evidence.  The report is a pure function of (seed, config, version):
instances can be processed in parallel without changing a byte, and every
flagged instance replays to the same verdict from its serialized form.

Properties:
    decompose            target splits into predicate-passing parts on the grid
    cone-interpolation   an interpolant exists between cone-ordered families
    x-closure            differences of passing times stay two-sided members
    truncation           truncating a dominated sum keeps the domination
    optional-agreement   optional and stopping predicates agree when every
                         boundary is inclusive
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from ._version import VERSION
from .errors import CapExceededError
from .extended import fmt
from .instances import Instance, emit_instance, parse_instance
from .search import (
    Found,
    Grid,
    NotFoundOnGrid,
    PreconditionFailed,
    _digest,
    decompose_stopping,
    interpolate_cone,
    max_stopping_minorant,
    oracle_decompose,
    oracle_min_cone_interpolant,
    verify_decomposition,
)
from .space import Boundary, Filtration, Partition, SampleSpace
from .times import (
    OrderKind,
    RandomTime,
    is_member_x,
    is_optional_time,
    is_stopping_time,
    leq,
    neg_part,
    pos_part,
    passes,
    predicate_transcript,
    rv_sub,
    time_add,
    time_join,
    time_meet,
    truncate,
)

PROPERTIES = (
    "decompose",
    "cone-interpolation",
    "x-closure",
    "truncation",
    "optional-agreement",
)

_LETTERS = "abcdef"
_ORACLE_BUDGET = 500_000


@dataclass(frozen=True)
class HuntConfig:
    seed: int = 0
    instances: int = 100
    max_omega: int = 4
    max_breakpoints: int = 3
    grid_denominator: int = 2
    grid_max: Fraction = Fraction(2)
    properties: tuple[str, ...] = PROPERTIES
    optional_mode: bool = False
    jobs: int = 1
    flag_cap: int = 10
    corpus: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "grid_max", Fraction(self.grid_max))
        object.__setattr__(self, "properties", tuple(self.properties))
        object.__setattr__(self, "corpus", tuple(self.corpus))


@dataclass(frozen=True)
class FlaggedInstance:
    index: int
    prop: str
    verdict: str
    digest: str
    content: str


@dataclass(frozen=True)
class HuntReport:
    version: str
    config: HuntConfig
    tallies: dict[str, dict[str, int]]
    flagged: tuple[FlaggedInstance, ...]

    def to_text(self) -> str:
        c = self.config
        lines = [
            "report hunt",
            f"version {self.version}",
            f"seed {c.seed}",
            f"instances {c.instances}",
            f"corpus {len(c.corpus)}",
            f"config max-omega {c.max_omega}"
            f" max-breakpoints {c.max_breakpoints}"
            f" grid-denominator {c.grid_denominator}"
            f" grid-max {fmt(c.grid_max)}"
            f" optional {'true' if c.optional_mode else 'false'}"
            f" flag-cap {c.flag_cap}",
            "properties " + ",".join(c.properties),
        ]
        for prop in c.properties:
            t = self.tallies[prop]
            lines.append(
                f"tally {prop} pass {t['pass']} fail {t['fail']}"
                f" notfound {t['notfound']} skip {t['skip']}"
            )
        lines.append(f"flagged-count {len(self.flagged)}")
        for fl in self.flagged:
            lines.append(
                f"flagged {fl.index} {fl.prop} {fl.verdict} sha256:{fl.digest}"
            )
            lines.append(fl.content.rstrip("\n"))
            lines.append("end")
        return "\n".join(lines) + "\n"


def _validate(config: HuntConfig) -> None:
    if not 2 <= config.max_omega <= len(_LETTERS):
        raise CapExceededError("max_omega must be between 2 and 6")
    if not 0 <= config.max_breakpoints <= 5:
        raise CapExceededError("max_breakpoints must be between 0 and 5")
    if config.instances < 0:
        raise ValueError("instances must be nonnegative")
    if config.jobs < 1:
        raise ValueError("jobs must be positive")
    if config.flag_cap < 0:
        raise ValueError("flag_cap must be nonnegative")
    if not config.properties:
        raise ValueError("no properties selected")
    for prop in config.properties:
        if prop not in PROPERTIES:
            raise ValueError(f"unknown property {prop!r}")
    if len(set(config.properties)) != len(config.properties):
        raise ValueError("duplicate properties")
    grid = Grid(config.grid_denominator, config.grid_max)
    if len(grid.finite_values()) ** config.max_omega > _ORACLE_BUDGET:
        raise CapExceededError("grid too fine for the hunting oracle budget")


# ---------------------------------------------------------------------------
# Deterministic instance generation


def _random_partition(
    rng: random.Random, space: SampleSpace, coarser: Partition | None = None
) -> Partition:
    if coarser is None:
        buckets = rng.randint(1, space.size)
        assign = [rng.randrange(buckets) for _ in space.outcomes()]
        groups: dict[int, list[int]] = {}
        for w, g in enumerate(assign):
            groups.setdefault(g, []).append(w)
        return Partition.from_blocks(space, groups.values())
    blocks: list[tuple[int, ...] | list[int]] = []
    for block in coarser.blocks:
        if len(block) == 1 or rng.random() < 0.4:
            blocks.append(block)
            continue
        split = [rng.randrange(2) for _ in block]
        left = [w for w, side in zip(block, split) if side == 0]
        right = [w for w, side in zip(block, split) if side == 1]
        if left and right:
            blocks.extend((left, right))
        else:
            blocks.append(block)
    return Partition.from_blocks(space, blocks)


def _random_filtration(
    rng: random.Random, space: SampleSpace, grid: Grid, max_breakpoints: int
) -> Filtration:
    positive = [v for v in grid.finite_values() if v > 0]
    k = rng.randint(0, min(max_breakpoints, len(positive)))
    breakpoints = sorted(rng.sample(positive, k))
    part = _random_partition(rng, space)
    entries = [(Fraction(0), part, Boundary.INCLUSIVE)]
    for u in breakpoints:
        part = _random_partition(rng, space, coarser=part)
        flag = rng.choice((Boundary.INCLUSIVE, Boundary.EXCLUSIVE))
        entries.append((u, part, flag))
    return Filtration(space, tuple(entries))


def _random_time(
    rng: random.Random, space: SampleSpace, grid: Grid
) -> RandomTime:
    fin = grid.finite_values()
    return RandomTime(
        space, tuple(rng.choice(fin) for _ in space.outcomes())
    )


def generate_instance(config: HuntConfig, index: int) -> Instance:
    """The instance evaluated at this index, from its own random stream.

    All search inputs are manufactured to satisfy their preconditions:
    bounds and family members are minorant projections (hence pass the
    predicate), the target is a minorant below the bound sum, and the upper
    cone family sits above the join of the lower one by adding projections.
    """
    rng = random.Random(f"{config.seed}:{index}")
    m = rng.randint(2, config.max_omega)
    space = SampleSpace(tuple(_LETTERS[:m]))
    grid = Grid(config.grid_denominator, config.grid_max)
    filtration = _random_filtration(rng, space, grid, config.max_breakpoints)
    om = config.optional_mode
    draws = [_random_time(rng, space, grid) for _ in range(6)]
    t1 = max_stopping_minorant(draws[0], filtration, om)
    t2 = max_stopping_minorant(draws[1], filtration, om)
    s = max_stopping_minorant(
        time_meet(draws[2], time_add(t1, t2)), filtration, om
    )
    base = time_join(t1, t2)
    b1 = time_add(base, max_stopping_minorant(draws[4], filtration, om))
    b2 = time_add(base, max_stopping_minorant(draws[5], filtration, om))
    x = rv_sub(t1.as_real_rv(), t2.as_real_rv())
    return Instance(
        space,
        filtration,
        {"S": s, "T1": t1, "T2": t2, "U": draws[3], "b1": b1, "b2": b2},
        {"X": x},
        {"A": ("T1", "T2"), "B": ("b1", "b2")},
        {"S": "S", "T1": "T1", "T2": "T2"},
    )


# ---------------------------------------------------------------------------
# Property evaluation (shared by hunt and replay)


def eval_property(
    prop: str, inst: Instance, grid_denominator: int, optional_mode: bool
) -> tuple[str, str]:
    """Evaluate one property on one instance.

    Returns (verdict, digest) with verdict one of pass / fail / notfound /
    skip; fail and notfound verdicts carry a digest of the re-verification
    evidence.  Pure function of the arguments.
    """
    f = inst.filtration
    if prop == "decompose":
        if "S" not in inst.roles or not inst.part_roles():
            return "skip", ""
        s = inst.times[inst.roles["S"]]
        ts = tuple(inst.times[inst.roles[r]] for r in inst.part_roles())
        try:
            grid = Grid.covering((s, *ts), grid_denominator)
        except ValueError:
            return "skip", ""
        outcome = decompose_stopping(s, ts, f, grid, optional_mode)
        if isinstance(outcome, PreconditionFailed):
            return "skip", ""
        if isinstance(outcome, Found):
            if not verify_decomposition(
                s, ts, outcome.value.parts, f, optional_mode
            ):
                raise RuntimeError(
                    "internal error: found decomposition fails verification"
                )
            return "pass", ""
        parts, _, digest = oracle_decompose(
            s, ts, f, grid, optional_mode, cap=_ORACLE_BUDGET
        )
        if parts is not None:
            raise RuntimeError(
                "internal error: search missed a decomposition the oracle found"
            )
        return "notfound", digest
    if prop == "cone-interpolation":
        if "A" not in inst.sets or "B" not in inst.sets:
            return "skip", ""
        lower = [inst.times[n] for n in inst.sets["A"]]
        upper = [inst.times[n] for n in inst.sets["B"]]
        try:
            grid = Grid.covering(lower + upper, grid_denominator)
        except ValueError:
            return "skip", ""
        if grid.include_inf:
            return "skip", ""
        outcome = interpolate_cone(lower, upper, f, grid, optional_mode)
        if isinstance(outcome, PreconditionFailed):
            return "skip", ""
        if isinstance(outcome, Found):
            t = outcome.value
            ok = passes(t, f, optional_mode)
            ok = ok and all(
                leq(a, t, OrderKind.CONE, f, optional_mode) for a in lower
            )
            ok = ok and all(
                leq(t, b, OrderKind.CONE, f, optional_mode) for b in upper
            )
            if not ok:
                raise RuntimeError(
                    "internal error: found interpolant fails verification"
                )
            return "pass", ""
        minimum, _, digest = oracle_min_cone_interpolant(
            lower, upper, f, grid, optional_mode, cap=_ORACLE_BUDGET
        )
        if minimum is not None:
            raise RuntimeError(
                "internal error: search missed an interpolant the oracle found"
            )
        return "notfound", digest
    if prop == "x-closure":
        if "X" not in inst.rvs:
            return "skip", ""
        x = inst.rvs["X"]
        if is_member_x(x, f, optional_mode):
            return "pass", ""
        lines = []
        for label, part in (("pos", pos_part(x)), ("neg", neg_part(x))):
            t = part.as_random_time()
            for c in predicate_transcript(t, f, optional_mode):
                if not c.ok:
                    outs = ",".join(str(w) for w in sorted(c.outcomes))
                    lines.append(
                        f"{label} level={fmt(c.level)} at={fmt(c.at)}"
                        f" kind={c.kind} outcomes={outs}"
                    )
        if not lines:
            raise RuntimeError(
                "internal error: membership failed with no failing check"
            )
        return "fail", _digest(lines)
    if prop == "truncation":
        if "S" not in inst.roles or not inst.part_roles():
            return "skip", ""
        s = inst.times[inst.roles["S"]]
        ts = [inst.times[inst.roles[r]] for r in inst.part_roles()]
        total = reduce(time_add, ts)
        if any(sv > tv for sv, tv in zip(s.values, total.values)):
            return "skip", ""
        lines = []
        for n in (1, 2, 3, 5):
            lhs = truncate(s, n)
            rhs = reduce(time_add, (truncate(t, n) for t in ts))
            for w in range(inst.space.size):
                if lhs.values[w] > rhs.values[w]:
                    lines.append(
                        f"n={n} outcome={inst.space.labels[w]}"
                        f" lhs={fmt(lhs.values[w])} rhs={fmt(rhs.values[w])}"
                    )
        if lines:
            return "fail", _digest(lines)
        return "pass", ""
    if prop == "optional-agreement":
        if not f.all_inclusive():
            return "skip", ""
        lines = []
        for name in sorted(inst.times):
            t = inst.times[name]
            stopping = is_stopping_time(t, f)
            optional = is_optional_time(t, f)
            if stopping != optional:
                lines.append(
                    f"time {name} stopping={stopping} optional={optional}"
                )
        if lines:
            return "fail", _digest(lines)
        return "pass", ""
    raise ValueError(f"unknown property {prop!r}")


# ---------------------------------------------------------------------------
# The hunt itself


def hunt(config: HuntConfig) -> HuntReport:
    _validate(config)
    total = len(config.corpus) + config.instances

    def evaluate(index: int) -> list[tuple[str, str, str, str | None]]:
        if index < len(config.corpus):
            inst = parse_instance(config.corpus[index])
        else:
            inst = generate_instance(config, index)
        results = []
        content: str | None = None
        for prop in config.properties:
            verdict, digest = eval_property(
                prop, inst, config.grid_denominator, config.optional_mode
            )
            if verdict in ("fail", "notfound"):
                if content is None:
                    content = emit_instance(inst)
                results.append((prop, verdict, digest, content))
            else:
                results.append((prop, verdict, digest, None))
        return results

    if config.jobs > 1 and total > 0:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            per_instance = list(pool.map(evaluate, range(total)))
    else:
        per_instance = [evaluate(i) for i in range(total)]

    tallies = {
        prop: {"pass": 0, "fail": 0, "notfound": 0, "skip": 0}
        for prop in config.properties
    }
    flagged: list[FlaggedInstance] = []
    flag_counts = {prop: 0 for prop in config.properties}
    for index, results in enumerate(per_instance):
        for prop, verdict, digest, content in results:
            tallies[prop][verdict] += 1
            if content is not None and flag_counts[prop] < config.flag_cap:
                flag_counts[prop] += 1
                flagged.append(
                    FlaggedInstance(index, prop, verdict, digest, content)
                )
    return HuntReport(VERSION, config, tallies, tuple(flagged))


# ---------------------------------------------------------------------------
# Replay


def parse_report(
    text: str,
) -> tuple[int, bool, list[FlaggedInstance]]:
    """Extract (grid denominator, optional mode, flagged blocks) from a
    serialized hunt report."""
    denominator = None
    optional = None
    flagged: list[FlaggedInstance] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("config "):
            tokens = line.split()[1:]
            pairs = dict(zip(tokens[0::2], tokens[1::2]))
            denominator = int(pairs["grid-denominator"])
            optional = pairs["optional"] == "true"
        elif line.startswith("flagged "):
            _, index, prop, verdict, digest = line.split()
            digest = digest.removeprefix("sha256:")
            block: list[str] = []
            i += 1
            while i < len(lines) and lines[i] != "end":
                block.append(lines[i])
                i += 1
            flagged.append(
                FlaggedInstance(
                    int(index), prop, verdict, digest, "\n".join(block) + "\n"
                )
            )
        i += 1
    if denominator is None or optional is None:
        raise ValueError("report has no config line")
    return denominator, optional, flagged


def replay_report(text: str) -> list[tuple[int, str, bool]]:
    """Re-evaluate every flagged instance from its serialized form.

    Returns (index, property, ok) per flag, where ok means the fresh verdict
    and evidence digest both match the report.
    """
    denominator, optional, flagged = parse_report(text)
    results = []
    for fl in flagged:
        inst = parse_instance(fl.content)
        verdict, digest = eval_property(fl.prop, inst, denominator, optional)
        results.append(
            (fl.index, fl.prop, verdict == fl.verdict and digest == fl.digest)
        )
    return results
