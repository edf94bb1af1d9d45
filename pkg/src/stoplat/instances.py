"""Line-oriented instance files: parse, validate, and canonically emit.

One directive per line, whitespace-separated tokens, `#` starts a comment:

    omega <name>+
    breakpoint <rational> [inclusive|exclusive] <block>(;<block>)*
    time <name> <value>+          value: nonnegative p/q, integer, or inf
    rv <name> <signed-rational>+
    set <A|B> <time-name>+
    role <S|T1|T2|...> <time-name>

Blocks are comma-separated outcome lists; the boundary keyword defaults to
inclusive.  emit_instance writes the canonical form (breakpoints ascending
with explicit boundaries, times and rvs sorted by name, roles S, T1, T2, ..)
so that parse then emit is the identity on canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .extended import fmt, parse_rational, parse_time_value
from .space import Boundary, Filtration, Partition, SampleSpace
from .times import RandomTime, RealRV

_NAME = re.compile(r"^[^\s,;#]+$")
_ROLE = re.compile(r"^(S|T[1-9][0-9]*)$")


class InstanceParseError(ValueError):
    """Parse or validation failure, prefixed with the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Instance:
    """A sample space and filtration with named times, rvs, sets, and roles."""

    space: SampleSpace
    filtration: Filtration
    times: dict[str, RandomTime] = field(default_factory=dict)
    rvs: dict[str, RealRV] = field(default_factory=dict)
    sets: dict[str, tuple[str, ...]] = field(default_factory=dict)
    roles: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "times", dict(self.times))
        object.__setattr__(self, "rvs", dict(self.rvs))
        object.__setattr__(
            self, "sets", {k: tuple(v) for k, v in self.sets.items()}
        )
        object.__setattr__(self, "roles", dict(self.roles))
        if self.filtration.space != self.space:
            raise ValueError("filtration over a different sample space")
        overlap = self.times.keys() & self.rvs.keys()
        if overlap:
            raise ValueError(f"name used for both a time and an rv: {overlap}")
        for name, t in self.times.items():
            if t.space != self.space:
                raise ValueError(f"time {name} over a different sample space")
        for name, x in self.rvs.items():
            if x.space != self.space:
                raise ValueError(f"rv {name} over a different sample space")
        for key, members in self.sets.items():
            if key not in ("A", "B"):
                raise ValueError(f"bad set name {key!r}")
            for name in members:
                if name not in self.times:
                    raise ValueError(f"set {key} names unknown time {name!r}")
        for role, name in self.roles.items():
            if not _ROLE.match(role):
                raise ValueError(f"bad role name {role!r}")
            if name not in self.times:
                raise ValueError(f"role {role} names unknown time {name!r}")

    def part_roles(self) -> list[str]:
        """The T1, T2, .. role names present, in index order."""
        return sorted(
            (r for r in self.roles if r != "S"), key=lambda r: int(r[1:])
        )


def parse_instance(text: str) -> Instance:
    space: SampleSpace | None = None
    entries: list[tuple] = []
    times: dict[str, RandomTime] = {}
    rvs: dict[str, RealRV] = {}
    raw_sets: dict[str, tuple[tuple[str, ...], int]] = {}
    raw_roles: dict[str, tuple[str, int]] = {}

    def err(lineno: int, message: str):
        raise InstanceParseError(lineno, message)

    def parse_blocks(lineno: int, tokens: list[str]) -> Partition:
        # a block list may contain spaces ("a,b; c"), so rejoin before
        # splitting on the block separator
        blocks = []
        for chunk in " ".join(tokens).split(";"):
            labels = [lab.strip() for lab in chunk.split(",") if lab.strip()]
            if not labels:
                err(lineno, "empty block")
            block = []
            for lab in labels:
                try:
                    block.append(space.index(lab))
                except ValueError:
                    err(lineno, f"unknown outcome {lab!r}")
            blocks.append(block)
        try:
            return Partition.from_blocks(space, blocks)
        except ValueError as exc:
            err(lineno, str(exc))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "omega":
            if space is not None:
                err(lineno, "duplicate omega line")
            if not args:
                err(lineno, "omega needs at least one outcome")
            for lab in args:
                if not _NAME.match(lab):
                    err(lineno, f"bad outcome label {lab!r}")
            if len(set(args)) != len(args):
                err(lineno, "outcome labels must be distinct")
            space = SampleSpace(tuple(args))
            continue
        if space is None:
            err(lineno, "omega line must come first")
        if directive == "breakpoint":
            if len(args) < 2:
                err(lineno, "breakpoint needs a time and blocks")
            try:
                u = parse_rational(args[0])
            except ValueError as exc:
                err(lineno, str(exc))
            if args[1] in ("inclusive", "exclusive"):
                boundary = Boundary(args[1])
                block_tokens = args[2:]
            else:
                boundary = Boundary.INCLUSIVE
                block_tokens = args[1:]
            if not block_tokens:
                err(lineno, "breakpoint needs blocks")
            part = parse_blocks(lineno, block_tokens)
            if not entries:
                if u != 0 or boundary is not Boundary.INCLUSIVE:
                    err(lineno, "first breakpoint must be '0 inclusive'")
            else:
                if u <= entries[-1][0]:
                    err(lineno, "breakpoints not increasing")
                if not part.refines(entries[-1][1]):
                    err(lineno, "non-refining partition chain")
            entries.append((u, part, boundary))
        elif directive in ("time", "rv"):
            if not args:
                err(lineno, f"{directive} needs a name and values")
            name, value_tokens = args[0], args[1:]
            if not _NAME.match(name):
                err(lineno, f"bad name {name!r}")
            if name in times or name in rvs:
                err(lineno, f"duplicate name {name!r}")
            if len(value_tokens) != space.size:
                err(
                    lineno,
                    f"expected {space.size} values, got {len(value_tokens)}",
                )
            try:
                if directive == "time":
                    times[name] = RandomTime(
                        space, tuple(parse_time_value(v) for v in value_tokens)
                    )
                else:
                    rvs[name] = RealRV(
                        space, tuple(parse_rational(v) for v in value_tokens)
                    )
            except ValueError as exc:
                err(lineno, str(exc))
        elif directive == "set":
            if len(args) < 2:
                err(lineno, "set needs a name and members")
            if args[0] not in ("A", "B"):
                err(lineno, f"bad set name {args[0]!r}")
            if args[0] in raw_sets:
                err(lineno, f"duplicate set {args[0]}")
            raw_sets[args[0]] = (tuple(args[1:]), lineno)
        elif directive == "role":
            if len(args) != 2:
                err(lineno, "role needs a role name and a time name")
            if not _ROLE.match(args[0]):
                err(lineno, f"bad role name {args[0]!r}")
            if args[0] in raw_roles:
                err(lineno, f"duplicate role {args[0]}")
            raw_roles[args[0]] = (args[1], lineno)
        else:
            err(lineno, f"unknown directive {directive!r}")

    if space is None:
        raise InstanceParseError(1, "missing omega line")
    if not entries:
        raise InstanceParseError(1, "missing breakpoint lines")
    filtration = Filtration(space, tuple(entries))
    for key, (members, lineno) in raw_sets.items():
        for name in members:
            if name not in times:
                err(lineno, f"set {key} names unknown time {name!r}")
    for role, (name, lineno) in raw_roles.items():
        if name not in times:
            err(lineno, f"role {role} names unknown time {name!r}")
    return Instance(
        space,
        filtration,
        times,
        rvs,
        {k: members for k, (members, _) in raw_sets.items()},
        {k: name for k, (name, _) in raw_roles.items()},
    )


def emit_instance(inst: Instance) -> str:
    lines = ["omega " + " ".join(inst.space.labels)]
    for u, part, boundary in inst.filtration.entries:
        blocks = ";".join(
            ",".join(inst.space.labels[w] for w in block)
            for block in part.blocks
        )
        lines.append(f"breakpoint {fmt(u)} {boundary.value} {blocks}")
    for name in sorted(inst.times):
        values = " ".join(fmt(v) for v in inst.times[name].values)
        lines.append(f"time {name} {values}")
    for name in sorted(inst.rvs):
        values = " ".join(str(v) for v in inst.rvs[name].values)
        lines.append(f"rv {name} {values}")
    for key in ("A", "B"):
        if key in inst.sets:
            lines.append(f"set {key} " + " ".join(inst.sets[key]))
    for role in sorted(
        inst.roles, key=lambda r: (0, 0) if r == "S" else (1, int(r[1:]))
    ):
        lines.append(f"role {role} {inst.roles[role]}")
    return "\n".join(lines) + "\n"
