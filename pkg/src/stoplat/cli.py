"""Command-line surface.

Commands read a line-oriented instance file (or `-` for standard input),
dispatch to the library, and print exact-rational reports.  Exit codes:

    0   success / Found
    1   an invariant check failed (selftest, --oracle cross-check, replay)
    2   invalid instance or flags
    3   NotFoundOnGrid
    4   PreconditionFailed

Machine-readable output (--report PATH) uses the instance grammar extended
with `result`, `part`, `tally`, and `flagged` directives.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._version import VERSION
from .errors import CapExceededError, PreconditionError, SpaceMismatchError
from .extended import fmt, parse_rational
from .hunting import (
    PROPERTIES,
    HuntConfig,
    hunt,
    replay_report,
)
from .instances import Instance, InstanceParseError, parse_instance
from .search import (
    Found,
    Grid,
    NotFoundOnGrid,
    PreconditionFailed,
    decompose_stopping,
    interpolate_cone,
    interpolate_pointwise,
    max_stopping_minorant,
    oracle_decompose,
    oracle_max_minorant,
    oracle_min_cone_interpolant,
)
from .selftest import run_selftests
from .times import (
    RandomTime,
    is_member_x,
    is_optional_time,
    is_stopping_time,
)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_NOTFOUND = 3
EXIT_PRECONDITION = 4


def _load_instance(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.read())
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _named_times(inst: Instance, names: list[str]) -> list[RandomTime]:
    for name in names:
        if name not in inst.times:
            raise ValueError(f"unknown time name {name!r}")
    return [inst.times[name] for name in names]


def _target_name(inst: Instance, flag: str | None) -> str:
    if flag is not None:
        if flag not in inst.times:
            raise ValueError(f"unknown time name {flag!r}")
        return flag
    if "S" in inst.roles:
        return inst.roles["S"]
    if len(inst.times) == 1:
        return next(iter(inst.times))
    raise ValueError("no --target given and no S role in the instance")


def _part_names(inst: Instance, flag: str | None) -> list[str]:
    if flag is not None:
        names = [n for n in flag.split(",") if n]
        if not names:
            raise ValueError("--parts must name at least one time")
        for name in names:
            if name not in inst.times:
                raise ValueError(f"unknown time name {name!r}")
        return names
    names = [inst.roles[r] for r in inst.part_roles()]
    if not names:
        raise ValueError("no --parts given and no T roles in the instance")
    return names


def _grid_for(args, times: list[RandomTime]) -> Grid:
    q = args.grid_denominator
    if args.grid_max is None:
        return Grid.covering(times, q)
    include_inf = any(not t.is_finite for t in times)
    grid = Grid(q, parse_rational(args.grid_max), include_inf)
    for t in times:
        for v in t.values:
            if not grid.contains(v):
                raise ValueError(f"value {fmt(v)} is off the grid")
    return grid


def _vals(t: RandomTime) -> str:
    return " ".join(fmt(v) for v in t.values)


def _write_report_text(args, text: str) -> None:
    sys.stdout.write(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Commands


def _cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    lines = []
    report = []
    for name in sorted(inst.times):
        t = inst.times[name]
        st = "true" if is_stopping_time(t, inst.filtration) else "false"
        op = "true" if is_optional_time(t, inst.filtration) else "false"
        lines.append(f"{name}: stopping={st} optional={op}")
        report.append(f"result check {name} stopping={st} optional={op}")
    for name in sorted(inst.rvs):
        member = is_member_x(inst.rvs[name], inst.filtration, args.optional)
        flag = "true" if member else "false"
        lines.append(f"{name}: member={flag}")
        report.append(f"result check {name} member={flag}")
    print("\n".join(lines))
    if args.report:
        Path(args.report).write_text("\n".join(report) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_minorant(args) -> int:
    inst = _load_instance(args.instance)
    name = _target_name(inst, args.target)
    u = inst.times[name]
    t = max_stopping_minorant(u, inst.filtration, args.optional)
    lines = [f"minorant {name} = {_vals(t)}"]
    report = [f"result minorant {name} {_vals(t)}"]
    code = EXIT_OK
    if args.oracle:
        grid = _grid_for(args, [u])
        want = oracle_max_minorant(u, inst.filtration, grid, args.optional)
        if want.values == t.values:
            lines.append("oracle agrees")
            report.append("result oracle-check agree")
        else:
            lines.append(f"oracle MISMATCH: {_vals(want)}")
            report.append(f"result oracle-check mismatch {_vals(want)}")
            code = EXIT_INVARIANT
    _emit_pair(args, lines, report)
    return code


def _cmd_decompose(args) -> int:
    inst = _load_instance(args.instance)
    target = _target_name(inst, args.target)
    parts = _part_names(inst, args.parts)
    s = inst.times[target]
    ts = _named_times(inst, parts)
    grid = _grid_for(args, [s, *ts])
    outcome = decompose_stopping(s, ts, inst.filtration, grid, args.optional)
    lines: list[str] = []
    report: list[str] = []
    if isinstance(outcome, Found):
        code = EXIT_OK
        lines.append("found")
        report.append("result decompose found")
        for i, part in enumerate(outcome.value.parts, start=1):
            lines.append(f"S{i} = {_vals(part)}")
            report.append(f"part S{i} {_vals(part)}")
    elif isinstance(outcome, NotFoundOnGrid):
        code = EXIT_NOTFOUND
        lines.append(
            f"notfound-on-grid states={outcome.states_explored}"
            f" ({outcome.grid.label()})"
        )
        report.append(
            f"result decompose notfound states {outcome.states_explored}"
        )
    else:
        code = EXIT_PRECONDITION
        lines.append(f"precondition-failed: {outcome.reason}")
        report.append(f"result decompose precondition {outcome.reason}")
    if args.oracle and not isinstance(outcome, PreconditionFailed):
        best, states, digest = oracle_decompose(
            s, ts, inst.filtration, grid, args.optional
        )
        found = isinstance(outcome, Found)
        agree = (best is not None) == found
        if agree and found:
            got = [p.values for p in outcome.value.parts]
            agree = got == [p.values for p in best]
        if agree:
            lines.append(
                f"oracle agrees states={states} certificate sha256:{digest}"
            )
            report.append(f"result oracle-check agree sha256:{digest}")
        else:
            lines.append(f"oracle MISMATCH states={states}")
            report.append("result oracle-check mismatch")
            code = EXIT_INVARIANT
    _emit_pair(args, lines, report)
    return code


def _cmd_interpolate(args) -> int:
    inst = _load_instance(args.instance)
    if "A" not in inst.sets or "B" not in inst.sets:
        raise ValueError("interpolation needs sets A and B in the instance")
    lower = _named_times(inst, list(inst.sets["A"]))
    upper = _named_times(inst, list(inst.sets["B"]))
    lines: list[str] = []
    report: list[str] = []
    if args.mode == "pointwise":
        try:
            t = interpolate_pointwise(lower, upper, inst.filtration, args.optional)
        except PreconditionError as exc:
            lines.append(f"precondition-failed: {exc}")
            report.append(f"result interpolate pointwise precondition {exc}")
            _emit_pair(args, lines, report)
            return EXIT_PRECONDITION
        lines.append(f"interpolant = {_vals(t)}")
        report.append(f"result interpolate pointwise {_vals(t)}")
        _emit_pair(args, lines, report)
        return EXIT_OK
    grid = _grid_for(args, lower + upper)
    outcome = interpolate_cone(lower, upper, inst.filtration, grid, args.optional)
    if isinstance(outcome, Found):
        code = EXIT_OK
        lines.append(f"interpolant = {_vals(outcome.value)}")
        report.append(f"result interpolate cone {_vals(outcome.value)}")
    elif isinstance(outcome, NotFoundOnGrid):
        code = EXIT_NOTFOUND
        lines.append(
            f"notfound-on-grid states={outcome.states_explored}"
            f" ({outcome.grid.label()})"
        )
        report.append(
            f"result interpolate notfound states {outcome.states_explored}"
        )
    else:
        code = EXIT_PRECONDITION
        lines.append(f"precondition-failed: {outcome.reason}")
        report.append(f"result interpolate precondition {outcome.reason}")
    if args.oracle and not isinstance(outcome, PreconditionFailed):
        best, states, digest = oracle_min_cone_interpolant(
            lower, upper, inst.filtration, grid, args.optional
        )
        found = isinstance(outcome, Found)
        agree = (best is not None) == found
        if agree and found:
            agree = best.values == outcome.value.values
        if agree:
            lines.append(
                f"oracle agrees states={states} certificate sha256:{digest}"
            )
            report.append(f"result oracle-check agree sha256:{digest}")
        else:
            lines.append(f"oracle MISMATCH states={states}")
            report.append("result oracle-check mismatch")
            code = EXIT_INVARIANT
    _emit_pair(args, lines, report)
    return code


def _cmd_hunt(args) -> int:
    if args.replay:
        text = Path(args.replay).read_text(encoding="utf-8")
        rows = replay_report(text)
        for index, prop, ok in rows:
            print(f"replay {index} {prop} {'ok' if ok else 'MISMATCH'}")
        print(f"replayed {len(rows)} flagged instances")
        return EXIT_OK if all(ok for _, _, ok in rows) else EXIT_INVARIANT
    corpus = tuple(
        Path(p).read_text(encoding="utf-8") for p in args.corpus
    )
    properties = tuple(
        p for p in args.properties.split(",") if p
    ) if args.properties else PROPERTIES
    config = HuntConfig(
        seed=args.seed,
        instances=args.instances,
        max_omega=args.max_omega,
        max_breakpoints=args.max_breakpoints,
        grid_denominator=args.grid_denominator,
        grid_max=parse_rational(args.grid_max),
        properties=properties,
        optional_mode=args.optional,
        jobs=args.jobs,
        flag_cap=args.flag_cap,
        corpus=corpus,
    )
    report = hunt(config)
    _write_report_text(args, report.to_text())
    return EXIT_OK


def _cmd_selftest(args) -> int:
    rows = run_selftests()
    report = []
    failed = 0
    for name, ok, detail in rows:
        if ok:
            print(f"ok {name}")
        else:
            failed += 1
            print(f"FAIL {name}: {detail}")
        report.append(f"result selftest {name} {'ok' if ok else 'fail'}")
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    if args.report:
        Path(args.report).write_text("\n".join(report) + "\n", encoding="utf-8")
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def _cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    lines: list[str] = []
    report: list[str] = []
    if args.what == "minorant":
        name = _target_name(inst, args.target)
        u = inst.times[name]
        grid = _grid_for(args, [u])
        t = oracle_max_minorant(u, inst.filtration, grid, args.optional)
        lines.append(f"oracle minorant {name} = {_vals(t)}")
        report.append(f"result oracle minorant {name} {_vals(t)}")
        code = EXIT_OK
    elif args.what == "decompose":
        target = _target_name(inst, args.target)
        parts = _part_names(inst, args.parts)
        s = inst.times[target]
        ts = _named_times(inst, parts)
        grid = _grid_for(args, [s, *ts])
        best, states, digest = oracle_decompose(
            s, ts, inst.filtration, grid, args.optional
        )
        if best is None:
            lines.append(f"oracle decompose none states={states}")
            report.append(f"result oracle decompose none states {states}")
            code = EXIT_NOTFOUND
        else:
            lines.append(f"oracle decompose found states={states}")
            report.append(f"result oracle decompose found states {states}")
            for i, part in enumerate(best, start=1):
                lines.append(f"S{i} = {_vals(part)}")
                report.append(f"part S{i} {_vals(part)}")
            code = EXIT_OK
        lines.append(f"certificate sha256:{digest}")
        report.append(f"result certificate sha256:{digest}")
    else:
        if "A" not in inst.sets or "B" not in inst.sets:
            raise ValueError("interpolation needs sets A and B in the instance")
        lower = _named_times(inst, list(inst.sets["A"]))
        upper = _named_times(inst, list(inst.sets["B"]))
        grid = _grid_for(args, lower + upper)
        best, states, digest = oracle_min_cone_interpolant(
            lower, upper, inst.filtration, grid, args.optional
        )
        if best is None:
            lines.append(f"oracle interpolate none states={states}")
            report.append(f"result oracle interpolate none states {states}")
            code = EXIT_NOTFOUND
        else:
            lines.append(f"oracle interpolate found = {_vals(best)}")
            report.append(f"result oracle interpolate {_vals(best)}")
            code = EXIT_OK
        lines.append(f"certificate sha256:{digest}")
        report.append(f"result certificate sha256:{digest}")
    _emit_pair(args, lines, report)
    return code


def _emit_pair(args, lines: list[str], report: list[str]) -> None:
    print("\n".join(lines))
    if getattr(args, "report", None):
        Path(args.report).write_text("\n".join(report) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stoplat",
        description="order and lattice computations for random times on "
        "finite filtered spaces",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    grid_flags = argparse.ArgumentParser(add_help=False)
    grid_flags.add_argument("--grid-denominator", type=int, default=4)
    grid_flags.add_argument("--grid-max", default=None)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--optional", action="store_true",
                        help="use the optional-time predicate")
    common.add_argument("--report", default=None,
                        help="write a machine-readable report to this path")

    p = sub.add_parser("check", parents=[common],
                       help="evaluate both predicates for every named time")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("minorant", parents=[common, grid_flags],
                       help="largest passing time below the target")
    p.add_argument("instance")
    p.add_argument("--target", default=None)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_minorant)

    p = sub.add_parser("decompose", parents=[common, grid_flags],
                       help="split the target into parts below the bounds")
    p.add_argument("instance")
    p.add_argument("--target", default=None)
    p.add_argument("--parts", default=None,
                   help="comma-separated bound time names")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("interpolate", parents=[common, grid_flags],
                       help="find a time between the A and B families")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("pointwise", "cone"),
                   default="pointwise")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_interpolate)

    p = sub.add_parser("hunt", parents=[common],
                       help="seeded search for property counterexamples")
    p.add_argument("corpus", nargs="*",
                   help="instance files evaluated before the seeded stream")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--max-omega", type=int, default=4)
    p.add_argument("--max-breakpoints", type=int, default=3)
    p.add_argument("--grid-denominator", type=int, default=2)
    p.add_argument("--grid-max", default="2")
    p.add_argument("--properties", default=None,
                   help="comma-separated subset of: " + ",".join(PROPERTIES))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--flag-cap", type=int, default=10)
    p.add_argument("--replay", default=None, metavar="REPORT",
                   help="re-verify the flagged instances of a saved report")
    p.set_defaults(func=_cmd_hunt)

    p = sub.add_parser("selftest", parents=[common],
                       help="run the built-in invariant suites")
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("oracle", parents=[common, grid_flags],
                       help="exhaustive reference answers with certificates")
    p.add_argument("instance")
    p.add_argument("--what", choices=("decompose", "interpolate", "minorant"),
                   default="decompose")
    p.add_argument("--target", default=None)
    p.add_argument("--parts", default=None)
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition-failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, OSError, CapExceededError, SpaceMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
