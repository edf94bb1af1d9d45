"""Order and lattice computations for random times on finite filtered
measurable spaces.

The package models filtrations as step functions of partitions, random
times as exact-rational (or infinite) value vectors, and makes the order
theory of stopping and optional times computable: predicates with check
transcripts, lattice and cone operations, truncation, greedy Riesz
decomposition of plain random variables, grid searches for stopping-time
decompositions and cone interpolants with exhaustive oracles, and a
deterministic seeded counterexample hunter.
"""

from ._version import VERSION as __version__
from .errors import CapExceededError, PreconditionError, SpaceMismatchError
from .extended import (
    INF,
    ExtTime,
    Infinity,
    ext_add,
    ext_scale,
    ext_sub,
    ext_sum,
    fmt,
    is_finite,
    parse_rational,
    parse_time_value,
)
from .hunting import (
    PROPERTIES,
    FlaggedInstance,
    HuntConfig,
    HuntReport,
    eval_property,
    generate_instance,
    hunt,
    parse_report,
    replay_report,
)
from .instances import (
    Instance,
    InstanceParseError,
    emit_instance,
    parse_instance,
)
from .rieszcore import RVDecomposition, rv_decompose, rv_interpolate
from .search import (
    Found,
    Grid,
    NotFoundOnGrid,
    PreconditionFailed,
    SearchOutcome,
    StDecomposition,
    all_filtrations,
    all_partitions,
    decompose_stopping,
    enumerate_stopping_times,
    interpolate_cone,
    interpolate_pointwise,
    max_stopping_minorant,
    oracle_decompose,
    oracle_max_minorant,
    oracle_min_cone_interpolant,
    verify_decomposition,
)
from .selftest import run_selftests
from .space import (
    Boundary,
    Filtration,
    Partition,
    SampleSpace,
    generated_partition,
)
from .times import (
    LevelCheck,
    OrderKind,
    RandomTime,
    RealRV,
    check_points,
    is_member_x,
    is_optional_time,
    is_stopping_time,
    leq,
    neg_part,
    passes,
    pos_part,
    predicate_transcript,
    rv_add,
    rv_join,
    rv_meet,
    rv_scale,
    rv_sub,
    time_add,
    time_join,
    time_meet,
    time_scale,
    truncate,
)

__all__ = [
    "__version__",
    "Boundary",
    "CapExceededError",
    "ExtTime",
    "Filtration",
    "FlaggedInstance",
    "Found",
    "Grid",
    "HuntConfig",
    "HuntReport",
    "INF",
    "Infinity",
    "Instance",
    "InstanceParseError",
    "LevelCheck",
    "NotFoundOnGrid",
    "OrderKind",
    "PROPERTIES",
    "Partition",
    "PreconditionError",
    "PreconditionFailed",
    "RVDecomposition",
    "RandomTime",
    "RealRV",
    "SampleSpace",
    "SearchOutcome",
    "SpaceMismatchError",
    "StDecomposition",
    "all_filtrations",
    "all_partitions",
    "check_points",
    "decompose_stopping",
    "emit_instance",
    "enumerate_stopping_times",
    "eval_property",
    "ext_add",
    "ext_scale",
    "ext_sub",
    "ext_sum",
    "fmt",
    "generate_instance",
    "generated_partition",
    "hunt",
    "interpolate_cone",
    "interpolate_pointwise",
    "is_finite",
    "is_member_x",
    "is_optional_time",
    "is_stopping_time",
    "leq",
    "max_stopping_minorant",
    "neg_part",
    "oracle_decompose",
    "oracle_max_minorant",
    "oracle_min_cone_interpolant",
    "parse_instance",
    "parse_rational",
    "parse_report",
    "parse_time_value",
    "passes",
    "pos_part",
    "predicate_transcript",
    "replay_report",
    "run_selftests",
    "rv_add",
    "rv_decompose",
    "rv_interpolate",
    "rv_join",
    "rv_meet",
    "rv_scale",
    "rv_sub",
    "time_add",
    "time_join",
    "time_meet",
    "time_scale",
    "truncate",
    "verify_decomposition",
]
