"""Interval branch and bound with structural separator decomposition."""

from .exceptions import (
    BudgetExhausted,
    DivisionByZeroInterval,
    DomainViolation,
    IntervalError,
    InvalidInterval,
    NothingToSplit,
    TraceUnavailable,
    UnknownBenchmark,
    UnknownLabel,
)
from .functions import BENCHMARKS, ObjectiveProgram, Separator, eval_real, make, salomon_roots
from .interval import Interval, hull, intersect, rounding
from .separability import (
    MonotonicityTag,
    VerdictTag,
    check_monotonicity,
    classify,
    verify_separator,
)
from .solver import (
    BoxTask,
    Exploration,
    Origin,
    SolveReport,
    SolverConfig,
    Status,
    solve,
)
from .tape import Recorder, record, reverse_sweep, seed_and_sweep

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS",
    "BoxTask",
    "BudgetExhausted",
    "DivisionByZeroInterval",
    "DomainViolation",
    "Exploration",
    "Interval",
    "IntervalError",
    "InvalidInterval",
    "MonotonicityTag",
    "NothingToSplit",
    "ObjectiveProgram",
    "Origin",
    "Recorder",
    "Separator",
    "SolveReport",
    "SolverConfig",
    "Status",
    "TraceUnavailable",
    "UnknownBenchmark",
    "UnknownLabel",
    "VerdictTag",
    "check_monotonicity",
    "classify",
    "eval_real",
    "hull",
    "intersect",
    "make",
    "record",
    "reverse_sweep",
    "rounding",
    "salomon_roots",
    "seed_and_sweep",
    "solve",
    "verify_separator",
]
