"""Exception types shared across the package."""


class IntervalError(ArithmeticError):
    """Base class for failures of validated interval evaluation.

    ``node`` is filled in by the tape when the failure happens during a
    sweep, so callers can tell which elemental raised.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class InvalidInterval(IntervalError, ValueError):
    """Raised when an interval would have ``lo > hi`` or a NaN endpoint."""


class DivisionByZeroInterval(IntervalError, ZeroDivisionError):
    """Raised when dividing by an interval that contains zero."""


class DomainViolation(IntervalError, ValueError):
    """Raised when an argument leaves the domain of an elemental (e.g. sqrt)."""


class UnknownLabel(KeyError):
    """Raised when a tape mark or node index does not exist."""


class UnknownBenchmark(KeyError):
    """Raised for benchmark ids missing from the registry."""


class NothingToSplit(ValueError):
    """Raised by bisection when no free dimension is wider than ``min_width``."""


class BudgetExhausted(RuntimeError):
    """Raised when the solver hits ``max_nodes`` before converging.

    The partial :class:`~subsep.solver.SolveReport` is available as
    ``report``; its ``best_value`` is still a valid enclosure.
    """

    def __init__(self, report):
        super().__init__(
            f"node budget exhausted after {report.counts['generated']} nodes"
        )
        self.report = report


class TraceUnavailable(RuntimeError):
    """Raised when a box trace is requested from a report recorded without one."""
