"""Monotonicity classification and structural separator verification.

Both checks read interval adjoints off a tape.  Monotonicity needs nothing
beyond the ordinary reverse sweep used for the first-order optimality test.
Verifying a separator ``s`` costs one extra sweep, seeded at ``s`` with
``df/ds([x])``: every input that influences ``f`` only through ``s`` must
get back exactly its full adjoint, and every input not feeding ``s`` must
get zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .interval import Interval
from .tape import AdjointResult, Tape, seed_and_sweep

__all__ = [
    "MonotonicityTag",
    "Monotonicity",
    "VerdictTag",
    "SeparatorVerdict",
    "classify",
    "check_monotonicity",
    "verify_separator",
]


class MonotonicityTag(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    DEGENERATE = "degenerate"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Monotonicity:
    tag: MonotonicityTag
    adjoint: Interval

    @property
    def is_monotone(self) -> bool:
        return self.tag is not MonotonicityTag.UNKNOWN


class VerdictTag(str, enum.Enum):
    VERIFIED = "verified"
    REJECTED = "rejected"


@dataclass(frozen=True)
class SeparatorVerdict:
    """Outcome of :func:`verify_separator`.

    ``witness`` is the first input that satisfied neither matching
    condition, or ``None`` when rejection came from an empty index set.
    ``degenerate`` flags a zero ``df/ds`` seed.
    """

    tag: VerdictTag
    X1: frozenset
    X2: frozenset
    witness: int | None = None
    degenerate: bool = False

    @property
    def verified(self) -> bool:
        return self.tag is VerdictTag.VERIFIED


def classify(adjoint: Interval) -> Monotonicity:
    """Monotonicity of ``f`` w.r.t. a node from its adjoint enclosure."""
    lo, hi = adjoint.lo, adjoint.hi
    if lo == 0.0 and hi == 0.0:
        tag = MonotonicityTag.DEGENERATE
    elif lo >= 0.0:
        tag = MonotonicityTag.INCREASING
    elif hi <= 0.0:
        tag = MonotonicityTag.DECREASING
    else:
        tag = MonotonicityTag.UNKNOWN
    return Monotonicity(tag, adjoint)


def check_monotonicity(tape: Tape, result: AdjointResult, s) -> Monotonicity:
    """Classify node ``s`` from an existing sweep; no tape sweep is run."""
    return classify(result.all_adjoints[tape.graph.resolve(s)])


def _close(a: Interval, b: Interval, tol: float) -> bool:
    if tol == 0.0:
        return a.lo == b.lo and a.hi == b.hi
    return abs(a.lo - b.lo) <= tol and abs(a.hi - b.hi) <= tol


def _is_zero(a: Interval, tol: float) -> bool:
    return abs(a.lo) <= tol and abs(a.hi) <= tol


def verify_separator(
    tape: Tape, result: AdjointResult, s, tolerance: float = 0.0
) -> SeparatorVerdict:
    """Check that node ``s`` is a structural separator.

    Parameters
    ----------
    tape : Tape
        Forward-evaluated tape.
    result : AdjointResult
        Full reverse sweep (seed 1 at the output) on ``tape``.
    s : str or int
        Mark label or node index of the candidate.
    tolerance : float
        Endpoint tolerance for the two matching conditions; 0 means
        bit-for-bit equality.

    Returns
    -------
    SeparatorVerdict
        ``X1`` holds inputs whose reseeded adjoint matches the full one,
        ``X2`` inputs whose reseeded adjoint vanishes.  When both hold (both
        adjoints zero) the input goes to ``X1`` only if it is structurally
        upstream of ``s``.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    graph = tape.graph
    node = graph.resolve(s)
    seed = result.all_adjoints[node]
    upstream = graph.reachable_inputs(node)
    reseeded = seed_and_sweep(tape, node, seed)
    x1, x2 = set(), set()
    witness = None
    for i in range(graph.n_inputs):
        r = reseeded.input_adjoints[i]
        full = result.input_adjoints[i]
        matches = _close(r, full, tolerance)
        vanishes = _is_zero(r, tolerance)
        if matches and vanishes:
            (x1 if i in upstream else x2).add(i)
        elif matches:
            x1.add(i)
        elif vanishes:
            x2.add(i)
        elif witness is None:
            witness = i
    degenerate = seed.lo == 0.0 and seed.hi == 0.0
    ok = witness is None and bool(x1) and bool(x2)
    return SeparatorVerdict(
        tag=VerdictTag.VERIFIED if ok else VerdictTag.REJECTED,
        X1=frozenset(x1),
        X2=frozenset(x2),
        witness=witness,
        degenerate=degenerate,
    )
