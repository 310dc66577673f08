"""Interval branch and bound with separator decomposition.

Each work item is a box.  Processing one box runs a forward interval sweep
and one reverse sweep, then applies in order

1. the value check (discard if ``f([x]).lo`` exceeds the incumbent),
2. the first-order optimality check (discard, or pin a dimension to the
   domain boundary when the gradient keeps one sign there),
3. bound improvement at the box midpoint,
4. the separator step: for every verified separator that is monotone on the
   box, minimise (or maximise) the separator over its own variables with a
   nested run of this solver and fix those variables to the optimiser,
5. bisection of every free dimension wider than ``min_width``.

Boxes are explored best-first by their lower bound.  The run stops once the
incumbent is within ``f_tolerance`` of the smallest pending lower bound,
when nothing is left to split, or when ``max_nodes`` is spent.

A separated box keeps the separator node pinned to an enclosure of its inner
optimum (through a tape override), so lower bounds of the reduced box stay
rigorous even though the inner argmin is only approximate.
"""

from __future__ import annotations

import dataclasses
import enum
import heapq
import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .exceptions import BudgetExhausted, IntervalError, NothingToSplit
from .interval import Interval, midpoint, rounding, vector_width
from .separability import MonotonicityTag, check_monotonicity, verify_separator
from .tape import AdjointResult, Tape, record, reverse_sweep

logger = logging.getLogger(__name__)

__all__ = [
    "Origin",
    "Status",
    "Exploration",
    "Check",
    "FixBoundary",
    "BoxTask",
    "Incumbent",
    "SolverConfig",
    "SeparatorInfo",
    "TraceRecord",
    "SolveReport",
    "bisect",
    "value_check",
    "optimality_check",
    "apply_boundary_fix",
    "improve_bound",
    "separator_step",
    "verify_separators",
    "solve",
]

_INF = math.inf


class Origin(str, enum.Enum):
    ROOT = "root"
    BISECTION = "bisection"
    SEPARATION = "separation"
    BOUNDARY_FIX = "boundary_fix"


class Status(str, enum.Enum):
    ACTIVE = "active"
    VALUE_ELIMINATED = "value_eliminated"
    OPTIMALITY_ELIMINATED = "optimality_eliminated"
    BOUNDARY_FIXED = "boundary_fixed"
    SEPARATED = "separated"
    # kept in the in-memory trace for lineage, left out of the CSV dump
    BISECTED = "bisected"


class Exploration(str, enum.Enum):
    BEST_FIRST = "best_first"
    DEPTH_FIRST = "depth_first"


class Check(str, enum.Enum):
    KEEP = "keep"
    DISCARD = "discard"


@dataclass(frozen=True)
class FixBoundary:
    """Pin dimensions to a boundary of the original domain.

    ``fixes`` holds ``(dim, "lower" | "upper")`` pairs.
    """

    fixes: tuple


COUNT_KEYS = (
    "generated",
    "bisected",
    "value_eliminated",
    "optimality_eliminated",
    "boundary_fixed",
    "separated",
    "active_at_exit",
    "inner_generated",
)


@dataclass(frozen=True)
class BoxTask:
    """A branch-and-bound work item.

    ``fixed[i]`` is the value of a dimension resolved by separation or
    boundary fixing (the matching box component is degenerate), ``None``
    for free dimensions.  ``overrides`` maps separator nodes to the
    enclosure of their inner optimum.  ``lower`` is a lower bound of ``f``
    over the box known before the box is evaluated.
    """

    box: tuple
    fixed: tuple
    depth: int = 0
    origin: Origin = Origin.ROOT
    overrides: dict = field(default_factory=dict)
    lower: float = -_INF
    id: int = 0
    parent: int | None = None

    @classmethod
    def root(cls, box: Sequence[Interval], fixed: Sequence | None = None) -> "BoxTask":
        box = tuple(box)
        if fixed is None:
            fixed = (None,) * len(box)
        return cls(box=box, fixed=tuple(fixed))

    def free_dims(self) -> list[int]:
        return [i for i, f in enumerate(self.fixed) if f is None]

    def point(self) -> list[float]:
        return [
            midpoint(iv) if f is None else f for iv, f in zip(self.box, self.fixed)
        ]


@dataclass(frozen=True)
class Incumbent:
    point: tuple | None
    value: float = _INF


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``min_width=None`` means 1e-4 times the width of the initial domain.
    ``workers > 1`` evaluates batches of boxes concurrently against a
    shared incumbent snapshot; results are merged in pop order.
    """

    min_width: float | None = None
    f_tolerance: float = 1e-6
    max_nodes: int = 10**7
    separation: bool = True
    exploration: Exploration = Exploration.BEST_FIRST
    rounding: bool = True
    workers: int = 1
    record_trace: bool = False
    verify_tolerance: float = 0.0

    def __post_init__(self):
        if self.min_width is not None and not self.min_width > 0:
            raise ValueError("min_width must be positive")
        if not self.f_tolerance > 0:
            raise ValueError("f_tolerance must be positive")
        if int(self.max_nodes) < 1:
            raise ValueError("max_nodes must be at least 1")
        if int(self.workers) < 1:
            raise ValueError("workers must be at least 1")
        if self.verify_tolerance < 0:
            raise ValueError("verify_tolerance must be non-negative")
        object.__setattr__(self, "exploration", Exploration(self.exploration))
        object.__setattr__(self, "max_nodes", int(self.max_nodes))
        object.__setattr__(self, "workers", int(self.workers))

    def resolved_min_width(self, domain: Sequence[Interval]) -> float:
        if self.min_width is not None:
            return float(self.min_width)
        w = vector_width(domain)
        if not (w > 0 and math.isfinite(w)):
            return 1.0
        return 1e-4 * w


@dataclass(frozen=True)
class SeparatorInfo:
    label: str
    node: int
    verified: bool
    X1: tuple
    X2: tuple
    witness: int | None = None


@dataclass(frozen=True)
class TraceRecord:
    id: int
    parent: int | None
    origin: Origin
    depth: int
    box: tuple
    status: Status
    lower: float
    incumbent: float

    def is_square(self, rel_tol: float = 1e-9) -> bool:
        """Equal widths in every dimension, up to bisection rounding."""
        widths = [iv.hi - iv.lo for iv in self.box]
        return math.isclose(max(widths), min(widths), rel_tol=rel_tol)


# ----------------------------------------------------------------------------
# Report
# ----------------------------------------------------------------------------


def _box_to_list(box):
    return [[iv.lo, iv.hi] for iv in box]


def _box_from_list(data):
    return tuple(Interval(lo, hi) for lo, hi in data)


@dataclass(frozen=True)
class SolveReport:
    """Result of :func:`solve`.

    ``best_value`` encloses the global minimum.  ``incumbent`` is the best
    point found and ``incumbent_value`` its objective value.  ``counts``
    satisfies ``generated == bisected + value_eliminated +
    optimality_eliminated + boundary_fixed + separated + active_at_exit``;
    ``inner_generated`` counts boxes of the nested separator solves.
    """

    best_value: Interval
    incumbent: tuple | None
    incumbent_value: float
    counts: dict
    termination: str
    degenerate: bool = False
    separators: tuple = ()
    trace: tuple | None = None

    @property
    def total_nodes(self) -> int:
        return self.counts["generated"] + self.counts["inner_generated"]

    def to_dict(self) -> dict:
        return {
            "best_value": [self.best_value.lo, self.best_value.hi],
            "incumbent": {
                "point": None if self.incumbent is None else list(self.incumbent),
                "value": self.incumbent_value,
            },
            "counts": {k: self.counts[k] for k in COUNT_KEYS},
            "termination": self.termination,
            "degenerate": self.degenerate,
            "separators": [
                {
                    "label": s.label,
                    "node": s.node,
                    "verified": s.verified,
                    "X1": list(s.X1),
                    "X2": list(s.X2),
                    "witness": s.witness,
                }
                for s in self.separators
            ],
            "trace": None
            if self.trace is None
            else [
                {
                    "id": r.id,
                    "parent": r.parent,
                    "origin": r.origin.value,
                    "depth": r.depth,
                    "box": _box_to_list(r.box),
                    "status": r.status.value,
                    "lower": r.lower,
                    "incumbent": r.incumbent,
                }
                for r in self.trace
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolveReport":
        inc = data["incumbent"]
        trace = data.get("trace")
        return cls(
            best_value=Interval(*data["best_value"]),
            incumbent=None if inc["point"] is None else tuple(inc["point"]),
            incumbent_value=inc["value"],
            counts=dict(data["counts"]),
            termination=data["termination"],
            degenerate=bool(data.get("degenerate", False)),
            separators=tuple(
                SeparatorInfo(
                    s["label"], s["node"], s["verified"], tuple(s["X1"]), tuple(s["X2"]), s["witness"]
                )
                for s in data.get("separators", [])
            ),
            trace=None
            if trace is None
            else tuple(
                TraceRecord(
                    id=r["id"],
                    parent=r["parent"],
                    origin=Origin(r["origin"]),
                    depth=r["depth"],
                    box=_box_from_list(r["box"]),
                    status=Status(r["status"]),
                    lower=r["lower"],
                    incumbent=r["incumbent"],
                )
                for r in trace
            ),
        )

    def to_json(self, **kwargs) -> str:
        # repr-based float output is the shortest string that round-trips
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls.from_dict(json.loads(text))


# ----------------------------------------------------------------------------
# Elementary steps
# ----------------------------------------------------------------------------


def bisect(task: BoxTask, min_width: float) -> list[BoxTask]:
    """Split every free dimension wider than ``min_width`` at its midpoint.

    Returns ``2**k`` children for ``k`` split dimensions, lower halves
    first.  Raises :class:`NothingToSplit` when no dimension qualifies.
    """
    halves = []
    split_any = False
    for iv, f in zip(task.box, task.fixed):
        if f is None and iv.hi - iv.lo > min_width:
            m = midpoint(iv)
            if iv.lo < m < iv.hi:
                halves.append((Interval(iv.lo, m), Interval(m, iv.hi)))
                split_any = True
                continue
        halves.append((iv,))
    if not split_any:
        raise NothingToSplit("no free dimension is wider than min_width")
    return [
        BoxTask(
            box=tuple(combo),
            fixed=task.fixed,
            depth=task.depth + 1,
            origin=Origin.BISECTION,
            overrides=task.overrides,
            lower=task.lower,
            parent=task.id,
        )
        for combo in itertools.product(*halves)
    ]


def value_check(output: Interval, incumbent_ub: float) -> Check:
    """Discard iff the enclosure lies strictly above the incumbent."""
    return Check.DISCARD if output.lo > incumbent_ub else Check.KEEP


def optimality_check(adjoints: AdjointResult, task: BoxTask, original: Sequence[Interval]):
    """First-order test on the gradient enclosure.

    A free dimension whose derivative enclosure excludes zero cannot hold
    an interior minimiser.  If the descent direction leads to the boundary
    of the original domain the dimension is pinned there
    (:class:`FixBoundary`), otherwise the box is discarded.
    """
    fixes = []
    for i, (iv, f) in enumerate(zip(task.box, task.fixed)):
        if f is not None or iv.lo == iv.hi:
            continue
        g = adjoints.input_adjoints[i]
        if g.lo > 0.0:
            if iv.lo == original[i].lo:
                fixes.append((i, "lower"))
            else:
                return Check.DISCARD
        elif g.hi < 0.0:
            if iv.hi == original[i].hi:
                fixes.append((i, "upper"))
            else:
                return Check.DISCARD
    if fixes:
        return FixBoundary(tuple(fixes))
    return Check.KEEP


def apply_boundary_fix(task: BoxTask, fix: FixBoundary) -> BoxTask:
    box = list(task.box)
    fixed = list(task.fixed)
    for i, side in fix.fixes:
        v = box[i].lo if side == "lower" else box[i].hi
        box[i] = Interval(v, v)
        fixed[i] = v
    return BoxTask(
        box=tuple(box),
        fixed=tuple(fixed),
        depth=task.depth + 1,
        origin=Origin.BOUNDARY_FIX,
        overrides=task.overrides,
        lower=task.lower,
        parent=task.id,
    )


def improve_bound(program, task: BoxTask, current: Incumbent) -> Incumbent:
    """Evaluate the midpoint and keep it if strictly better than ``current``."""
    point = task.point()
    try:
        value = program(point)
    except (IntervalError, ValueError, OverflowError):
        return current
    if value < current.value:
        return Incumbent(tuple(point), value)
    return current


# ----------------------------------------------------------------------------
# Separator verification and decomposition
# ----------------------------------------------------------------------------


def verify_separators(program, domain, labels, tolerance: float = 0.0) -> list[SeparatorInfo]:
    """Verify candidate separators once on ``domain``."""
    graph = program.graph
    nodes = [(label, graph.resolve(label)) for label in labels]
    try:
        tape = record(program, domain)
        result = reverse_sweep(tape)
    except IntervalError as exc:
        logger.warning("separator verification impossible on the domain: %s", exc)
        return [SeparatorInfo(label, node, False, (), ()) for label, node in nodes]
    infos = []
    for label, node in nodes:
        verdict = verify_separator(tape, result, node, tolerance)
        if not verdict.verified:
            logger.warning("separator %r rejected (witness %s)", label, verdict.witness)
        infos.append(
            SeparatorInfo(
                label,
                node,
                verdict.verified,
                tuple(sorted(verdict.X1)),
                tuple(sorted(verdict.X2)),
                verdict.witness,
            )
        )
    return infos


@dataclass
class _Context:
    program: object
    original: tuple
    config: SolverConfig
    min_width: float
    separators: list
    budget: int


@dataclass
class _StepResult:
    task: BoxTask | None = None
    inner_generated: int = 0
    degenerate: bool = False


def _inner_solve(ctx: _Context, sep: SeparatorInfo, maximize: bool, task_box, fixed, overrides, budget, f_tol):
    program = ctx.program
    sub = program.sub_program(sep.node, negate=maximize)
    free = [i for i in sep.X1 if fixed[i] is None]
    inner_box = []
    inner_fixed = []
    for i, iv in enumerate(task_box):
        if i in free:
            inner_box.append(iv)
            inner_fixed.append(None)
        else:
            v = fixed[i] if fixed[i] is not None else midpoint(iv)
            inner_box.append(Interval(v, v))
            inner_fixed.append(v)
    inner_overrides = {k: v for k, v in overrides.items() if k < sep.node}
    config = dataclasses.replace(
        ctx.config,
        separation=False,
        record_trace=False,
        workers=1,
        max_nodes=max(1, budget),
        f_tolerance=f_tol,
    )
    report, exhausted = _run(
        sub, tuple(inner_box), tuple(inner_fixed), inner_overrides, config, ctx.min_width, []
    )
    return report, exhausted


def separator_step(ctx: _Context, tape: Tape, adjoints: AdjointResult, task: BoxTask, budget: int) -> _StepResult:
    """Apply the decomposition to every separator that is monotone on the box.

    Separators are handled innermost first (smallest variable set), so
    nested ones see the variables fixed by their inner neighbours.  Returns
    a result whose ``task`` is ``None`` when nothing was separated.
    """
    candidates = []
    for sep in ctx.separators:
        if not any(task.fixed[i] is None for i in sep.X1):
            continue
        mono = check_monotonicity(tape, adjoints, sep.node)
        if mono.is_monotone:
            candidates.append((sep, mono))
    out = _StepResult()
    if not candidates:
        return out
    box = list(task.box)
    fixed = list(task.fixed)
    overrides = dict(task.overrides)
    applied = False
    share = ctx.config.f_tolerance / len(candidates)
    for sep, mono in candidates:
        free = [i for i in sep.X1 if fixed[i] is None]
        if not free:
            continue
        if mono.tag is MonotonicityTag.DEGENERATE:
            for i in free:
                v = midpoint(box[i])
                box[i] = Interval(v, v)
                fixed[i] = v
            out.degenerate = True
            applied = True
            continue
        maximize = mono.tag is MonotonicityTag.DECREASING
        # an inner gap d moves the outer lower bound by at most |df/ds| * d
        scale = max(abs(mono.adjoint.lo), abs(mono.adjoint.hi), 1.0)
        f_tol = share / scale if math.isfinite(scale) else share
        report, exhausted = _inner_solve(
            ctx, sep, maximize, box, fixed, overrides, budget - out.inner_generated, f_tol
        )
        out.inner_generated += report.counts["generated"]
        if exhausted or report.incumbent is None:
            continue
        lo, hi = report.best_value.lo, report.best_value.hi
        enclosure = Interval(-hi, -lo) if maximize else Interval(lo, hi)
        recorded = tape.values[sep.node]
        enclosure = Interval(max(enclosure.lo, recorded.lo), min(enclosure.hi, recorded.hi)) \
            if max(enclosure.lo, recorded.lo) <= min(enclosure.hi, recorded.hi) else enclosure
        for i in free:
            v = report.incumbent[i]
            box[i] = Interval(v, v)
            fixed[i] = v
        overrides[sep.node] = enclosure
        applied = True
    if applied:
        out.task = BoxTask(
            box=tuple(box),
            fixed=tuple(fixed),
            depth=task.depth + 1,
            origin=Origin.SEPARATION,
            overrides=overrides,
            lower=task.lower,
            parent=task.id,
        )
    return out


# ----------------------------------------------------------------------------
# Work loop
# ----------------------------------------------------------------------------


@dataclass
class _Outcome:
    status: Status
    lower: float
    children: list
    candidate: Incumbent | None = None
    inner_generated: int = 0
    degenerate: bool = False


def _process(ctx: _Context, task: BoxTask, incumbent: Incumbent, budget: int) -> _Outcome:
    program = ctx.program
    lower = task.lower
    try:
        tape = record(program, task.box, task.overrides)
    except IntervalError:
        tape = None
    result = None
    if tape is not None:
        out_lo = tape.output.lo
        if out_lo > lower:
            lower = out_lo
        if value_check(tape.output, incumbent.value) is Check.DISCARD:
            return _Outcome(Status.VALUE_ELIMINATED, lower, [])
        try:
            result = reverse_sweep(tape)
        except IntervalError:
            result = None
    if result is not None:
        decision = optimality_check(result, task, ctx.original)
        if decision is Check.DISCARD:
            return _Outcome(Status.OPTIMALITY_ELIMINATED, lower, [])
        if isinstance(decision, FixBoundary):
            child = dataclasses.replace(apply_boundary_fix(task, decision), lower=lower)
            return _Outcome(Status.BOUNDARY_FIXED, lower, [child])
    improved = improve_bound(program, task, incumbent)
    candidate = improved if improved is not incumbent else None
    inner = 0
    degenerate = False
    if ctx.separators and result is not None:
        step = separator_step(ctx, tape, result, task, budget)
        inner = step.inner_generated
        degenerate = step.degenerate
        if step.task is not None:
            child = dataclasses.replace(step.task, lower=lower)
            return _Outcome(Status.SEPARATED, lower, [child], candidate, inner, degenerate)
    try:
        children = bisect(task, ctx.min_width)
    except NothingToSplit:
        return _Outcome(Status.ACTIVE, lower, [], candidate, inner, degenerate)
    children = [dataclasses.replace(c, lower=lower) for c in children]
    return _Outcome(Status.BISECTED, lower, children, candidate, inner, degenerate)


class _Queue:
    def __init__(self, exploration: Exploration):
        self.best_first = exploration is Exploration.BEST_FIRST
        self.items: list = []
        self.seq = itertools.count()

    def __len__(self) -> int:
        return len(self.items)

    def push_all(self, tasks):
        if self.best_first:
            for t in tasks:
                heapq.heappush(self.items, (t.lower, next(self.seq), t))
        else:
            for t in reversed(tasks):
                self.items.append((t.lower, next(self.seq), t))

    def pop(self) -> BoxTask:
        if self.best_first:
            return heapq.heappop(self.items)[2]
        return self.items.pop()[2]

    def min_lower(self) -> float:
        if not self.items:
            return _INF
        if self.best_first:
            return self.items[0][0]
        return min(item[0] for item in self.items)

    def drain(self) -> list:
        if self.best_first:
            items = sorted(self.items)
        else:
            items = list(reversed(self.items))
        self.items = []
        return [item[2] for item in items]


def _run(program, domain, fixed, overrides, config: SolverConfig, min_width, separators):
    """Core loop shared by :func:`solve` and the nested separator solves."""
    counts = {k: 0 for k in COUNT_KEYS}
    ctx = _Context(program, tuple(domain), config, min_width, separators, config.max_nodes)
    trace = [] if config.record_trace else None
    incumbent = Incumbent(None, _INF)
    degenerate = False
    final_lowers = []
    ids = itertools.count()

    root = BoxTask(box=tuple(domain), fixed=tuple(fixed), overrides=dict(overrides), id=next(ids))
    counts["generated"] = 1
    queue = _Queue(config.exploration)
    queue.push_all([root])
    exhausted = False
    tol = config.f_tolerance
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None

    def used() -> int:
        return counts["generated"] + counts["inner_generated"]

    def note(task, status, lower):
        counts[_COUNT_OF[status]] += 1
        if trace is not None:
            trace.append(
                TraceRecord(task.id, task.parent, task.origin, task.depth, task.box, status, lower, incumbent.value)
            )

    try:
        while queue:
            if incumbent.value - queue.min_lower() <= tol:
                break
            if used() >= config.max_nodes:
                exhausted = True
                break
            batch = [queue.pop()]
            while pool is not None and queue and len(batch) < config.workers:
                if incumbent.value - queue.min_lower() <= tol:
                    break
                batch.append(queue.pop())
            budget = config.max_nodes - used()
            if pool is None:
                outcomes = [_process(ctx, batch[0], incumbent, budget)]
            else:
                snapshot = incumbent
                share = max(1, budget // len(batch))
                outcomes = list(pool.map(lambda t: _process(ctx, t, snapshot, share), batch))
            for task, out in zip(batch, outcomes):
                if out.candidate is not None and out.candidate.value < incumbent.value:
                    incumbent = out.candidate
                counts["inner_generated"] += out.inner_generated
                degenerate = degenerate or out.degenerate
                children = []
                for child in out.children:
                    children.append(dataclasses.replace(child, id=next(ids), parent=task.id))
                counts["generated"] += len(children)
                note(task, out.status, out.lower)
                if out.status is Status.ACTIVE:
                    final_lowers.append(out.lower)
                queue.push_all(children)
    finally:
        if pool is not None:
            pool.shutdown()

    for task in queue.drain():
        note(task, Status.ACTIVE, task.lower)
        final_lowers.append(task.lower)

    upper = incumbent.value
    if incumbent.point is not None:
        try:
            # rigorous upper end: interval value at the incumbent point
            point_box = [Interval(v, v) for v in incumbent.point]
            upper = max(upper, record(program, point_box).output.hi)
        except IntervalError:
            pass
    alive = [lo for lo in final_lowers if lo <= incumbent.value]
    lower = min(alive) if alive else upper
    lower = min(lower, upper)
    best = Interval(lower, upper) if upper < _INF or lower < _INF else Interval(-_INF, _INF)

    if exhausted:
        termination = "budget_exhausted"
    elif upper - lower <= tol:
        termination = "converged"
    else:
        termination = "min_width"
    report = SolveReport(
        best_value=best,
        incumbent=incumbent.point,
        incumbent_value=incumbent.value,
        counts=counts,
        termination=termination,
        degenerate=degenerate,
        separators=(),
        trace=None if trace is None else tuple(trace),
    )
    return report, exhausted


_COUNT_OF = {
    Status.ACTIVE: "active_at_exit",
    Status.VALUE_ELIMINATED: "value_eliminated",
    Status.OPTIMALITY_ELIMINATED: "optimality_eliminated",
    Status.BOUNDARY_FIXED: "boundary_fixed",
    Status.SEPARATED: "separated",
    Status.BISECTED: "bisected",
}


def solve(program, domain=None, separators="all", config: SolverConfig | None = None) -> SolveReport:
    """Globally minimise ``program`` over ``domain``.

    Parameters
    ----------
    program : ObjectiveProgram
    domain : sequence of Interval, optional
        Defaults to ``program.default_box``.
    separators : "all", None or sequence of str
        Labels of candidate separators; ``"all"`` takes every separator the
        program declares.  Ignored when ``config.separation`` is False.
    config : SolverConfig, optional

    Returns
    -------
    SolveReport

    Raises
    ------
    BudgetExhausted
        When ``max_nodes`` is reached; the partial report is attached.
    """
    from ._validation import check_box

    config = config or SolverConfig()
    domain = check_box(program.default_box if domain is None else domain, program.dim)
    if separators == "all":
        labels = list(program.separator_labels)
    elif separators is None:
        labels = []
    else:
        labels = list(separators)
        for label in labels:
            program.graph.resolve(label)
    with rounding(config.rounding):
        infos = []
        if config.separation and labels:
            infos = verify_separators(program, domain, labels, config.verify_tolerance)
        usable = sorted(
            (s for s in infos if s.verified), key=lambda s: (len(s.X1), s.node)
        )
        min_width = config.resolved_min_width(domain)
        report, exhausted = _run(
            program, domain, (None,) * len(domain), {}, config, min_width, usable
        )
    report = dataclasses.replace(report, separators=tuple(infos))
    if exhausted:
        raise BudgetExhausted(report)
    return report
