"""Single assignment code tapes with interval values and interval adjoints.

A program is recorded once into an immutable :class:`Graph` (the SAC: one
elemental per node, predecessors always at lower indices, inputs first,
output last).  :func:`record` runs the natural interval extension of that
graph over a box and returns a :class:`Tape` holding every intermediate
enclosure.  The tape is kept alive so several reverse sweeps with different
seeds can reuse the same forward values.

Reverse sweeps pull contributions: the adjoint of node ``k`` is the sum over
its successors ``j`` (in ascending index order) of ``adj[j] * d phi_j / d v_k``,
with the local partial taken from the recorded interval values.  Fixing the
summation order makes two sweeps over the same subgraph agree bit for bit,
which separator verification relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exceptions import (
    DivisionByZeroInterval,
    DomainViolation,
    IntervalError,
    UnknownLabel,
)
from .interval import Interval

__all__ = [
    "OPCODES",
    "Graph",
    "Recorder",
    "Var",
    "TapeNode",
    "Tape",
    "AdjointResult",
    "record",
    "reverse_sweep",
    "seed_and_sweep",
    "adjoint_of",
    "evaluate_real",
]

# opcode -> arity (None for the n-ary sum)
OPCODES = {
    "input": 0,
    "add": 2,
    "sub": 2,
    "mul": 2,
    "div": 2,
    "neg": 1,
    "exp": 1,
    "sin": 1,
    "cos": 1,
    "sqrt": 1,
    "sqr": 1,
    "pow_int": 1,
    "scale": 1,
    "shift": 1,
    "sum_n": None,
}

_ZERO = Interval(0.0, 0.0)


# ----------------------------------------------------------------------------
# Graph
# ----------------------------------------------------------------------------


class Graph:
    """Immutable SAC of a scalar function of ``n_inputs`` variables."""

    __slots__ = ("ops", "args", "params", "n_inputs", "marks", "succs")

    def __init__(self, ops, args, params, n_inputs, marks=None):
        ops = tuple(ops)
        args = tuple(tuple(a) for a in args)
        params = tuple(params)
        if not (len(ops) == len(args) == len(params)):
            raise ValueError("ops, args and params must have equal length")
        if len(ops) <= n_inputs:
            raise ValueError("graph has no non-input node")
        for j, (op, a) in enumerate(zip(ops, args)):
            if op not in OPCODES:
                raise ValueError(f"unknown opcode {op!r} at node {j}")
            if (j < n_inputs) != (op == "input"):
                raise ValueError(f"node {j}: inputs must be exactly the first {n_inputs} nodes")
            arity = OPCODES[op]
            if arity is None:
                if not a:
                    raise ValueError(f"node {j}: sum_n needs at least one operand")
            elif len(a) != arity:
                raise ValueError(f"node {j}: {op} takes {arity} operands, got {len(a)}")
            if any(not 0 <= i < j for i in a):
                raise ValueError(f"node {j}: predecessors must precede the node")
        self.ops = ops
        self.args = args
        self.params = params
        self.n_inputs = n_inputs
        self.marks = dict(marks or {})
        for label, idx in self.marks.items():
            if not 0 <= idx < len(ops):
                raise ValueError(f"mark {label!r} points outside the graph")
        succs = [[] for _ in ops]
        for j, a in enumerate(args):
            for pos, i in enumerate(a):
                succs[i].append((j, pos))
        self.succs = tuple(tuple(s) for s in succs)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def output_index(self) -> int:
        return len(self.ops) - 1

    def resolve(self, label_or_index) -> int:
        """Node index of a mark label, or the index itself after a range check."""
        if isinstance(label_or_index, str):
            try:
                return self.marks[label_or_index]
            except KeyError:
                raise UnknownLabel(label_or_index) from None
        idx = int(label_or_index)
        if not 0 <= idx < len(self.ops):
            raise UnknownLabel(label_or_index)
        return idx

    def reachable_inputs(self, node: int) -> frozenset:
        """Inputs ``i`` with a backward path from ``node`` (the transitive ``i < node`` relation)."""
        seen = {node}
        stack = [node]
        while stack:
            j = stack.pop()
            for i in self.args[j]:
                if i not in seen:
                    seen.add(i)
                    stack.append(i)
        return frozenset(i for i in seen if i < self.n_inputs)

    def truncate(self, node: int, negate: bool = False) -> "Graph":
        """Graph whose output is ``node`` (optionally negated)."""
        node = self.resolve(node)
        if node < self.n_inputs:
            raise ValueError("cannot truncate at an input node")
        end = node + 1
        ops = list(self.ops[:end])
        args = list(self.args[:end])
        params = list(self.params[:end])
        if negate:
            ops.append("neg")
            args.append((node,))
            params.append(None)
        marks = {k: v for k, v in self.marks.items() if v < end}
        return Graph(ops, args, params, self.n_inputs, marks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.ops == other.ops
            and self.args == other.args
            and self.params == other.params
            and self.n_inputs == other.n_inputs
            and self.marks == other.marks
        )

    def __hash__(self) -> int:
        return hash((self.ops, self.args, self.params, self.n_inputs))


# ----------------------------------------------------------------------------
# Recording by operator overloading
# ----------------------------------------------------------------------------


class Var:
    """Handle to a recorded node; arithmetic on handles appends new nodes."""

    __slots__ = ("rec", "index")

    def __init__(self, rec: "Recorder", index: int):
        self.rec = rec
        self.index = index

    def __repr__(self) -> str:
        return f"Var({self.index}, {self.rec.ops[self.index]})"

    def _other(self, other):
        if isinstance(other, Var):
            if other.rec is not self.rec:
                raise ValueError("cannot mix handles from different recorders")
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return self.rec.emit("shift", (self.index,), float(other))
        return self.rec.emit("add", (self.index, o.index))

    def __radd__(self, other):
        return self.rec.emit("shift", (self.index,), float(other))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return self.rec.emit("shift", (self.index,), -float(other))
        return self.rec.emit("sub", (self.index, o.index))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return self.rec.emit("scale", (self.index,), float(other))
        return self.rec.emit("mul", (self.index, o.index))

    def __rmul__(self, other):
        return self.rec.emit("scale", (self.index,), float(other))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return self.rec.emit("scale", (self.index,), 1.0 / float(other))
        return self.rec.emit("div", (self.index, o.index))

    def __neg__(self):
        return self.rec.emit("neg", (self.index,))

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers can be recorded")
        if k == 2:
            return self.rec.emit("sqr", (self.index,))
        return self.rec.emit("pow_int", (self.index,), k)

    def exp(self):
        return self.rec.emit("exp", (self.index,))

    def sin(self):
        return self.rec.emit("sin", (self.index,))

    def cos(self):
        return self.rec.emit("cos", (self.index,))

    def sqrt(self):
        return self.rec.emit("sqrt", (self.index,))

    def sqr(self):
        return self.rec.emit("sqr", (self.index,))


class Recorder:
    """Collects elementals into a :class:`Graph`.

    >>> rec = Recorder(2)
    >>> x0, x1 = rec.inputs
    >>> g = rec.finish(x0 * x1 + x0)
    >>> g.ops
    ('input', 'input', 'mul', 'add')
    """

    def __init__(self, n_inputs: int):
        if n_inputs < 1:
            raise ValueError("a program needs at least one input")
        self.n_inputs = n_inputs
        self.ops: list[str] = []
        self.args: list[tuple] = []
        self.params: list = []
        self.marks: dict[str, int] = {}
        self.inputs = [self.emit("input", ()) for _ in range(n_inputs)]

    def emit(self, op: str, args: tuple, param=None) -> Var:
        self.ops.append(op)
        self.args.append(tuple(args))
        self.params.append(param)
        return Var(self, len(self.ops) - 1)

    def sum(self, terms: Sequence[Var]) -> Var:
        terms = list(terms)
        if not terms:
            raise ValueError("sum of no terms")
        return self.emit("sum_n", tuple(t.index for t in terms))

    def pow_int(self, v: Var, k: int) -> Var:
        return self.emit("pow_int", (v.index,), int(k))

    def mark(self, label: str, v: Var) -> Var:
        if label in self.marks:
            raise ValueError(f"duplicate mark {label!r}")
        if v.index < self.n_inputs:
            raise ValueError("marks must name intermediate nodes, not inputs")
        self.marks[label] = v.index
        return v

    def finish(self, output: Var) -> Graph:
        if output.index != len(self.ops) - 1:
            # the output must be the last node of the SAC
            output = self.emit("shift", (output.index,), 0.0)
        return Graph(self.ops, self.args, self.params, self.n_inputs, self.marks)


# ----------------------------------------------------------------------------
# Interval forward sweep
# ----------------------------------------------------------------------------


def _fwd(op, v, a, param):
    if op == "add":
        return v[a[0]] + v[a[1]]
    if op == "mul":
        return v[a[0]] * v[a[1]]
    if op == "sqr":
        return v[a[0]].sqr()
    if op == "scale":
        return v[a[0]].scale(param)
    if op == "shift":
        return v[a[0]].shift(param)
    if op == "sum_n":
        acc = v[a[0]]
        for i in a[1:]:
            acc = acc + v[i]
        return acc
    if op == "sub":
        return v[a[0]] - v[a[1]]
    if op == "exp":
        return v[a[0]].exp()
    if op == "cos":
        return v[a[0]].cos()
    if op == "sin":
        return v[a[0]].sin()
    if op == "neg":
        return -v[a[0]]
    if op == "sqrt":
        return v[a[0]].sqrt()
    if op == "pow_int":
        return v[a[0]].pow_int(param)
    if op == "div":
        return v[a[0]] / v[a[1]]
    raise ValueError(f"unknown opcode {op!r}")


def _partial(op, v, a, param, j, pos):
    """Local interval partial of node ``j`` w.r.t. its ``pos``-th operand.

    Constant partials are returned as floats so the caller can skip the
    multiplication for +-1.
    """
    if op in ("add", "shift", "sum_n"):
        return 1.0
    if op == "mul":
        return v[a[1 - pos]]
    if op == "sqr":
        return v[a[0]].scale(2.0)
    if op == "scale":
        return float(param)
    if op == "sub":
        return 1.0 if pos == 0 else -1.0
    if op == "neg":
        return -1.0
    if op == "exp":
        return v[j]
    if op == "cos":
        return -v[a[0]].sin()
    if op == "sin":
        return v[a[0]].cos()
    if op == "sqrt":
        s = v[j]
        if s.lo > 0.0:
            return 1.0 / s.scale(2.0)
        if s.hi == 0.0:
            raise DivisionByZeroInterval("derivative of sqrt at 0 is unbounded")
        # d sqrt(u)/du = 1/(2 sqrt(u)) is unbounded as u -> 0+
        return _sqrt_partial_unbounded(s)
    if op == "pow_int":
        k = int(param)
        return v[a[0]].pow_int(k - 1).scale(float(k))
    if op == "div":
        b = v[a[1]]
        if pos == 0:
            return 1.0 / b
        return -(v[a[0]] / b.sqr())
    raise ValueError(f"opcode {op!r} has no partials")


def _sqrt_partial_unbounded(s: Interval) -> Interval:
    # s = sqrt(u) with s.lo == 0 < s.hi: range of 1/(2 s) is [1/(2 s.hi), inf)
    lo = (1.0 / Interval(s.hi).scale(2.0)).lo if s.hi != math.inf else 0.0
    return Interval(lo, math.inf)


@dataclass(frozen=True)
class TapeNode:
    """Read-only view of one tape entry."""

    op: str
    preds: tuple
    param: object
    value: Interval
    adjoint: Interval


@dataclass(frozen=True)
class AdjointResult:
    """Snapshot of one reverse sweep.

    ``input_adjoints[i]`` encloses ``seed * d(seed node)/dx_i`` over the box.
    """

    input_adjoints: tuple
    all_adjoints: tuple
    seed_node: int
    seed: Interval

    def __getitem__(self, node: int) -> Interval:
        return self.all_adjoints[node]


class Tape:
    """Forward-evaluated SAC over one box.

    A tape (and the adjoints it holds) is mutated by sweeps, so it must be
    used by one worker at a time; separate tapes are independent.
    """

    def __init__(self, graph: Graph, values: list, box: tuple):
        self.graph = graph
        self.values = values
        self.box = box
        self.adjoints = [_ZERO] * len(values)
        self.sweeps = 0
        self._partials: dict = {}

    @property
    def n_inputs(self) -> int:
        return self.graph.n_inputs

    @property
    def output_index(self) -> int:
        return self.graph.output_index

    @property
    def marks(self) -> dict:
        return self.graph.marks

    @property
    def output(self) -> Interval:
        return self.values[-1]

    @property
    def nodes(self) -> list[TapeNode]:
        g = self.graph
        return [
            TapeNode(g.ops[j], g.args[j], g.params[j], self.values[j], self.adjoints[j])
            for j in range(len(g))
        ]

    def value_of(self, label_or_index) -> Interval:
        return self.values[self.graph.resolve(label_or_index)]

    def _get_partial(self, j: int, pos: int):
        key = (j, pos)
        p = self._partials.get(key)
        if p is None:
            g = self.graph
            try:
                p = _partial(g.ops[j], self.values, g.args[j], g.params[j], j, pos)
            except IntervalError as exc:
                exc.node = j
                raise
            self._partials[key] = p
        return p

    def _sweep(self, seed_node: int, seed: Interval) -> AdjointResult:
        succs = self.graph.succs
        adj = [_ZERO] * len(self.values)
        adj[seed_node] = seed
        get_partial = self._get_partial
        for k in range(seed_node - 1, -1, -1):
            acc = None
            for j, pos in succs[k]:
                if j > seed_node:
                    break
                aj = adj[j]
                if aj.lo == 0.0 and aj.hi == 0.0:
                    continue
                p = get_partial(j, pos)
                if p.__class__ is float:
                    if p == 1.0:
                        c = aj
                    elif p == -1.0:
                        c = -aj
                    else:
                        c = aj.scale(p)
                else:
                    c = aj * p
                acc = c if acc is None else acc + c
            if acc is not None:
                adj[k] = acc
        self.adjoints = adj
        self.sweeps += 1
        n = self.graph.n_inputs
        return AdjointResult(tuple(adj[:n]), tuple(adj), seed_node, seed)


def _box_of(box) -> tuple:
    out = []
    for b in box:
        if isinstance(b, Interval):
            out.append(b)
        elif isinstance(b, (tuple, list)):
            out.append(Interval(*b))
        else:
            out.append(Interval(b))
    return tuple(out)


def _graph_of(program) -> Graph:
    return program if isinstance(program, Graph) else program.graph


def record(program, box, overrides: Mapping[int, Interval] | None = None) -> Tape:
    """Forward interval sweep of ``program`` over ``box``.

    Parameters
    ----------
    program : ObjectiveProgram or Graph
    box : sequence of Interval
        One interval per input.
    overrides : mapping of node index to Interval, optional
        Replace the computed enclosure of these nodes by the given
        interval before it is used downstream.  The solver uses this to pin
        a separator to the enclosure of its inner optimum.

    Raises
    ------
    DivisionByZeroInterval, DomainViolation
        With ``node`` set to the failing node index.
    """
    g = _graph_of(program)
    box = _box_of(box)
    n = g.n_inputs
    if len(box) != n:
        raise ValueError(f"box has {len(box)} components, program expects {n}")
    values = list(box) + [None] * (len(g) - n)
    ops, args, params = g.ops, g.args, g.params
    j = n
    try:
        if overrides:
            for j in range(n, len(ops)):
                ov = overrides.get(j)
                values[j] = ov if ov is not None else _fwd(ops[j], values, args[j], params[j])
        else:
            for j in range(n, len(ops)):
                values[j] = _fwd(ops[j], values, args[j], params[j])
    except IntervalError as exc:
        exc.node = j
        raise
    return Tape(g, values, box)


def reverse_sweep(tape: Tape, seed: Interval | float = 1.0) -> AdjointResult:
    """Interval adjoints of all nodes w.r.t. the output, seeded with ``seed``."""
    if not isinstance(seed, Interval):
        seed = Interval(seed)
    return tape._sweep(tape.output_index, seed)


def seed_and_sweep(tape: Tape, seed_node, seed: Interval | float) -> AdjointResult:
    """Reverse sweep started at an intermediate node.

    All adjoints are reset to zero, ``seed_node`` receives ``seed`` and
    contributions propagate only downward from it.  Inputs with no
    backward path to ``seed_node`` end up exactly zero.
    """
    idx = tape.graph.resolve(seed_node)
    if not isinstance(seed, Interval):
        seed = Interval(seed)
    return tape._sweep(idx, seed)


def adjoint_of(tape: Tape, result: AdjointResult, label_or_index) -> Interval:
    """Adjoint interval of a marked or indexed node, e.g. ``df/ds`` for a separator."""
    return result.all_adjoints[tape.graph.resolve(label_or_index)]


# ----------------------------------------------------------------------------
# Real evaluation of the same SAC
# ----------------------------------------------------------------------------


def _real(op, v, a, param):
    if op == "add":
        return v[a[0]] + v[a[1]]
    if op == "mul":
        return v[a[0]] * v[a[1]]
    if op == "sqr":
        x = v[a[0]]
        return x * x
    if op == "scale":
        return v[a[0]] * param
    if op == "shift":
        return v[a[0]] + param
    if op == "sum_n":
        acc = v[a[0]]
        for i in a[1:]:
            acc = acc + v[i]
        return acc
    if op == "sub":
        return v[a[0]] - v[a[1]]
    if op == "exp":
        try:
            return math.exp(v[a[0]])
        except OverflowError:
            return math.inf
    if op == "cos":
        return math.cos(v[a[0]])
    if op == "sin":
        return math.sin(v[a[0]])
    if op == "neg":
        return -v[a[0]]
    if op == "sqrt":
        x = v[a[0]]
        if x < 0.0:
            raise DomainViolation(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    if op == "pow_int":
        x = v[a[0]]
        k = int(param)
        if k < 0 and x == 0.0:
            raise DivisionByZeroInterval("negative power of zero")
        try:
            return x**k
        except OverflowError:
            return math.copysign(math.inf, x) if k % 2 else math.inf
    if op == "div":
        b = v[a[1]]
        if b == 0.0:
            raise DivisionByZeroInterval("division by zero")
        return v[a[0]] / b
    raise ValueError(f"unknown opcode {op!r}")


def evaluate_real(program, x: Sequence[float], upto: int | None = None) -> float:
    """Floating-point evaluation of the SAC at the point ``x``.

    ``upto`` returns the value of that node instead of the output.
    """
    g = _graph_of(program)
    n = g.n_inputs
    if len(x) != n:
        raise ValueError(f"point has {len(x)} components, program expects {n}")
    v = [float(xi) for xi in x] + [0.0] * (len(g) - n)
    ops, args, params = g.ops, g.args, g.params
    end = len(ops) if upto is None else upto + 1
    j = n
    try:
        for j in range(n, end):
            v[j] = _real(ops[j], v, args[j], params[j])
    except IntervalError as exc:
        exc.node = j
        raise
    return v[end - 1]
