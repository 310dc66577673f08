"""Objective programs: the benchmark set and a builder for user functions.

A program is a straight-line recording function ``build(rec, x) -> Var``
plus metadata (dimension, default box, separator marks).  The recording is
compiled once into a :class:`~subsep.tape.Graph` and cached, so every
tape of a program has the same node sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

from .exceptions import UnknownBenchmark
from .interval import Interval
from .tape import Graph, Recorder, evaluate_real

__all__ = [
    "Separator",
    "ObjectiveProgram",
    "BENCHMARKS",
    "make",
    "eval_real",
    "salomon_roots",
]


@dataclass(frozen=True)
class Separator:
    """A marked node offered as a structural separator.

    ``x1_hint`` is the index set the author expects the separator to depend
    on; the solver never trusts it and derives the sets by verification.
    """

    label: str
    description: str
    x1_hint: frozenset


@dataclass(frozen=True, eq=False)
class ObjectiveProgram:
    """A scalar objective given as a recordable program.

    Parameters
    ----------
    name : str
    dim : int
    default_box : tuple of Interval
    build : callable
        ``build(rec, x)`` records the function using the handles ``x`` and
        returns the output handle.  Intermediate nodes may be labelled
        with ``rec.mark``.
    separators : tuple of Separator
        Marks that are offered as structural separators.
    presets : mapping of str to box
        Named alternative domains.
    """

    name: str
    dim: int
    default_box: tuple
    build: Callable | None
    separators: tuple = ()
    presets: Mapping = field(default_factory=dict)
    _graph: Graph | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if len(self.default_box) != self.dim:
            raise ValueError("default_box length must equal dim")
        if self.build is None and self._graph is None:
            raise ValueError("either build or a compiled graph is required")

    @cached_property
    def graph(self) -> Graph:
        if self._graph is not None:
            return self._graph
        rec = Recorder(self.dim)
        out = self.build(rec, rec.inputs)
        graph = rec.finish(out)
        for sep in self.separators:
            if sep.label not in graph.marks:
                raise ValueError(f"separator {sep.label!r} is not marked by the program")
        return graph

    @property
    def separator_labels(self) -> list[str]:
        return [s.label for s in self.separators]

    def node(self, label_or_index) -> int:
        return self.graph.resolve(label_or_index)

    def __call__(self, x: Sequence[float]) -> float:
        return eval_real(self, x)

    def sub_program(self, label_or_index, negate: bool = False) -> "ObjectiveProgram":
        """Program whose output is the given intermediate node (negated for maximisation)."""
        node = self.graph.resolve(label_or_index)
        suffix = f"[{label_or_index}]" if not negate else f"[-{label_or_index}]"
        return ObjectiveProgram(
            name=self.name + suffix,
            dim=self.dim,
            default_box=self.default_box,
            build=None,
            _graph=self.graph.truncate(node, negate=negate),
        )

    @classmethod
    def from_function(
        cls,
        name: str,
        dim: int,
        build: Callable,
        box,
        separators: Sequence = (),
    ) -> "ObjectiveProgram":
        """Wrap a user recording function.

        ``box`` is a single ``(lo, hi)`` pair broadcast to every dimension
        or one pair per dimension.  ``separators`` holds labels or
        :class:`Separator` records.
        """
        if len(box) == 2 and not isinstance(box[0], (tuple, list, Interval)):
            box = [box] * dim
        default_box = tuple(b if isinstance(b, Interval) else Interval(*b) for b in box)
        seps = tuple(
            s if isinstance(s, Separator) else Separator(str(s), "user separator", frozenset())
            for s in separators
        )
        return cls(name=name, dim=dim, default_box=default_box, build=build, separators=seps)


# ----------------------------------------------------------------------------
# Benchmarks
# ----------------------------------------------------------------------------


def _build_styblinski_tang(rec, x):
    terms = []
    for i, xi in enumerate(x):
        t = rec.pow_int(xi, 4) - 16.0 * xi.sqr() + 5.0 * xi
        terms.append(rec.mark(f"s{i}", t))
    return 0.5 * rec.sum(terms)


def _build_exponential(rec, x):
    squares = [rec.mark(f"s{i}", xi.sqr()) for i, xi in enumerate(x)]
    return -((-0.5 * rec.sum(squares)).exp())


def _build_recursive_exponential(rec, x):
    # y_0 = 1, so the first step is exp(x_0^2 + 1 - 1) = exp(x_0^2)
    y = x[0].sqr().exp()
    for i in range(1, len(x)):
        rec.mark(f"y{i}", y)
        y = ((x[i].sqr() + y) - 1.0).exp()
    return y


def _build_shubert(rec, x):
    factors = []
    for i, xi in enumerate(x):
        s = rec.sum([(float(j + 1) * xi + float(j)).cos() for j in range(1, 6)])
        factors.append(rec.mark(f"s{i}", s))
    f = factors[0]
    for s in factors[1:]:
        f = f * s
    return f


def _build_salomon(rec, x):
    squares = [rec.mark(f"s{i}", xi.sqr()) for i, xi in enumerate(x)]
    S = rec.mark("S", rec.sum(squares).sqrt())
    return (1.0 - (2.0 * math.pi * S).cos()) + 0.1 * S


def _uniform(lo, hi, n):
    return tuple(Interval(lo, hi) for _ in range(n))


def _styblinski_tang(n):
    return ObjectiveProgram(
        name="styblinski_tang",
        dim=n,
        default_box=_uniform(-5.0, 5.0, n),
        build=_build_styblinski_tang,
        separators=tuple(
            Separator(f"s{i}", f"term x{i}^4 - 16 x{i}^2 + 5 x{i}", frozenset({i}))
            for i in range(n)
        ),
    )


def _exponential(n):
    return ObjectiveProgram(
        name="exponential",
        dim=n,
        default_box=_uniform(-1.0, 1.0, n),
        build=_build_exponential,
        separators=tuple(
            Separator(f"s{i}", f"x{i}^2", frozenset({i})) for i in range(n)
        ),
    )


def _recursive_exponential(n):
    return ObjectiveProgram(
        name="recursive_exponential",
        dim=n,
        default_box=_uniform(-2.1, 2.0, n),
        build=_build_recursive_exponential,
        separators=tuple(
            Separator(f"y{i}", f"y{i} = exp(x{i - 1}^2 + y{i - 1} - 1)", frozenset(range(i)))
            for i in range(1, n)
        ),
        presets={"table": _uniform(-2.1, 2.0, n), "example": _uniform(-2.0, 3.0, n)},
    )


def _shubert(n):
    if n < 2:
        raise ValueError("shubert needs n >= 2")
    return ObjectiveProgram(
        name="shubert",
        dim=n,
        default_box=_uniform(-10.0, 10.0, n),
        build=_build_shubert,
        separators=tuple(
            Separator(f"s{i}", f"sum_j cos((j+1) x{i} + j)", frozenset({i}))
            for i in range(n)
        ),
    )


def _salomon(n):
    # "S" is marked for monotonicity queries but is not a separator:
    # it depends on every input, leaving no variable outside it.
    return ObjectiveProgram(
        name="salomon",
        dim=n,
        default_box=_uniform(-100.0, 100.0, n),
        build=_build_salomon,
        separators=tuple(
            Separator(f"s{i}", f"x{i}^2", frozenset({i})) for i in range(n)
        ),
    )


BENCHMARKS: dict[str, Callable[[int], ObjectiveProgram]] = {
    "styblinski_tang": _styblinski_tang,
    "exponential": _exponential,
    "recursive_exponential": _recursive_exponential,
    "shubert": _shubert,
    "salomon": _salomon,
}

_CACHE: dict = {}


def make(name: str, n: int) -> ObjectiveProgram:
    """Benchmark program ``name`` in dimension ``n``.

    Raises
    ------
    UnknownBenchmark
        If ``name`` is not one of :data:`BENCHMARKS`.
    """
    try:
        factory = BENCHMARKS[name]
    except KeyError:
        raise UnknownBenchmark(
            f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}"
        ) from None
    n = int(n)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    key = (name, n)
    prog = _CACHE.get(key)
    if prog is None:
        prog = _CACHE[key] = factory(n)
    return prog


def eval_real(program, x: Sequence[float]) -> float:
    """Floating-point value of the program at ``x``."""
    return evaluate_real(program.graph if hasattr(program, "graph") else program, x)


_SALOMON_SHIFT = math.asin(-0.1 / (2.0 * math.pi)) / (2.0 * math.pi)


def salomon_roots(z: int) -> tuple[float, float]:
    """Consecutive roots ``(S_{2z-1}, S_{2z})`` of ``2 pi sin(2 pi S) + 0.1``.

    ``S_{2z-1} = z + asin(-0.1/(2 pi))/(2 pi)`` and the returned partner is
    the next root above it, ``z + 1/2 - asin(-0.1/(2 pi))/(2 pi)``, so the
    derivative of the outer Salomon expression keeps one sign in between.
    """
    z = int(z)
    if z < 1:
        raise ValueError("z must be a positive integer")
    return z + _SALOMON_SHIFT, z + 0.5 - _SALOMON_SHIFT
