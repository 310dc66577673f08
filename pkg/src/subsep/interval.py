"""Validated interval arithmetic.

Every elemental returns its united extension (the exact range over the
argument intervals).  When outward rounding is enabled, each computed
endpoint is moved by at most one unit in the last place, and only when the
floating-point result is actually inexact: sums, products, quotients and
square roots are checked with error-free transformations (TwoSum and
Dekker's TwoProduct), so exactly representable results such as
``0.5 * 1.0`` stay degenerate.  Transcendental endpoints are always nudged
except at the trivial exact points ``exp(0)``, ``sin(0)`` and ``cos(0)``.

Rounding is a process-wide switch, see :func:`set_rounding` and
:func:`rounding`.

Overflow is absorbed into the enclosure: an upper endpoint may become
``+inf`` and a lower endpoint ``-inf``, but never the other way round, so
``lo`` is always below ``+inf`` and ``hi`` always above ``-inf``.
"""

from __future__ import annotations

import contextlib
import math
from typing import Iterable, Iterator, Sequence

from .exceptions import DivisionByZeroInterval, DomainViolation, InvalidInterval

__all__ = [
    "Interval",
    "EMPTY",
    "binary_op",
    "unary_op",
    "hull",
    "intersect",
    "width",
    "midpoint",
    "contains",
    "vector_width",
    "vector_midpoint",
    "make_box",
    "set_rounding",
    "get_rounding",
    "rounding",
]

_INF = math.inf
_MAX = 1.7976931348623157e308
_HALF_PI = math.pi / 2.0
_TWO_PI = 2.0 * math.pi
# Dekker splitting constant and the magnitude window in which the
# error-free product error term is itself exactly representable.
_SPLIT = 134217729.0
_HUGE = 2.0**995
_TINY = 2.0**-900
_GUARD = 2.0**-50

_ROUND = True

_nextafter = math.nextafter
_exp = math.exp
_sin = math.sin
_cos = math.cos
_sqrt = math.sqrt
_isfinite = math.isfinite
_floor = math.floor
_ceil = math.ceil


def set_rounding(enabled: bool) -> None:
    """Enable or disable outward rounding for all subsequent operations."""
    global _ROUND
    _ROUND = bool(enabled)


def get_rounding() -> bool:
    return _ROUND


@contextlib.contextmanager
def rounding(enabled: bool) -> Iterator[None]:
    """Temporarily switch outward rounding on or off."""
    previous = _ROUND
    set_rounding(enabled)
    try:
        yield
    finally:
        set_rounding(previous)


# ----------------------------------------------------------------------------
# Directed scalar primitives
# ----------------------------------------------------------------------------


def _down(x: float) -> float:
    return _nextafter(x, -_INF)


def _up(x: float) -> float:
    return _nextafter(x, _INF)


def _sum_err(a: float, b: float, s: float) -> float:
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _prod_err(a: float, b: float, p: float):
    """Exact ``a*b - p`` as a float, or ``None`` outside the safe window."""
    if p == 0.0:
        return 0.0 if (a == 0.0 or b == 0.0) else None
    ap = p if p > 0.0 else -p
    if not (_TINY < ap < _HUGE) or not (-_HUGE < a < _HUGE) or not (-_HUGE < b < _HUGE):
        return None
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _add_lo(a: float, b: float) -> float:
    s = a + b
    if not _ROUND or s - s != 0.0:
        return s
    return _down(s) if _sum_err(a, b, s) < 0.0 else s


def _add_hi(a: float, b: float) -> float:
    s = a + b
    if not _ROUND or s - s != 0.0:
        return s
    return _up(s) if _sum_err(a, b, s) > 0.0 else s


def _mul_lo(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not _ROUND or p - p != 0.0:
        return p
    e = _prod_err(a, b, p)
    if e is None or e < 0.0:
        p = _down(p)
        # an underflowed product keeps the sign of the exact one
        if p < 0.0 and (a > 0.0) == (b > 0.0):
            return 0.0
    return p


def _mul_hi(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not _ROUND or p - p != 0.0:
        return p
    e = _prod_err(a, b, p)
    if e is None or e > 0.0:
        p = _up(p)
        if p > 0.0 and (a > 0.0) != (b > 0.0):
            return -0.0
    return p


def _div_dir(a: float, b: float, upward: bool) -> float:
    q = a / b
    if not _ROUND or q - q != 0.0 or b - b != 0.0:
        return q
    pe = _prod_err(q, b, q * b) if q != 0.0 else None
    if pe is None:
        if q == 0.0 and a == 0.0:
            return q
        return _up(q) if upward else _down(q)
    # a - q*b is exact here (Sterbenz), its sign fixes the rounding direction
    r = (a - q * b) - pe
    if r == 0.0:
        return q
    positive = (r > 0.0) == (b > 0.0)
    if upward:
        return _up(q) if positive else q
    return q if positive else _down(q)


def _sqrt_dir(a: float, upward: bool) -> float:
    if a == _INF:
        return _INF
    q = _sqrt(a)
    if not _ROUND or q == 0.0:
        return q
    qq = q * q
    pe = _prod_err(q, q, qq)
    if pe is None:
        return _up(q) if upward else _down(q)
    r = (a - qq) - pe
    if r == 0.0:
        return q
    if upward:
        return _up(q) if r > 0.0 else q
    return q if r > 0.0 else _down(q)


def _pow_dir(x: float, k: int, upward: bool) -> float:
    # x >= 0; repeated squaring with every product rounded the same way
    mul = _mul_hi if upward else _mul_lo
    result = 1.0
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def _safe_exp(x: float) -> float:
    try:
        return _exp(x)
    except OverflowError:
        return _INF


# ----------------------------------------------------------------------------
# Interval type
# ----------------------------------------------------------------------------


def _make(lo: float, hi: float) -> "Interval":
    if lo == _INF:
        lo = _MAX
    if hi == -_INF:
        hi = -_MAX
    if not lo <= hi:
        raise InvalidInterval(f"invalid interval endpoints [{lo}, {hi}]")
    iv = object.__new__(Interval)
    iv.lo = lo
    iv.hi = hi
    return iv


class Interval:
    """Closed interval ``[lo, hi]`` of floats.

    Instances are treated as immutable values.  A degenerate interval
    (``lo == hi``) behaves as the real number it contains; plain floats are
    accepted wherever an interval operand is expected.

    Examples
    --------
    >>> Interval(-1, 2) * Interval(3, 4)
    Interval(-4.0, 8.0)
    >>> Interval(-1, 2).sqr()
    Interval(0.0, 4.0)
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if not lo <= hi:
            raise InvalidInterval(f"invalid interval endpoints [{lo}, {hi}]")
        if lo == _INF or hi == -_INF:
            raise InvalidInterval(f"interval [{lo}, {hi}] holds no real number")
        self.lo = lo
        self.hi = hi

    # -- basic protocol -----------------------------------------------------

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        if isinstance(other, (int, float)):
            return self.lo == other and self.hi == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __reduce__(self):
        return (Interval, (self.lo, self.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return midpoint(self)

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def is_zero(self) -> bool:
        return self.lo == 0.0 and self.hi == 0.0

    def is_finite(self) -> bool:
        return _isfinite(self.lo) and _isfinite(self.hi)

    def subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    # -- binary arithmetic -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Interval):
            return self.shift(other)
        return _make(_add_lo(self.lo, other.lo), _add_hi(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Interval):
            return self.shift(-float(other))
        return _make(_add_lo(self.lo, -other.hi), _add_hi(self.hi, -other.lo))

    def __rsub__(self, other):
        return (-self).shift(other)

    def __mul__(self, other):
        if not isinstance(other, Interval):
            return self.scale(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            other = Interval(other)
        return _div(self, other)

    def __rtruediv__(self, other):
        return _div(Interval(other), self)

    def __neg__(self):
        return _make(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        return self.pow_int(k)

    # -- unary elementals ----------------------------------------------------

    def shift(self, c: float) -> "Interval":
        c = float(c)
        return _make(_add_lo(self.lo, c), _add_hi(self.hi, c))

    def scale(self, c: float) -> "Interval":
        c = float(c)
        if c >= 0.0:
            return _make(_mul_lo(self.lo, c), _mul_hi(self.hi, c))
        return _make(_mul_lo(self.hi, c), _mul_hi(self.lo, c))

    def sqr(self) -> "Interval":
        lo, hi = self.lo, self.hi
        if lo >= 0.0:
            return _make(_mul_lo(lo, lo), _mul_hi(hi, hi))
        if hi <= 0.0:
            return _make(_mul_lo(hi, hi), _mul_hi(lo, lo))
        m = -lo if -lo > hi else hi
        return _make(0.0, _mul_hi(m, m))

    def pow_int(self, k: int) -> "Interval":
        k = int(k)
        if k == 0:
            return _make(1.0, 1.0)
        if k == 1:
            return self
        if k < 0:
            if self.lo <= 0.0 <= self.hi:
                raise DivisionByZeroInterval(
                    f"negative power {k} of an interval containing zero: {self!r}"
                )
            p = self.pow_int(-k)
            if p.lo > 0.0 or p.hi < 0.0:
                return _div(_make(1.0, 1.0), p)
            # the power underflowed to zero: the reciprocal is unbounded
            if self.lo > 0.0 or k % 2 == 0:
                return _make(_div_dir(1.0, p.hi, False) if p.hi > 0.0 else _MAX, _INF)
            return _make(-_INF, _div_dir(1.0, p.lo, True) if p.lo < 0.0 else -_MAX)
        lo, hi = self.lo, self.hi
        if lo >= 0.0:
            return _make(_pow_dir(lo, k, False), _pow_dir(hi, k, True))
        if k % 2 == 1:
            # odd power is increasing: x^k = -(|x|^k) for negative x
            new_lo = -_pow_dir(-lo, k, True)
            new_hi = _pow_dir(hi, k, True) if hi >= 0.0 else -_pow_dir(-hi, k, False)
            return _make(new_lo, new_hi)
        if hi <= 0.0:
            return _make(_pow_dir(-hi, k, False), _pow_dir(-lo, k, True))
        m = -lo if -lo > hi else hi
        return _make(0.0, _pow_dir(m, k, True))

    def exp(self) -> "Interval":
        lo, hi = self.lo, self.hi
        elo = _safe_exp(lo)
        ehi = _safe_exp(hi)
        if _ROUND:
            if lo != 0.0:
                elo = _down(elo)
                if elo < 0.0:
                    elo = 0.0
                elif lo > 0.0 and elo < 1.0:
                    elo = 1.0
            if hi != 0.0:
                ehi = _up(ehi)
                if hi < 0.0 and ehi > 1.0:
                    ehi = 1.0
        return _make(elo, ehi)

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainViolation(f"sqrt of interval with negative part: {self!r}")
        return _make(_sqrt_dir(self.lo, False), _sqrt_dir(self.hi, True))

    def sin(self) -> "Interval":
        return _trig(self, _sin, 1)

    def cos(self) -> "Interval":
        return _trig(self, _cos, 0)


def _mul(a: Interval, b: Interval) -> Interval:
    al, ah, bl, bh = a.lo, a.hi, b.lo, b.hi
    if al >= 0.0:
        if bl >= 0.0:
            return _make(_mul_lo(al, bl), _mul_hi(ah, bh))
        if bh <= 0.0:
            return _make(_mul_lo(ah, bl), _mul_hi(al, bh))
        return _make(_mul_lo(ah, bl), _mul_hi(ah, bh))
    if ah <= 0.0:
        if bl >= 0.0:
            return _make(_mul_lo(al, bh), _mul_hi(ah, bl))
        if bh <= 0.0:
            return _make(_mul_lo(ah, bh), _mul_hi(al, bl))
        return _make(_mul_lo(al, bh), _mul_hi(al, bl))
    if bl >= 0.0:
        return _make(_mul_lo(al, bh), _mul_hi(ah, bh))
    if bh <= 0.0:
        return _make(_mul_lo(ah, bl), _mul_hi(al, bl))
    lo = min(_mul_lo(al, bh), _mul_lo(ah, bl))
    hi = max(_mul_hi(al, bl), _mul_hi(ah, bh))
    return _make(lo, hi)


def _div(a: Interval, b: Interval) -> Interval:
    al, ah, bl, bh = a.lo, a.hi, b.lo, b.hi
    if bl <= 0.0 <= bh:
        raise DivisionByZeroInterval(f"division by interval containing zero: {b!r}")
    if bl > 0.0:
        if al >= 0.0:
            return _make(_div_dir(al, bh, False), _div_dir(ah, bl, True))
        if ah <= 0.0:
            return _make(_div_dir(al, bl, False), _div_dir(ah, bh, True))
        return _make(_div_dir(al, bl, False), _div_dir(ah, bl, True))
    if al >= 0.0:
        return _make(_div_dir(ah, bh, False), _div_dir(al, bl, True))
    if ah <= 0.0:
        return _make(_div_dir(ah, bl, False), _div_dir(al, bh, True))
    return _make(_div_dir(ah, bh, False), _div_dir(al, bh, True))


def _trig(a: Interval, fn, max_residue: int) -> Interval:
    """Range of sin (``max_residue=1``) or cos (``max_residue=0``).

    Maxima sit at ``m*pi/2`` with ``m % 4 == max_residue`` and minima at
    ``m % 4 == max_residue + 2``.  The candidate integers ``m`` are found
    with a small guard band so extrema close to an endpoint are never missed.
    """
    lo, hi = a.lo, a.hi
    if not (_isfinite(lo) and _isfinite(hi)) or hi - lo >= _TWO_PI:
        return _make(-1.0, 1.0)
    v1 = fn(lo)
    v2 = fn(hi)
    if _ROUND:
        # sin(0) and cos(0) are the only endpoint values known to be exact
        d1, u1 = (v1, v1) if lo == 0.0 else (_down(v1), _up(v1))
        d2, u2 = (v2, v2) if hi == 0.0 else (_down(v2), _up(v2))
    else:
        d1 = u1 = v1
        d2 = u2 = v2
    rlo = d1 if d1 < d2 else d2
    rhi = u1 if u1 > u2 else u2
    q_lo = lo / _HALF_PI
    q_hi = hi / _HALF_PI
    m0 = _ceil(q_lo - _GUARD * max(1.0, abs(q_lo)))
    m1 = _floor(q_hi + _GUARD * max(1.0, abs(q_hi)))
    min_residue = (max_residue + 2) % 4
    for m in range(m0, m1 + 1):
        r = m % 4
        if r == max_residue:
            rhi = 1.0
        elif r == min_residue:
            rlo = -1.0
    if rlo < -1.0:
        rlo = -1.0
    if rhi > 1.0:
        rhi = 1.0
    return _make(rlo, rhi)


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(x)


class _Empty:
    """Marker for the empty result of :func:`intersect`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"

    def __bool__(self) -> bool:
        return False


EMPTY = _Empty()


# ----------------------------------------------------------------------------
# Functional interface
# ----------------------------------------------------------------------------

_BINARY = {
    "add": Interval.__add__,
    "sub": Interval.__sub__,
    "mul": _mul,
    "div": _div,
}


def binary_op(op: str, a, b) -> Interval:
    """Apply ``add``, ``sub``, ``mul`` or ``div`` to two intervals."""
    try:
        fn = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown binary op {op!r}; expected one of {sorted(_BINARY)}")
    return fn(_as_interval(a), _as_interval(b))


def unary_op(op: str, a, param=None) -> Interval:
    """Apply a unary elemental.

    ``param`` is the exponent for ``pow_int`` and the constant for
    ``scale`` and ``shift``.
    """
    a = _as_interval(a)
    if op == "neg":
        return -a
    if op in ("exp", "sin", "cos", "sqrt", "sqr"):
        return getattr(a, op)()
    if op in ("pow_int", "scale", "shift"):
        if param is None:
            raise ValueError(f"{op} needs a parameter")
        return getattr(a, op)(param)
    raise ValueError(f"unknown unary op {op!r}")


def hull(a, b) -> Interval:
    a, b = _as_interval(a), _as_interval(b)
    return _make(min(a.lo, b.lo), max(a.hi, b.hi))


def intersect(a, b):
    """Intersection of two intervals, or :data:`EMPTY` when disjoint."""
    a, b = _as_interval(a), _as_interval(b)
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo > hi:
        return EMPTY
    return _make(lo, hi)


def width(a) -> float:
    a = _as_interval(a)
    return a.hi - a.lo


def midpoint(a) -> float:
    """Midpoint that is guaranteed to lie inside ``[lo, hi]``."""
    a = _as_interval(a)
    lo, hi = a.lo, a.hi
    if lo == hi:
        return lo
    if lo == -_INF:
        return 0.0 if hi == _INF else min(0.0, hi)
    if hi == _INF:
        return max(0.0, lo)
    m = 0.5 * lo + 0.5 * hi
    if m < lo:
        return lo
    if m > hi:
        return hi
    return m


def contains(a, x: float) -> bool:
    a = _as_interval(a)
    return a.lo <= x <= a.hi


# ----------------------------------------------------------------------------
# Interval vectors (boxes) are plain tuples of Interval
# ----------------------------------------------------------------------------


def make_box(bounds: Iterable) -> tuple[Interval, ...]:
    """Build a box from intervals or ``(lo, hi)`` pairs."""
    out = []
    for b in bounds:
        if isinstance(b, Interval):
            out.append(b)
        else:
            lo, hi = b
            out.append(Interval(lo, hi))
    return tuple(out)


def vector_width(box: Sequence[Interval]) -> float:
    return max((iv.hi - iv.lo for iv in box), default=0.0)


def vector_midpoint(box: Sequence[Interval]) -> list[float]:
    return [midpoint(iv) for iv in box]
