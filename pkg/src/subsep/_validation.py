"""Input validation helpers shared by the solver, estimator and CLI."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .interval import Interval

__all__ = ["check_box", "check_point", "parse_domain"]


def check_box(box, dim: int | None = None) -> tuple:
    """Coerce ``box`` to a tuple of :class:`Interval`.

    Accepts Interval objects, ``(lo, hi)`` pairs or an ``(n, 2)`` array.
    Raises ``ValueError`` on a wrong length, NaN or reversed bounds.
    """
    if isinstance(box, Interval):
        box = [box]
    out = []
    for item in box:
        if isinstance(item, Interval):
            out.append(item)
            continue
        pair = np.asarray(item, dtype=float).ravel()
        if pair.shape != (2,):
            raise ValueError(f"box component {item!r} is not a (lo, hi) pair")
        lo, hi = float(pair[0]), float(pair[1])
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"invalid box component [{lo}, {hi}]")
        out.append(Interval(lo, hi))
    if not out:
        raise ValueError("box must have at least one component")
    if dim is not None and len(out) != dim:
        raise ValueError(f"box has {len(out)} components, expected {dim}")
    return tuple(out)


def check_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-d float array of length ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError("point must be one-dimensional")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"point has {arr.shape[0]} components, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point must be finite")
    return arr


def parse_domain(text: str, dim: int | None = None) -> tuple:
    """Parse ``"lo:hi[,lo:hi...]"``; a single pair is broadcast to ``dim``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty domain")
    pairs = []
    for p in parts:
        try:
            lo, hi = p.split(":")
            pairs.append((float(lo), float(hi)))
        except ValueError:
            raise ValueError(f"malformed domain component {p!r}; expected lo:hi") from None
    if len(pairs) == 1 and dim is not None:
        pairs = pairs * dim
    return check_box(pairs, dim)
