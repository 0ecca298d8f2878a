"""Finite mixtures of constant-density segments (R^2) and step densities (R^1).

A measure is a finite list of components, each carrying a constant density
along its support.  Ball masses are computed exactly by clipping each
component against the open ball: half-plane clipping for the square and
diamond balls, a quadratic chord solve for the round ball, and interval
overlap in one dimension.  Balls are open, so support lying exactly on the
ball boundary contributes nothing; the parallel-edge predicate is evaluated
before any division so that dyadic configurations resolve exactly.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MIN_RADIUS = 1e-12

Point = tuple[float, ...]


class PNorm(Enum):
    """Shape of the reference ball: diamond, disc or square."""

    ONE = "l1"
    TWO = "l2"
    INF = "linf"

    @classmethod
    def parse(cls, text: str) -> "PNorm":
        key = text.strip().lower()
        aliases = {
            "1": cls.ONE, "l1": cls.ONE, "one": cls.ONE,
            "2": cls.TWO, "l2": cls.TWO, "two": cls.TWO,
            "inf": cls.INF, "linf": cls.INF, "infinity": cls.INF, "max": cls.INF,
        }
        if key not in aliases:
            raise ValueError(f"unknown norm {text!r}; expected one of l1, l2, linf")
        return aliases[key]


def as_point(coords: Sequence[float]) -> Point:
    """Validate and normalise a coordinate sequence to a finite 1-D/2-D point."""
    pt = tuple(float(c) for c in coords)
    if len(pt) not in (1, 2):
        raise ValueError(f"points must have 1 or 2 coordinates, got {len(pt)}")
    if not all(math.isfinite(c) for c in pt):
        raise ValueError(f"point coordinates must be finite, got {pt}")
    return pt


@dataclass(frozen=True)
class Ball:
    """Open ball: center + radius in the chosen norm (norm is moot in 1-D)."""

    center: Point
    radius: float
    norm: PNorm = PNorm.INF

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0.0):
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        if self.radius < MIN_RADIUS:
            raise ValueError(f"ball radius {self.radius} underflows the {MIN_RADIUS} guard")


@dataclass(frozen=True)
class SegmentComponent:
    """Straight segment in R^2 with constant mass density per unit length."""

    a: Point
    b: Point
    density: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if len(self.a) != 2 or len(self.b) != 2:
            raise ValueError("segment endpoints must be 2-D")
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")
        if not (self.density >= 0.0 and math.isfinite(self.density)):
            raise ValueError(f"segment density must be finite and >= 0, got {self.density}")

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def mass(self) -> float:
        return self.density * self.length


@dataclass(frozen=True)
class IntervalComponent:
    """Interval on R with constant density (height) against Lebesgue measure."""

    lo: float
    hi: float
    height: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"interval needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.height >= 0.0 and math.isfinite(self.height)):
            raise ValueError(f"interval height must be finite and >= 0, got {self.height}")

    @property
    def mass(self) -> float:
        return self.height * (self.hi - self.lo)


Component = SegmentComponent | IntervalComponent


@dataclass(frozen=True)
class Measure:
    """Finite ordered mixture of components; finite on bounded sets by construction."""

    dim: int
    components: tuple[Component, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dim}")
        object.__setattr__(self, "components", tuple(self.components))
        want = IntervalComponent if self.dim == 1 else SegmentComponent
        for comp in self.components:
            if not isinstance(comp, want):
                raise ValueError(
                    f"dimension-{self.dim} measures take {want.__name__} components, "
                    f"got {type(comp).__name__}"
                )
        if self.dim == 1:
            ordered = sorted(self.components, key=lambda c: c.lo)
            for left, right in zip(ordered, ordered[1:]):
                if right.lo < left.hi:
                    raise ValueError(
                        f"interval components overlap: [{left.lo}, {left.hi}] and "
                        f"[{right.lo}, {right.hi}]"
                    )

    @cached_property
    def total_mass_value(self) -> float:
        total = 0.0
        for comp in self.components:
            total += comp.mass
        return total

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        """Per-axis (lo, hi) bounds of the support; zeros for an empty mixture."""
        if not self.components:
            return tuple((0.0, 0.0) for _ in range(self.dim))
        if self.dim == 1:
            return ((min(c.lo for c in self.components), max(c.hi for c in self.components)),)
        xs = [v for c in self.components for v in (c.a[0], c.b[0])]
        ys = [v for c in self.components for v in (c.a[1], c.b[1])]
        return ((min(xs), max(xs)), (min(ys), max(ys)))


def segment_measure(components: Iterable[SegmentComponent], label: str = "") -> Measure:
    return Measure(dim=2, components=tuple(components), label=label)


def interval_measure(components: Iterable[IntervalComponent], label: str = "") -> Measure:
    return Measure(dim=1, components=tuple(components), label=label)


# ---------------------------------------------------------------------------
# Geometric clipping kernel
#
# Every routine is vectorised over ball centers (and, broadcast with them,
# radii); a single-ball query is the one-element case of the same code path,
# so scalar and grid evaluations agree bit for bit.

def _clip_halfplane(lo: np.ndarray, hi: np.ndarray, g0: np.ndarray, g1: float):
    """Intersect parameter windows [lo, hi] with the open half-plane g0 + t*g1 < 0.

    g1 is constant per segment/edge pair.  g1 == 0 means the segment runs
    parallel to the edge; the open half-plane then keeps it only when it is
    strictly inside, which kills boundary-collinear segments exactly.
    """
    if g1 > 0.0:
        hi = np.minimum(hi, g0 / -g1)
    elif g1 < 0.0:
        lo = np.maximum(lo, g0 / -g1)
    else:
        hi = np.where(g0 < 0.0, hi, lo)
    return lo, hi


def _chords_box(ax, ay, dx, dy, cx, cy, r):
    lo = np.zeros_like(cx)
    hi = np.ones_like(cx)
    lo, hi = _clip_halfplane(lo, hi, (ax - cx) - r, dx)
    lo, hi = _clip_halfplane(lo, hi, (cx - ax) - r, -dx)
    lo, hi = _clip_halfplane(lo, hi, (ay - cy) - r, dy)
    lo, hi = _clip_halfplane(lo, hi, (cy - ay) - r, -dy)
    return np.maximum(hi - lo, 0.0)


def _chords_diamond(ax, ay, dx, dy, cx, cy, r):
    lo = np.zeros_like(cx)
    hi = np.ones_like(cx)
    for sx, sy in ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)):
        g0 = sx * (ax - cx) + sy * (ay - cy) - r
        g1 = sx * dx + sy * dy
        lo, hi = _clip_halfplane(lo, hi, g0, g1)
    return np.maximum(hi - lo, 0.0)


def _chords_disc(ax, ay, dx, dy, cx, cy, r):
    px = ax - cx
    py = ay - cy
    qa = dx * dx + dy * dy
    qb = 2.0 * (px * dx + py * dy)
    qc = px * px + py * py - r * r
    disc = qb * qb - 4.0 * qa * qc
    inside = disc > 0.0
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum((-qb - root) / (2.0 * qa), 0.0)
    hi = np.minimum((-qb + root) / (2.0 * qa), 1.0)
    return np.where(inside, np.maximum(hi - lo, 0.0), 0.0)


_CHORD_FNS = {PNorm.INF: _chords_box, PNorm.ONE: _chords_diamond, PNorm.TWO: _chords_disc}


def _segment_chords(seg: SegmentComponent, cx, cy, r, norm: PNorm) -> np.ndarray:
    dx = seg.b[0] - seg.a[0]
    dy = seg.b[1] - seg.a[1]
    t_span = _CHORD_FNS[norm](seg.a[0], seg.a[1], dx, dy, cx, cy, r)
    return t_span * math.hypot(dx, dy)


def ball_masses_at(
    measure: Measure,
    centers,
    radii,
    norm: PNorm = PNorm.INF,
) -> np.ndarray:
    """Masses of open balls at many centers (radii broadcast against centers).

    The sum runs over components in list order for every center, so the
    result is independent of how callers batch or parallelise the centers.
    """
    pts = np.asarray(centers, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, measure.dim)
    if pts.ndim != 2 or pts.shape[1] != measure.dim:
        raise ValueError(f"centers must have shape (n, {measure.dim}), got {pts.shape}")
    r = np.broadcast_to(np.asarray(radii, dtype=float), (pts.shape[0],))
    if not (r > 0.0).all():
        raise ValueError("ball radii must be positive")
    if (r < MIN_RADIUS).any():
        raise ValueError(f"ball radii must stay above the {MIN_RADIUS} underflow guard")

    total = np.zeros(pts.shape[0])
    if measure.dim == 1:
        c = pts[:, 0]
        for comp in measure.components:
            overlap = np.minimum(comp.hi, c + r) - np.maximum(comp.lo, c - r)
            total += comp.height * np.maximum(overlap, 0.0)
        return total
    cx = pts[:, 0]
    cy = pts[:, 1]
    for comp in measure.components:
        total += comp.density * _segment_chords(comp, cx, cy, r, norm)
    return total


def ball_mass(measure: Measure, ball: Ball) -> float:
    """Exact mass of the open ball under the mixture."""
    if len(ball.center) != measure.dim:
        raise ValueError(
            f"ball center dimension {len(ball.center)} does not match measure dimension {measure.dim}"
        )
    return float(ball_masses_at(measure, [ball.center], ball.radius, ball.norm)[0])


def segment_clip_length(segment: SegmentComponent, ball: Ball) -> float:
    """Euclidean length of the segment inside the open ball."""
    if len(ball.center) != 2:
        raise ValueError("segment clipping needs a 2-D ball")
    cx = np.array([ball.center[0]])
    cy = np.array([ball.center[1]])
    r = np.array([ball.radius])
    return float(_segment_chords(segment, cx, cy, r, ball.norm)[0])


def total_mass(measure: Measure) -> float:
    """Sum of component masses."""
    return measure.total_mass_value


def support_contains(
    measure: Measure,
    x: Sequence[float],
    probe_radius: float,
    norm: PNorm = PNorm.INF,
) -> bool:
    """True iff the open probe ball around x carries positive mass.

    Callers approximating topological support membership should probe at the
    smallest radius they intend to use downstream.
    """
    if not probe_radius > 0.0:
        raise ValueError("probe radius must be positive")
    return ball_mass(measure, Ball(as_point(x), probe_radius, norm)) > 0.0


# ---------------------------------------------------------------------------
# JSON serialisation
#
# Schema: {"dim": 1|2, "label": str, "components": [
#   {"type": "segment", "a": [x, y], "b": [x, y], "density": w} |
#   {"type": "interval", "lo": l, "hi": h, "height": g}]}
# Floats are emitted with repr precision, which round-trips exactly.

def measure_to_dict(measure: Measure) -> dict:
    comps = []
    for comp in measure.components:
        if isinstance(comp, SegmentComponent):
            comps.append({
                "type": "segment",
                "a": list(comp.a),
                "b": list(comp.b),
                "density": comp.density,
            })
        else:
            comps.append({
                "type": "interval",
                "lo": comp.lo,
                "hi": comp.hi,
                "height": comp.height,
            })
    return {"dim": measure.dim, "label": measure.label, "components": comps}


def measure_from_dict(data: dict) -> Measure:
    comps: list[Component] = []
    for raw in data["components"]:
        kind = raw["type"]
        if kind == "segment":
            comps.append(SegmentComponent(tuple(raw["a"]), tuple(raw["b"]), float(raw["density"])))
        elif kind == "interval":
            comps.append(IntervalComponent(float(raw["lo"]), float(raw["hi"]), float(raw["height"])))
        else:
            raise ValueError(f"unknown component type {kind!r}")
    return Measure(dim=int(data["dim"]), components=tuple(comps), label=str(data.get("label", "")))


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file plus rename so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_measure(measure: Measure, path: str) -> None:
    write_text_atomic(path, json.dumps(measure_to_dict(measure), indent=2) + "\n")


def load_measure(path: str) -> Measure:
    with open(path) as handle:
        return measure_from_dict(json.load(handle))
