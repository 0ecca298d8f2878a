"""Ratio traces over shrinking radii and three-valued mode classification.

The r -> 0 limits in the mode definitions are estimated from a finite,
strictly decreasing radius schedule: the largest and smallest ratios over the
last ``tail_window`` rows stand in for limsup and liminf.  Verdicts are
three-valued; when the tail straddles the decision threshold the honest
answer is Inconclusive rather than a forced guess.  All classifications are
pure functions of their arguments, and suprema over point sets are plain
maxima, so results do not depend on evaluation order or batching.

Suprema over the whole space are approximated by suprema over a caller
declared finite grid; suprema over a translation set by its finite sample.
Verdicts are therefore statements about the sample, never about the
untestable dense set itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .measure import (
    MIN_RADIUS,
    Ball,
    Measure,
    PNorm,
    as_point,
    ball_mass,
    ball_masses_at,
)

DEFAULT_TOL = 1e-6

MAX_GRID_POINTS = 5_000_000


class NotInSupportError(Exception):
    """The candidate point carries no mass at a probed radius."""


class EmptySampleError(Exception):
    """A translation set or search grid materialised to no points."""


class Status(Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RadiusSchedule:
    """Strictly decreasing radii standing in for the r -> 0 limit."""

    radii: tuple[float, ...]
    tail_window: int = 6

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise ValueError("schedule needs at least one radius")
        if any(r2 >= r1 for r1, r2 in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        if radii[-1] < MIN_RADIUS:
            raise ValueError(f"smallest radius {radii[-1]} underflows the {MIN_RADIUS} guard")
        if self.tail_window < 3:
            raise ValueError("tail window must be at least 3")
        if self.tail_window > len(radii):
            raise ValueError("tail window cannot exceed the schedule length")

    @classmethod
    def dyadic(cls, r0: float = 0.5, levels: int = 24, tail_window: int = 6) -> "RadiusSchedule":
        """r0, r0/2, ..., r0 * 2^-levels."""
        return cls(tuple(r0 * 2.0 ** -k for k in range(levels + 1)), tail_window)

    @classmethod
    def band(cls, first: int = 1, last: int = 6, tail_window: int | None = None) -> "RadiusSchedule":
        """Midpoints 1.25 * 2^-(n+1) of the dyadic bands (2^-(n+1), 1.5 * 2^-(n+1)).

        Sampling band midpoints rather than endpoints keeps every radius
        strictly inside the open interval on which piecewise-constant ball
        masses hold, away from critical radii where the mass jumps.
        """
        if last < first:
            raise ValueError("band schedule needs first <= last")
        radii = tuple(1.25 * 2.0 ** -(n + 1) for n in range(first, last + 1))
        window = tail_window if tail_window is not None else len(radii)
        return cls(radii, window)

    @property
    def min_radius(self) -> float:
        return self.radii[-1]

    @property
    def max_radius(self) -> float:
        return self.radii[0]


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned lattice: per-axis (lo, hi) bounds and a common spacing."""

    box: tuple[tuple[float, float], ...]
    spacing: float

    def __post_init__(self) -> None:
        if not self.spacing > 0.0:
            raise ValueError("grid spacing must be positive")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        if len(box) not in (1, 2) or any(hi < lo for lo, hi in box):
            raise ValueError(f"bad grid box {box}")

    def points(self) -> np.ndarray:
        axes = []
        count = 1
        for lo, hi in self.box:
            n = int(math.floor((hi - lo) / self.spacing + 1e-9)) + 1
            axes.append(lo + self.spacing * np.arange(n))
            count *= n
        if count > MAX_GRID_POINTS:
            raise ValueError(
                f"grid would materialise {count} points (cap {MAX_GRID_POINTS}); "
                "pass a coarser spacing or smaller box"
            )
        if len(axes) == 1:
            return axes[0].reshape(-1, 1)
        gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class TranslationSet:
    """Finite stand-in for a translation set: explicit points and/or a lattice.

    ``dense_intent`` records that the sample represents a topologically dense
    set; conclusions about the dense set itself remain analytic, not numeric.
    """

    explicit: tuple[tuple[float, ...], ...] = ()
    grid: GridSpec | None = None
    dense_intent: bool = False

    def __post_init__(self) -> None:
        pts = tuple(as_point(p) for p in self.explicit)
        object.__setattr__(self, "explicit", pts)

    def materialize(self, dim: int) -> np.ndarray:
        parts = []
        if self.explicit:
            arr = np.array(self.explicit, dtype=float)
            if arr.shape[1] != dim:
                raise ValueError(f"explicit points have dimension {arr.shape[1]}, expected {dim}")
            parts.append(arr)
        if self.grid is not None:
            pts = self.grid.points()
            if pts.shape[1] != dim:
                raise ValueError(f"grid has dimension {pts.shape[1]}, expected {dim}")
            parts.append(pts)
        if not parts:
            raise EmptySampleError("translation set materialised to no points")
        return np.vstack(parts)


def search_grid_for(measure: Measure, schedule: RadiusSchedule, spacing: float | None = None) -> TranslationSet:
    """Grid covering the support bounding box inflated by the largest radius.

    The default spacing, a quarter of the smallest scheduled radius, resolves
    variation of the ball mass at the finest scale probed; it is usually far
    too fine to be affordable, so serious callers pass spacing explicitly.
    """
    pad = schedule.max_radius
    if spacing is None:
        spacing = schedule.min_radius / 4.0
    box = tuple((lo - pad, hi + pad) for lo, hi in measure.bounding_box())
    return TranslationSet(grid=GridSpec(box=box, spacing=spacing))


@dataclass(frozen=True)
class TraceRow:
    r: float
    f_num: float
    f_den: float

    @property
    def ratio(self) -> float:
        return self.f_num / self.f_den


@dataclass(frozen=True)
class RatioTrace:
    """Per-radius evidence: numerator mass, denominator mass f(u, r), ratio."""

    u: tuple[float, ...]
    z_descriptor: tuple[float, ...] | str
    rows: tuple[TraceRow, ...]

    def ratios(self) -> list[float]:
        return [row.ratio for row in self.rows]

    def tail(self, window: int) -> list[float]:
        if window > len(self.rows):
            raise ValueError(f"trace has {len(self.rows)} rows, tail window {window} too long")
        return self.ratios()[-window:]


@dataclass(frozen=True)
class LimitEstimate:
    limit_est: float
    limsup_est: float
    liminf_est: float
    inconclusive: bool


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome with tail limsup/liminf estimates and evidence."""

    status: Status
    limsup_est: float
    liminf_est: float
    tol: float
    evidence: tuple[RatioTrace, ...] = ()
    worst_translate: tuple[float, ...] | None = None

    def to_json_dict(self, trace_file: str | None = None) -> dict:
        return {
            "status": self.status.value,
            "limsup_est": self.limsup_est,
            "liminf_est": self.liminf_est,
            "tol": self.tol,
            "worst_translate": list(self.worst_translate) if self.worst_translate else None,
            "trace_file": trace_file,
        }


def _masses_over_schedule(measure, point, schedule, norm) -> np.ndarray:
    centers = np.tile(np.asarray(point, dtype=float), (len(schedule.radii), 1))
    return ball_masses_at(measure, centers, np.asarray(schedule.radii), norm)


def _require_support(measure, u, schedule, norm) -> None:
    if not ball_mass(measure, Ball(u, schedule.min_radius, norm)) > 0.0:
        raise NotInSupportError(
            f"point {u} has zero mass at probe radius {schedule.min_radius}"
        )


def ratio_trace(
    measure: Measure,
    u: Sequence[float],
    z: Sequence[float],
    schedule: RadiusSchedule,
    norm: PNorm = PNorm.INF,
) -> RatioTrace:
    """Trace of f(z, r) / f(u, r) over the schedule; u must stay in support."""
    u = as_point(u)
    z = as_point(z)
    f_den = _masses_over_schedule(measure, u, schedule, norm)
    zero = np.nonzero(f_den == 0.0)[0]
    if zero.size:
        raise NotInSupportError(
            f"f(u, r) = 0 at scheduled radius {schedule.radii[zero[0]]} for u={u}"
        )
    f_num = _masses_over_schedule(measure, z, schedule, norm)
    rows = tuple(TraceRow(r, float(n), float(d)) for r, n, d in zip(schedule.radii, f_num, f_den))
    return RatioTrace(u=u, z_descriptor=z, rows=rows)


def estimate_limit(trace: RatioTrace, tail_window: int, tol: float = DEFAULT_TOL) -> LimitEstimate:
    """Tail max/min/mean as limsup/liminf/limit surrogates.

    The estimate is flagged inconclusive when the tail spread exceeds tol and
    the bounds land on opposite sides of the 1 + tol threshold.
    """
    tail = trace.tail(tail_window)
    sup = max(tail)
    inf = min(tail)
    spread_undecided = (sup - inf) > tol and not (sup <= 1.0 + tol or inf > 1.0 + tol)
    return LimitEstimate(
        limit_est=sum(tail) / len(tail),
        limsup_est=sup,
        liminf_est=inf,
        inconclusive=spread_undecided,
    )


def _decide_bounded(tail: Sequence[float], tol: float) -> Status:
    # limit should be <= 1: the whole tail under the bar passes, the whole
    # tail above it is a persistent exceedance, anything else is undecided
    if max(tail) <= 1.0 + tol:
        return Status.SATISFIED
    if min(tail) > 1.0 + tol:
        return Status.VIOLATED
    return Status.INCONCLUSIVE


def _decide_unit(tail: Sequence[float], tol: float) -> Status:
    # limit should equal 1
    if max(tail) <= 1.0 + tol and min(tail) >= 1.0 - tol:
        return Status.SATISFIED
    if min(tail) > 1.0 + tol:
        return Status.VIOLATED
    return Status.INCONCLUSIVE


def check_weak_mode(
    measure: Measure,
    u: Sequence[float],
    sample: TranslationSet,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Pairwise test: every sampled translation v must satisfy
    limsup f(u - v, r) / f(u, r) <= 1 + tol on the tail."""
    u = as_point(u)
    _require_support(measure, u, schedule, norm)
    vs = sample.materialize(measure.dim)
    worst: tuple[LimitEstimate, RatioTrace, tuple[float, ...]] | None = None
    statuses = []
    for v in vs:
        trace = ratio_trace(measure, u, tuple(u_i - v_i for u_i, v_i in zip(u, v)), schedule, norm)
        est = estimate_limit(trace, schedule.tail_window, tol)
        statuses.append(_decide_bounded(trace.tail(schedule.tail_window), tol))
        if worst is None or est.limsup_est > worst[0].limsup_est:
            worst = (est, trace, tuple(float(c) for c in v))
    assert worst is not None
    if Status.VIOLATED in statuses:
        status = Status.VIOLATED
    elif Status.INCONCLUSIVE in statuses:
        status = Status.INCONCLUSIVE
    else:
        status = Status.SATISFIED
    est, trace, v = worst
    return Verdict(status, est.limsup_est, est.liminf_est, tol, (trace,), v)


def _sup_trace(measure, u, points, schedule, norm, tag) -> tuple[RatioTrace, list[tuple[float, ...]]]:
    u = as_point(u)
    f_den = _masses_over_schedule(measure, u, schedule, norm)
    zero = np.nonzero(f_den == 0.0)[0]
    if zero.size:
        raise NotInSupportError(
            f"f(u, r) = 0 at scheduled radius {schedule.radii[zero[0]]} for u={u}"
        )
    n_radii = len(schedule.radii)
    n_pts = points.shape[0]
    if n_radii * n_pts <= 2_000_000:
        # one kernel sweep over the (radius, point) product
        centers = np.tile(points, (n_radii, 1))
        radii = np.repeat(np.asarray(schedule.radii), n_pts)
        per_radius = ball_masses_at(measure, centers, radii, norm).reshape(n_radii, n_pts)
    else:
        per_radius = np.vstack([
            ball_masses_at(measure, points, r, norm) for r in schedule.radii
        ])
    best = per_radius.argmax(axis=1)
    rows = tuple(
        TraceRow(r, float(per_radius[i, best[i]]), float(f_den[i]))
        for i, r in enumerate(schedule.radii)
    )
    argmaxes = [tuple(float(c) for c in points[k]) for k in best]
    return RatioTrace(u=u, z_descriptor=tag, rows=rows), argmaxes


def _sup_verdict(measure, u, points, schedule, tol, norm, tag, decide) -> Verdict:
    trace, argmaxes = _sup_trace(measure, u, points, schedule, norm, tag)
    tail = trace.tail(schedule.tail_window)
    est = estimate_limit(trace, schedule.tail_window, tol)
    status = decide(tail, tol)
    tail_rows = trace.rows[-schedule.tail_window:]
    worst = argmaxes[len(trace.rows) - schedule.tail_window + int(np.argmax([r.ratio for r in tail_rows]))]
    return Verdict(status, est.limsup_est, est.liminf_est, tol, (trace,), worst)


def check_strong_mode(
    measure: Measure,
    u: Sequence[float],
    search_grid: TranslationSet,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Global test: sup over the grid of f(., r) against f(u, r) must tend to 1.

    The grid is the caller's finite stand-in for the whole space; it should
    cover the support bounding box inflated by the largest scheduled radius.
    """
    pts = search_grid.materialize(measure.dim)
    return _sup_verdict(measure, u, pts, schedule, tol, norm, "sup-over-grid", _decide_unit)


def check_E_strong_mode(
    measure: Measure,
    u: Sequence[float],
    sample: TranslationSet,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Uniform pairwise test: sup over sampled translates u - v against f(u, r)
    must stay below 1 in the limit."""
    u = as_point(u)
    vs = sample.materialize(measure.dim)
    pts = np.asarray(u, dtype=float)[None, :] - vs
    return _sup_verdict(measure, u, pts, schedule, tol, norm, "sup-over-translates", _decide_bounded)


@dataclass(frozen=True)
class LocalWindow:
    """Neighbourhood u - V restricting the competitors of a local mode."""

    norm: PNorm
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0.0:
            raise ValueError("window radius must be positive")


def _window_distances(offsets: np.ndarray, norm: PNorm) -> np.ndarray:
    if offsets.shape[1] == 1:
        return np.abs(offsets[:, 0])
    ax = np.abs(offsets[:, 0])
    ay = np.abs(offsets[:, 1])
    if norm is PNorm.ONE:
        return ax + ay
    if norm is PNorm.TWO:
        return np.hypot(ax, ay)
    return np.maximum(ax, ay)


def check_local_mode(
    measure: Measure,
    u: Sequence[float],
    window: LocalWindow,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    search_grid: TranslationSet | None = None,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Strong-mode test with competitors restricted to the open window around u."""
    if search_grid is None:
        raise ValueError("local classification needs a search grid")
    u = as_point(u)
    pts = search_grid.materialize(measure.dim)
    inside = _window_distances(pts - np.asarray(u, dtype=float)[None, :], window.norm) < window.radius
    pts = pts[inside]
    if pts.shape[0] == 0:
        raise EmptySampleError("no grid points fall inside the local window")
    return _sup_verdict(measure, u, pts, schedule, tol, norm, "sup-over-window", _decide_unit)


def check_uniformity(
    measure: Measure,
    u: Sequence[float],
    v_star: Sequence[float],
    sample: TranslationSet,
    r_star: float,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Does f(u - v_star, r) dominate every sampled f(u - v, r) for r < r_star?

    Slack tol * f(u, r) is allowed.  Rows record 1 + (sup_v f(u - v, r) -
    f(u - v_star, r)) / f(u, r), so a row above 1 + tol is a domination failure.
    """
    if not 0.0 < r_star < 1.0:
        raise ValueError(f"r_star must lie in (0, 1), got {r_star}")
    u = as_point(u)
    v_star = as_point(v_star)
    vs = sample.materialize(measure.dim)
    if not any(np.array_equal(np.asarray(v_star, dtype=float), v) for v in vs):
        raise ValueError("v_star must belong to the sampled translation set")
    radii = [r for r in schedule.radii if r < r_star]
    if len(radii) < 1:
        raise ValueError("no scheduled radii fall below r_star")
    _require_support(measure, u, schedule, norm)

    u_arr = np.asarray(u, dtype=float)
    star = u_arr - np.asarray(v_star, dtype=float)
    pts = u_arr[None, :] - vs
    rows = []
    worst_gap = -math.inf
    worst_v: tuple[float, ...] | None = None
    for r in radii:
        f_u = float(ball_masses_at(measure, [u], r, norm)[0])
        f_star = float(ball_masses_at(measure, [star], r, norm)[0])
        masses = ball_masses_at(measure, pts, r, norm)
        k = int(np.argmax(masses))
        gap = (float(masses[k]) - f_star) / f_u
        rows.append(TraceRow(r, f_u + (float(masses[k]) - f_star), f_u))
        if gap > worst_gap:
            worst_gap = gap
            worst_v = tuple(float(c) for c in vs[k])
    trace = RatioTrace(u=u, z_descriptor="uniformity-gap", rows=tuple(rows))
    ratios = trace.ratios()
    status = Status.SATISFIED if max(ratios) <= 1.0 + tol else Status.VIOLATED
    return Verdict(status, max(ratios), min(ratios), tol, (trace,), worst_v)


def check_clr(
    measure: Measure,
    u: Sequence[float],
    sample: TranslationSet,
    search_grid: TranslationSet,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
    norm: PNorm = PNorm.INF,
) -> Verdict:
    """Do the sup-over-translates and sup-over-grid ratios share a limit?

    Satisfied when the two tails agree row by row within tol, Violated when
    every tail row disagrees by more than tol, Inconclusive otherwise.
    """
    u = as_point(u)
    vs = sample.materialize(measure.dim)
    translate_pts = np.asarray(u, dtype=float)[None, :] - vs
    grid_pts = search_grid.materialize(measure.dim)
    trace_e, _ = _sup_trace(measure, u, translate_pts, schedule, norm, "sup-over-translates")
    trace_x, _ = _sup_trace(measure, u, grid_pts, schedule, norm, "sup-over-grid")
    window = schedule.tail_window
    diffs = [rx - re for rx, re in zip(trace_x.tail(window), trace_e.tail(window))]
    if max(abs(d) for d in diffs) <= tol:
        status = Status.SATISFIED
    elif min(abs(d) for d in diffs) > tol:
        status = Status.VIOLATED
    else:
        status = Status.INCONCLUSIVE
    return Verdict(status, 1.0 + max(diffs), 1.0 + min(diffs), tol, (trace_e, trace_x), None)


def lsc_probe(
    measure: Measure,
    x: Sequence[float],
    r: float,
    approach: Sequence[Sequence[float]],
    tol: float = 1e-9,
    norm: PNorm = PNorm.INF,
) -> bool:
    """Finite probe of lower semicontinuity of f(., r) along an approach to x:
    the last few approach values must not undershoot f(x, r) by more than tol."""
    if not approach:
        raise ValueError("approach sequence must be nonempty")
    f_x = ball_mass(measure, Ball(as_point(x), r, norm))
    tail = [as_point(p) for p in approach[-5:]]
    vals = ball_masses_at(measure, tail, r, norm)
    return bool(vals.min() >= f_x - tol)


def _height_at(measure: Measure, x: float) -> float:
    for comp in measure.components:
        if comp.lo < x < comp.hi:
            return comp.height
    return 0.0


def lebesgue_ratio_check(
    measure: Measure,
    u: Sequence[float],
    schedule: RadiusSchedule,
    expected_height: float,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Does f(u, r) / (2r) settle on the density height at u over the tail?

    Meaningful when u sits inside one interval piece with clearance larger
    than the biggest scheduled radius.
    """
    if measure.dim != 1:
        raise ValueError("density differentiation check applies to 1-D measures")
    u = as_point(u)
    masses = _masses_over_schedule(measure, u, schedule, PNorm.INF)
    tail_r = schedule.radii[-schedule.tail_window:]
    tail_m = masses[-schedule.tail_window:]
    return all(abs(m / (2.0 * r) - expected_height) <= tol for r, m in zip(tail_r, tail_m))


def rn_limit_check(
    measure: Measure,
    u: Sequence[float],
    v: float,
    schedule: RadiusSchedule,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Does the translate ratio f(u - v, r) / f(u, r) settle on the height
    ratio g(u - v) / g(u) of the step density over the tail?"""
    if measure.dim != 1:
        raise ValueError("translate-density check applies to 1-D measures")
    u = as_point(u)
    g_u = _height_at(measure, u[0])
    if g_u <= 0.0:
        raise NotInSupportError(f"u={u[0]} is not interior to a positive-height piece")
    expected = _height_at(measure, u[0] - v) / g_u
    trace = ratio_trace(measure, u, (u[0] - v,), schedule, PNorm.INF)
    return all(abs(ratio - expected) <= tol for ratio in trace.tail(schedule.tail_window))


def max_translate_density(
    measure: Measure,
    u: Sequence[float],
    shifts: Sequence[float],
    schedule: RadiusSchedule,
) -> float:
    """Largest tail-mean translate ratio over the sampled shifts; at a weak
    mode of a density this bounds the sampled translate densities at u."""
    u = as_point(u)
    best = -math.inf
    for v in shifts:
        trace = ratio_trace(measure, u, (u[0] - v,), schedule, PNorm.INF)
        est = estimate_limit(trace, schedule.tail_window)
        best = max(best, est.limit_est)
    return best
