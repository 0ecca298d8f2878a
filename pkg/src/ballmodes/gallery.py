"""Constructors for the benchmark measures and their closed-form ball masses.

Three constructions exercise the classifier in qualitatively different ways:

* ``crossed-squares`` -- a countable family of shrinking crosses, each
  inscribed in a square outline of lighter density.  Ball-mass ratios between
  the family's centres oscillate on a geometric sequence of radius bands, so
  each centre survives pairwise comparisons yet fails the uniform one.
* ``no-mode`` -- a step density on R whose peaks grow without bound while
  their supports shrink, so every candidate point is eventually dominated.
* ``k-dependence`` -- two unit-arm crosses, one axis-aligned and one rotated
  45 degrees; which centre maximises ball mass depends on the ball shape.
* ``two-line-gaussian`` -- an equal mixture of Gaussian densities living on
  the vertical lines x = +1 and x = -1, discretised into constant-density
  segments; the gap at x = 0 exercises the support precondition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .measure import (
    IntervalComponent,
    Measure,
    PNorm,
    SegmentComponent,
    interval_measure,
    segment_measure,
)

GALLERY_IDS = ("crossed-squares", "no-mode", "k-dependence", "two-line-gaussian")

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CrossedSquaresParams:
    """alpha weights the square outlines; crosses keep unit density."""

    alpha: float = 7.0 / 8.0
    n_crosses: int = 12

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n_crosses < 1:
            raise ValueError(f"need at least one crossed square, got {self.n_crosses}")


@dataclass(frozen=True)
class NoModeParams:
    """Peak growth b/a per step; b > 2 keeps the supports disjoint."""

    a: float = 2.0
    b: float = 4.0
    n_pieces: int = 16

    def __post_init__(self) -> None:
        if not 1.0 < self.a < self.b:
            raise ValueError(f"need 1 < a < b, got a={self.a}, b={self.b}")
        if self.b <= 2.0:
            raise ValueError(f"b must exceed 2 so the pieces stay disjoint, got {self.b}")
        if self.n_pieces < 1:
            raise ValueError(f"need at least one piece, got {self.n_pieces}")


def cross_center(n: int) -> tuple[float, float]:
    """Centre of the n-th crossed square: partial sums of 1 + 1/2 + 1/4 + ..."""
    return (sum(2.0 ** -m for m in range(n)), 0.0)


def cross_half_extent(n: int) -> float:
    """Half side of the n-th square outline, also the cross arm half-length."""
    return 2.0 ** -(n + 1)


def oscillation_band(n: int) -> tuple[float, float]:
    """Open radius interval on which a ball at centre n holds exactly the
    n-th crossed square and nothing else."""
    return (2.0 ** -(n + 1), 3.0 * 2.0 ** -(n + 2))


def band_radius(n: int) -> float:
    """Midpoint of the n-th oscillation band."""
    return 1.25 * 2.0 ** -(n + 1)


def cross_probe_points(n: int) -> dict[str, tuple[float, float]]:
    """Representative off-centre support points of the n-th crossed square:
    an arm interior point, a square-edge interior point, and the point where
    an arm meets its square edge."""
    vx, vy = cross_center(n)
    h = cross_half_extent(n)
    return {
        "arm": (vx + 0.5 * h, vy),
        "edge": (vx + h, vy + 0.5 * h),
        "arm-edge": (vx + h, vy),
    }


def build_crossed_squares(params: CrossedSquaresParams = CrossedSquaresParams()) -> Measure:
    """Crosses of density 1 inscribed in square outlines of density alpha/2.

    The n-th group has total mass (1 + alpha) * 2^-(n-1); truncating at
    n_crosses groups drops a geometric tail of mass (1 + alpha) * 2^-(n_crosses - 2).
    """
    comps: list[SegmentComponent] = []
    for n in range(params.n_crosses):
        (vx, vy) = cross_center(n)
        h = cross_half_extent(n)
        comps.append(SegmentComponent((vx - h, vy), (vx + h, vy), 1.0))
        comps.append(SegmentComponent((vx, vy - h), (vx, vy + h), 1.0))
        w = params.alpha / 2.0
        comps.append(SegmentComponent((vx + h, vy - h), (vx + h, vy + h), w))
        comps.append(SegmentComponent((vx - h, vy - h), (vx - h, vy + h), w))
        comps.append(SegmentComponent((vx - h, vy + h), (vx + h, vy + h), w))
        comps.append(SegmentComponent((vx - h, vy - h), (vx + h, vy - h), w))
    label = f"crossed-squares alpha={params.alpha} n={params.n_crosses}"
    return segment_measure(comps, label=label)


def no_mode_normaliser(params: NoModeParams) -> float:
    """Truncated geometric sum normalising the step density to unit mass."""
    return sum(params.a ** -n for n in range(1, params.n_pieces + 1))


def build_no_mode_density(params: NoModeParams = NoModeParams()) -> Measure:
    """Step density with height (b/a)^n / (2 A_N) on (n - b^-n, n + b^-n).

    Piece n carries mass a^-n / A_N, so the truncated measure is a probability
    measure for every n_pieces.
    """
    norm = no_mode_normaliser(params)
    comps = []
    for n in range(1, params.n_pieces + 1):
        half = params.b ** -n
        height = (params.b / params.a) ** n / (2.0 * norm)
        comps.append(IntervalComponent(n - half, n + half, height))
    label = f"no-mode a={params.a} b={params.b} n={params.n_pieces}"
    return interval_measure(comps, label=label)


def build_k_dependence() -> Measure:
    """Two crosses of density 1 with unit arm half-length: a diagonal cross at
    (-1, 0) and an axis-aligned cross at (1, 0)."""
    s = 1.0 / SQRT2
    comps = [
        SegmentComponent((-1.0 - s, -s), (-1.0 + s, s), 1.0),
        SegmentComponent((-1.0 - s, s), (-1.0 + s, -s), 1.0),
        SegmentComponent((0.0, 0.0), (2.0, 0.0), 1.0),
        SegmentComponent((1.0, -1.0), (1.0, 1.0), 1.0),
    ]
    return segment_measure(comps, label="k-dependence")


def build_two_line_gaussian(m_segments: int = 400) -> Measure:
    """Equal mixture of standard Gaussians on the lines x = -1 and x = +1,
    each discretised into m_segments constant-density cells over y in [-8, 8]."""
    if m_segments < 2:
        raise ValueError(f"need at least 2 cells per line, got {m_segments}")
    edges = [-8.0 + 16.0 * j / m_segments for j in range(m_segments + 1)]

    def ncdf(y: float) -> float:
        return 0.5 * (1.0 + math.erf(y / SQRT2))

    comps = []
    for x in (-1.0, 1.0):
        for y0, y1 in zip(edges, edges[1:]):
            density = 0.5 * (ncdf(y1) - ncdf(y0)) / (y1 - y0)
            comps.append(SegmentComponent((x, y0), (x, y1), density))
    return segment_measure(comps, label=f"two-line-gaussian m={m_segments}")


def build(gallery_id: str, **kwargs) -> Measure:
    """Build a gallery measure by id, forwarding constructor keyword overrides."""
    if gallery_id == "crossed-squares":
        return build_crossed_squares(CrossedSquaresParams(**kwargs))
    if gallery_id == "no-mode":
        return build_no_mode_density(NoModeParams(**kwargs))
    if gallery_id == "k-dependence":
        if kwargs:
            raise ValueError("k-dependence takes no parameters")
        return build_k_dependence()
    if gallery_id == "two-line-gaussian":
        return build_two_line_gaussian(**kwargs)
    raise KeyError(f"unknown gallery id {gallery_id!r}; known: {', '.join(GALLERY_IDS)}")


_EXPECTED_ALIASES = {
    "crossed-squares": "crossed-squares",
    "example-4.2": "crossed-squares",
    "4.2": "crossed-squares",
    "no-mode": "no-mode",
    "example-5.2": "no-mode",
    "5.2": "no-mode",
    "k-dependence": "k-dependence",
    "example-5.3": "k-dependence",
    "5.3": "k-dependence",
}


def expected_mass(example_id: str, center, r: float, norm: PNorm) -> float | None:
    """Closed-form ball mass at default parameters, or None outside the
    analytically covered regimes."""
    key = _EXPECTED_ALIASES.get(str(example_id))
    if key is None:
        return None
    x, y = (float(center[0]), float(center[1])) if len(center) == 2 else (float(center[0]), 0.0)

    if key == "crossed-squares":
        params = CrossedSquaresParams()
        if norm is not PNorm.INF or y != 0.0:
            return None
        for n in range(params.n_crosses):
            if (x, 0.0) == cross_center(n):
                lo, hi = oscillation_band(n)
                if lo < r < hi and n + 1 < params.n_crosses:
                    return (1.0 + params.alpha) * 2.0 ** -(n - 1)
                if r <= lo:
                    return 4.0 * r
                return None
        return None

    if key == "k-dependence":
        if not 0.0 < r < 0.5 or y != 0.0:
            return None
        if x == -1.0:
            return 2.0 * SQRT2 * r if norm is PNorm.ONE else (4.0 * SQRT2 * r if norm is PNorm.INF else None)
        if x == 1.0:
            return 4.0 * r if norm in (PNorm.ONE, PNorm.INF) else None
        return None

    params = NoModeParams()
    n = int(round(x))
    if abs(x - n) > 0.0 or not 1 <= n <= params.n_pieces:
        return None
    if r <= params.b ** -n:
        return r * (params.b / params.a) ** n / no_mode_normaliser(params)
    return None
