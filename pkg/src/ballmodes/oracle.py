"""Brute-force ball-mass estimators used to cross-check the exact clipping kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure import Ball, Measure, PNorm, total_mass


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo settings; Philox keyed by the seed gives counter-based streams."""

    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        if self.n_samples < 1_000:
            raise ValueError(f"need at least 1000 samples, got {self.n_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit an unsigned 64-bit integer")


def _in_ball(pts: np.ndarray, ball: Ball, dim: int) -> np.ndarray:
    if dim == 1:
        return np.abs(pts[:, 0] - ball.center[0]) < ball.radius
    dx = pts[:, 0] - ball.center[0]
    dy = pts[:, 1] - ball.center[1]
    if ball.norm is PNorm.ONE:
        return np.abs(dx) + np.abs(dy) < ball.radius
    if ball.norm is PNorm.TWO:
        return dx * dx + dy * dy < ball.radius * ball.radius
    return np.maximum(np.abs(dx), np.abs(dy)) < ball.radius


def _sample_support(measure: Measure, rng: np.random.Generator, n: int) -> np.ndarray:
    masses = np.array([c.mass for c in measure.components])
    cum = np.cumsum(masses)
    if cum[-1] <= 0.0:
        raise ValueError("measure has zero total mass")
    idx = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
    idx = np.minimum(idx, len(masses) - 1)
    t = rng.random(n)
    if measure.dim == 1:
        lo = np.array([c.lo for c in measure.components])[idx]
        hi = np.array([c.hi for c in measure.components])[idx]
        return (lo + t * (hi - lo)).reshape(-1, 1)
    a = np.array([c.a for c in measure.components])[idx]
    b = np.array([c.b for c in measure.components])[idx]
    return a + t[:, None] * (b - a)


def mc_ball_mass(measure: Measure, ball: Ball, cfg: McConfig) -> tuple[float, float]:
    """Hit-fraction estimate of the ball mass with its binomial standard error.

    Points are drawn along components proportionally to component mass, which
    is the measure itself for constant densities.  Philox is counter-based, so
    the estimate depends only on the seed, not on how sampling is batched.
    """
    if not measure.components or total_mass(measure) <= 0.0:
        raise ValueError("Monte-Carlo oracle needs a measure with positive total mass")
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    pts = _sample_support(measure, rng, cfg.n_samples)
    hits = int(np.count_nonzero(_in_ball(pts, ball, measure.dim)))
    frac = hits / cfg.n_samples
    mass = total_mass(measure)
    estimate = mass * frac
    std_error = mass * np.sqrt(frac * (1.0 - frac) / cfg.n_samples)
    return estimate, float(std_error)


def quadrature_ball_mass(
    measure: Measure,
    ball: Ball,
    subdivisions: int,
    chunk: int = 1_000_000,
) -> float:
    """Midpoint-rule estimate: each component split into equal pieces, a piece
    counts fully iff its midpoint lies inside the open ball.

    A convex ball crosses a straight component at most twice, so the error is
    at most two piece masses, comfortably within 4 * component_mass / subdivisions.
    """
    if subdivisions < 1:
        raise ValueError("subdivisions must be positive")
    est = 0.0
    for comp in measure.components:
        piece_mass = comp.mass / subdivisions
        if piece_mass == 0.0:
            continue
        hits = 0
        for start in range(0, subdivisions, chunk):
            stop = min(start + chunk, subdivisions)
            t = (np.arange(start, stop) + 0.5) / subdivisions
            if measure.dim == 1:
                pts = (comp.lo + t * (comp.hi - comp.lo)).reshape(-1, 1)
            else:
                a = np.asarray(comp.a)
                b = np.asarray(comp.b)
                pts = a + t[:, None] * (b - a)
            hits += int(np.count_nonzero(_in_ball(pts, ball, measure.dim)))
        est += piece_mass * hits
    return est
