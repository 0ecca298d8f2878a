"""Small-ball masses of segment/step-density mixtures and mode classification."""

from .measure import (
    Ball,
    IntervalComponent,
    Measure,
    PNorm,
    SegmentComponent,
    ball_mass,
    ball_masses_at,
    interval_measure,
    load_measure,
    save_measure,
    segment_clip_length,
    segment_measure,
    support_contains,
    total_mass,
)

__all__ = [
    "Ball",
    "IntervalComponent",
    "Measure",
    "PNorm",
    "SegmentComponent",
    "ball_mass",
    "ball_masses_at",
    "interval_measure",
    "load_measure",
    "save_measure",
    "segment_clip_length",
    "segment_measure",
    "support_contains",
    "total_mass",
]

__version__ = "0.1.0"
