"""Homeomorphic approximation of harmonic maps of the disk onto a circular segment."""

from .geometry import Segment
from .boundary import ArcSet, MonotonePhi, SegmentBoundaryMap, homeomorphize, preset
from .harmonic import HarmonicMap, harmonic_extension
from .pipeline import FixtureSpec, run_approximation, verify_proposition

__all__ = [
    "ArcSet",
    "FixtureSpec",
    "HarmonicMap",
    "MonotonePhi",
    "Segment",
    "SegmentBoundaryMap",
    "harmonic_extension",
    "homeomorphize",
    "preset",
    "run_approximation",
    "verify_proposition",
]
