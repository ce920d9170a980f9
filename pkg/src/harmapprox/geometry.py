"""Unit circle, circular segments and the corner-triangle estimate.

A segment ``S`` with half-angle ``omega`` is the region between the arc
``{e^{i t} : -omega <= t <= omega}`` and its chord (the base), which lies on
the vertical line ``Re z = cos(omega)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Slack for geometric predicates; the underlying inequalities are exact.
EQ_SLACK = 1e-12


def wrap_angle(theta):
    """Reduce angles to ``[-pi, pi)``."""
    return np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi


@dataclass(frozen=True)
class Segment:
    """Circular segment ``{|z| < 1, cos(omega) < Re z < 1}``."""

    omega: float

    def __post_init__(self):
        w = float(self.omega)
        if not (0.0 < w < math.pi / 2) or not math.isfinite(w):
            raise ValueError("omega must lie in (0, pi/2)")
        object.__setattr__(self, "omega", w)

    @property
    def upper_corner(self) -> complex:
        return complex(math.cos(self.omega), math.sin(self.omega))

    @property
    def lower_corner(self) -> complex:
        return complex(math.cos(self.omega), -math.sin(self.omega))

    @property
    def base_midpoint(self) -> complex:
        return complex(math.cos(self.omega), 0.0)

    @property
    def arc_midpoint(self) -> complex:
        return 1.0 + 0.0j

    @property
    def arc_length(self) -> float:
        return 2.0 * self.omega

    @property
    def base_length(self) -> float:
        return 2.0 * math.sin(self.omega)

    @property
    def perimeter(self) -> float:
        return self.arc_length + self.base_length

    @property
    def diameter(self) -> float:
        # The base is the longest chord of the closed segment.
        return 2.0 * math.sin(self.omega)


@dataclass(frozen=True)
class CirclePoint:
    """Point ``e^{i angle}`` of the unit circle, angle kept in ``[-pi, pi)``."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(wrap_angle(self.angle)))

    @property
    def value(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))


@dataclass(frozen=True)
class ArcInterval:
    """Closed arc ``{e^{i t} : lo <= t <= hi}``.

    Stored by angles rather than endpoints so that the arc is unambiguous.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("arc endpoints must be finite")
        if hi < lo:
            raise ValueError(f"arc has hi < lo: ({lo}, {hi})")
        if hi - lo >= 2 * math.pi:
            raise ValueError("arc must be shorter than the full circle")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, theta, tol: float = 0.0):
        theta = np.asarray(theta, dtype=float)
        return (theta >= self.lo - tol) & (theta <= self.hi + tol)


def segment_corners(seg: Segment) -> tuple[CirclePoint, CirclePoint]:
    """Return the corners ``(e^{i omega}, e^{-i omega})``."""
    return CirclePoint(seg.omega), CirclePoint(-seg.omega)


def parametrize_segment_boundary(seg: Segment, t):
    """Point of the segment boundary at normalized arclength ``t``.

    Traversal is counterclockwise from the lower corner: first the arc, then
    the base from the upper corner down to the lower one.

    Parameters
    ----------
    seg : Segment
    t : float or array_like
        Normalized arclength in ``[0, 1)``.

    Returns
    -------
    complex or ndarray of complex
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0.0) or np.any(t_arr >= 1.0):
        raise ValueError("t must lie in [0, 1)")
    w = seg.omega
    s = t_arr * seg.perimeter
    on_arc = s <= seg.arc_length
    arc_pt = np.exp(1j * (s - w))
    tau = np.sin(w) - (s - seg.arc_length)
    base_pt = np.cos(w) + 1j * tau
    out = np.where(on_arc, arc_pt, base_pt)
    return complex(out) if out.ndim == 0 else out


def law_of_cosines_bound(a, b, gamma, omega):
    """Residual ``c^2 - (a + b)^2 sin^2(omega / 4)`` for a triangle.

    ``c`` is the side opposite the angle ``gamma`` enclosed by sides ``a``
    and ``b``. For ``gamma >= omega / 2`` the residual is nonnegative.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(a <= 0) or np.any(b <= 0):
        raise ValueError("side lengths must be positive")
    if np.any(omega <= 0) or np.any(omega >= np.pi / 2):
        raise ValueError("omega must lie in (0, pi/2)")
    if np.any(gamma < omega / 2):
        raise ValueError("angle gamma must be at least omega/2")
    c2 = a * a + b * b - 2 * a * b * np.cos(gamma)
    res = c2 - (a + b) ** 2 * np.sin(omega / 4) ** 2
    return float(res) if res.ndim == 0 else res


@dataclass(frozen=True)
class CornerAngle:
    gamma: float
    in_range: bool
    at_lower_edge: bool
    at_upper_edge: bool


def angle_range_check(A: complex, B: complex, seg: Segment) -> CornerAngle:
    """Angle at the upper corner of the triangle ``(A, B, e^{i omega})``.

    ``A`` must lie on the upper half of the arc and ``B`` on the upper half
    of the base. The angle then lies in ``[omega/2, omega)``; the predicate
    allows ``EQ_SLACK`` on both ends and flags hits of either edge.
    """
    w = seg.omega
    C = seg.upper_corner
    A, B = complex(A), complex(B)
    if abs(abs(A) - 1.0) > 1e-9 or not (-EQ_SLACK <= math.atan2(A.imag, A.real) <= w + EQ_SLACK):
        raise ValueError("A must lie on the upper half of the arc")
    if abs(B.real - math.cos(w)) > 1e-9 or not (-EQ_SLACK <= B.imag <= math.sin(w) + EQ_SLACK):
        raise ValueError("B must lie on the upper half of the base")
    if abs(A - C) <= EQ_SLACK or abs(B - C) <= EQ_SLACK:
        raise ValueError("degenerate triangle: A or B coincides with the corner")
    u, v = A - C, B - C
    gamma = abs(math.atan2((u.conjugate() * v).imag, (u.conjugate() * v).real))
    lower = abs(gamma - w / 2) <= EQ_SLACK
    upper = abs(gamma - w) <= EQ_SLACK
    ok = (w / 2 - EQ_SLACK <= gamma <= w + EQ_SLACK)
    return CornerAngle(gamma, ok, lower, upper)
