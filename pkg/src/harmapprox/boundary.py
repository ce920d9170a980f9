"""Monotone boundary maps of the disk onto a segment and their homeomorphization.

The boundary map sends the arc ``{e^{i t} : |t| <= omega}`` to itself through
a nondecreasing piecewise-linear angle function ``phi``, and the rest of the
circle linearly (in angle) onto the base. Flat pieces of ``phi`` are where the
map fails to be injective; :func:`homeomorphize` removes them on the
complement of a compact set ``K`` while leaving ``phi`` untouched on ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import ArcInterval, Segment

ENDPOINT_TOL = 1e-12
MIN_M = 4


class MonotoneError(ValueError):
    """Invalid node list for a monotone angle function."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"node {index}: {message}")
        self.index = index


class InjectivityError(ValueError):
    """The map is not injective on the requested compact set."""

    def __init__(self, message: str, component: tuple[float, float]):
        super().__init__(f"component [{component[0]:.17g}, {component[1]:.17g}]: {message}")
        self.component = component


@dataclass(frozen=True, eq=False)
class MonotonePhi:
    """Piecewise-linear nondecreasing function given by its nodes.

    Use :func:`validate_monotone` to build one for the full arc of a segment;
    the bare constructor only checks shapes and ordering.
    """

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        phi = np.array(self.phi, dtype=float)
        if theta.ndim != 1 or theta.shape != phi.shape or theta.size < 2:
            raise MonotoneError("need matching 1-d node arrays with at least two nodes")
        theta.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def __call__(self, t):
        return np.interp(t, self.theta, self.phi)

    @property
    def lo(self) -> float:
        return float(self.theta[0])

    @property
    def hi(self) -> float:
        return float(self.theta[-1])

    def slopes(self) -> np.ndarray:
        return np.diff(self.phi) / np.diff(self.theta)

    def restrict(self, lo: float, hi: float) -> "MonotonePhi":
        """Nodes of the restriction to ``[lo, hi]`` (endpoints inserted)."""
        inner = (self.theta > lo) & (self.theta < hi)
        t = np.concatenate(([lo], self.theta[inner], [hi]))
        return MonotonePhi(t, self(t))

    def __eq__(self, other):
        if not isinstance(other, MonotonePhi):
            return NotImplemented
        return np.array_equal(self.theta, other.theta) and np.array_equal(self.phi, other.phi)

    __hash__ = None


def validate_monotone(theta, phi, seg: Segment) -> MonotonePhi:
    """Check a raw node list and return it as a :class:`MonotonePhi`.

    Endpoints within ``ENDPOINT_TOL`` of ``-omega`` / ``omega`` are snapped.

    Raises
    ------
    MonotoneError
        Carrying the index of the first offending node.
    """
    theta = np.array(theta, dtype=float)
    phi = np.array(phi, dtype=float)
    if theta.ndim != 1 or theta.shape != phi.shape:
        raise MonotoneError("theta and phi must be 1-d arrays of equal length")
    if theta.size < 2:
        raise MonotoneError("need at least two nodes")
    w = seg.omega
    bad = np.flatnonzero(~(np.isfinite(theta) & np.isfinite(phi)))
    if bad.size:
        raise MonotoneError("non-finite value", int(bad[0]))
    for k in (0, -1):
        target = -w if k == 0 else w
        idx = 0 if k == 0 else theta.size - 1
        if abs(theta[k] - target) > ENDPOINT_TOL:
            raise MonotoneError(f"theta must start at -omega and end at omega, got {theta[k]!r}", idx)
        if abs(phi[k] - target) > ENDPOINT_TOL:
            raise MonotoneError(f"phi must map endpoint {target!r} to itself, got {phi[k]!r}", idx)
        theta[k] = target
        phi[k] = target
    out = np.flatnonzero((theta < -w) | (theta > w) | (phi < -w) | (phi > w))
    if out.size:
        raise MonotoneError("node outside [-omega, omega]", int(out[0]))
    dec = np.flatnonzero(np.diff(theta) <= 0)
    if dec.size:
        raise MonotoneError("theta must be strictly increasing", int(dec[0]) + 1)
    dec = np.flatnonzero(np.diff(phi) < 0)
    if dec.size:
        raise MonotoneError("phi must be nondecreasing", int(dec[0]) + 1)
    return MonotonePhi(theta, phi)


@dataclass(frozen=True)
class ArcSet:
    """Finite union of disjoint closed arcs inside the segment arc."""

    components: tuple[ArcInterval, ...] = ()

    def __post_init__(self):
        comps = tuple(
            c if isinstance(c, ArcInterval) else ArcInterval(*c) for c in self.components
        )
        comps = tuple(sorted(comps, key=lambda c: c.lo))
        for a, b in zip(comps, comps[1:]):
            if b.lo <= a.hi:
                raise ValueError(
                    f"arcs [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] overlap or share an endpoint"
                )
        object.__setattr__(self, "components", comps)

    def check_inside(self, seg: Segment) -> None:
        for c in self.components:
            if c.lo < -seg.omega - ENDPOINT_TOL or c.hi > seg.omega + ENDPOINT_TOL:
                raise ValueError(f"arc [{c.lo}, {c.hi}] leaves [-omega, omega]")

    def complement(self, seg: Segment) -> list[tuple[float, float]]:
        """Closures of the components of ``[-omega, omega]`` minus the set."""
        self.check_inside(seg)
        w = seg.omega
        gaps = []
        left = -w
        for c in self.components:
            lo = max(c.lo, -w)
            if lo > left:
                gaps.append((left, lo))
            left = min(max(c.hi, left), w)
        if left < w:
            gaps.append((left, w))
        return gaps

    def contains(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        hit = np.zeros(theta.shape, dtype=bool)
        for c in self.components:
            hit |= c.contains(theta)
        return hit


def check_injective(phi: MonotonePhi, K: ArcSet, seg: Segment) -> list[tuple[float, float]]:
    """Verify that ``phi`` is injective on ``K``; return the complement components.

    Two conditions: ``phi`` strictly increasing inside each arc of ``K``, and
    ``phi(alpha) < phi(beta)`` at the endpoints of every complement component.
    """
    for c in K.components:
        if c.hi <= c.lo:
            continue
        piece = phi.restrict(max(c.lo, -seg.omega), min(c.hi, seg.omega))
        if np.any(piece.slopes() <= 0):
            raise InjectivityError("phi is not strictly increasing on this arc of K", (c.lo, c.hi))
    gaps = K.complement(seg)
    for a, b in gaps:
        if not phi(a) < phi(b):
            raise InjectivityError("phi(alpha) == phi(beta); endpoints are not separated", (a, b))
    return gaps


def homeomorphize_component(phi: MonotonePhi, alpha: float, beta: float, m: int) -> MonotonePhi:
    """Blend ``phi`` on ``[alpha, beta]`` with a linear ramp.

    ``phi_m(t) = (1 - (beta - alpha)/m) (phi(t) - phi(alpha))
    + (phi(beta) - phi(alpha))/m (t - alpha) + phi(alpha)``.

    The result keeps the breakpoints of ``phi``, matches it at both ends and
    has slope at least ``(phi(beta) - phi(alpha))/m`` everywhere.
    """
    if int(m) != m or m < MIN_M:
        raise ValueError(f"m must be an integer >= {MIN_M}, got {m!r}")
    if not (phi.lo - ENDPOINT_TOL <= alpha < beta <= phi.hi + ENDPOINT_TOL):
        raise ValueError(f"need {phi.lo} <= alpha < beta <= {phi.hi}")
    piece = phi.restrict(alpha, beta)
    pa, pb = float(piece.phi[0]), float(piece.phi[-1])
    if not pa < pb:
        raise InjectivityError("phi(alpha) == phi(beta); endpoints are not separated", (alpha, beta))
    t = piece.theta
    vals = (1.0 - (beta - alpha) / m) * (piece.phi - pa) + (pb - pa) / m * (t - alpha) + pa
    vals[0], vals[-1] = pa, pb
    return MonotonePhi(t, vals)


@dataclass(frozen=True)
class SegmentBoundaryMap:
    """Boundary map of the unit circle onto the boundary of a segment.

    The arc part is ``e^{i t} -> e^{i phi(t)}``; the complementary arc
    ``omega <= t <= 2 pi - omega`` goes linearly in ``t`` onto the base, from
    the upper corner through ``cos(omega)`` at ``t = pi`` to the lower corner.
    """

    segment: Segment
    phi: MonotonePhi
    replaced: tuple[tuple[float, float], ...] = field(default=(), compare=False)

    def __call__(self, angles):
        t = np.asarray(angles, dtype=float)
        w = self.segment.omega
        s = np.mod(t, 2 * np.pi)
        on_arc = (s <= w) | (s >= 2 * np.pi - w)
        arc_t = np.where(s >= 2 * np.pi - w, s - 2 * np.pi, s)
        arc_val = np.exp(1j * self.phi(np.clip(arc_t, -w, w)))
        base_val = np.cos(w) + 1j * np.sin(w) * (np.pi - s) / (np.pi - w)
        out = np.where(on_arc, arc_val, base_val)
        return complex(out) if out.ndim == 0 else out

    def breakpoints(self) -> np.ndarray:
        """Angles at which the map may fail to be smooth."""
        return np.unique(np.concatenate((self.phi.theta, [np.pi])))


def canonical_fixture_boundary(seg: Segment, phi: MonotonePhi) -> SegmentBoundaryMap:
    """Boundary map normalized at the two corners and at ``-1``."""
    phi = validate_monotone(phi.theta, phi.phi, seg)
    return SegmentBoundaryMap(seg, phi)


def homeomorphize(f: SegmentBoundaryMap, K: ArcSet, m: int) -> SegmentBoundaryMap:
    """Replace ``f`` on each complement component of ``K`` by its blended version.

    The result agrees with ``f`` on ``K`` and off the arc, and is strictly
    increasing on the arc.
    """
    seg = f.segment
    gaps = check_injective(f.phi, K, seg)
    thetas, phis = [], []
    for c in K.components:
        lo, hi = max(c.lo, -seg.omega), min(c.hi, seg.omega)
        t = np.array([lo]) if hi <= lo else f.phi.restrict(lo, hi).theta
        thetas.append(t)
        phis.append(f.phi(t))
    for a, b in gaps:
        piece = homeomorphize_component(f.phi, a, b, m)
        thetas.append(piece.theta)
        phis.append(piece.phi)
    t = np.concatenate(thetas)
    p = np.concatenate(phis)
    t, idx = np.unique(t, return_index=True)
    return SegmentBoundaryMap(seg, MonotonePhi(t, p[idx]), tuple(gaps))


def sup_distance(f: SegmentBoundaryMap, g: SegmentBoundaryMap, samples: int = 4096) -> float:
    """``max |f - g|`` over the circle.

    Both maps are piecewise linear in angle, so the maximum sits at a
    breakpoint; a uniform sample of ``samples`` angles is added on top.
    """
    if f.segment != g.segment:
        raise ValueError("maps live on different segments")
    t = np.concatenate(
        (f.breakpoints(), g.breakpoints(), np.linspace(-np.pi, np.pi, samples, endpoint=False))
    )
    return float(np.max(np.abs(f(t) - g(t))))


def quasi_lipschitz_constant(seg: Segment) -> float:
    return 5.0 / math.sin(seg.omega / 4)


def quasi_lipschitz_check(
    f: SegmentBoundaryMap,
    f_m: SegmentBoundaryMap,
    pairs: int = 10_000,
    seed: int = 0,
) -> float:
    """Smallest margin of ``C |f(x) - f(y)| + 4 |x - y| - |f_m(x) - f_m(y)|``.

    ``C = 5 / sin(omega / 4)``. Pairs are ``pairs`` uniform random points of
    the circle squared plus every pair of breakpoints of either map.
    """
    rng = np.random.default_rng(seed)
    bp = np.unique(np.concatenate((f.breakpoints(), f_m.breakpoints())))
    b1, b2 = np.meshgrid(bp, bp, indexing="ij")
    r = rng.uniform(-np.pi, np.pi, size=(2, pairs))
    t1 = np.concatenate((b1.ravel(), r[0]))
    t2 = np.concatenate((b2.ravel(), r[1]))
    lhs = np.abs(f_m(t1) - f_m(t2))
    rhs = quasi_lipschitz_constant(f.segment) * np.abs(f(t1) - f(t2)) + 4 * np.abs(
        np.exp(1j * t1) - np.exp(1j * t2)
    )
    return float(np.min(rhs - lhs))


def replaced_min_slopes(f_m: SegmentBoundaryMap, f: SegmentBoundaryMap, m: int):
    """Per replaced component: ``(alpha, beta, min slope, guaranteed slope)``."""
    rows = []
    for a, b in f_m.replaced:
        piece = f_m.phi.restrict(a, b)
        rows.append((a, b, float(piece.slopes().min()), float((f.phi(b) - f.phi(a)) / m)))
    return rows


# presets --------------------------------------------------------------------

PRESETS = ("identity", "flat-step", "multi-flat")


def preset(name: str, seg: Segment) -> tuple[MonotonePhi, ArcSet]:
    """Named angle function together with its default compact set ``K``.

    ``flat-step`` has one flat of width ``omega/2``; ``multi-flat`` has three.
    """
    w = seg.omega
    if name == "identity":
        nodes = [(-w, -w), (w, w)]
        K = ArcSet()
    elif name == "flat-step":
        nodes = [(-w, -w), (0.0, 0.0), (w / 2, 0.0), (w, w)]
        K = ArcSet((ArcInterval(-w, 0.0),))
    elif name == "multi-flat":
        xs = [-1.0, -0.7, -0.5, -0.1, 0.1, 0.5, 0.7, 1.0]
        ys = [-1.0, -0.6, -0.6, 0.0, 0.0, 0.6, 0.6, 1.0]
        nodes = [(x * w, y * w) for x, y in zip(xs, ys)]
        K = ArcSet((ArcInterval(-0.45 * w, -0.15 * w), ArcInterval(0.15 * w, 0.45 * w)))
    else:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    t, p = zip(*nodes)
    return validate_monotone(t, p, seg), K


# plain-text formats ---------------------------------------------------------


def _pairs_from_text(text: str, what: str) -> list[tuple[float, float]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ValueError(f"{what} line {lineno}: expected two comma-separated numbers")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ValueError(f"{what} line {lineno}: cannot parse {line!r}") from None
    return rows


def read_phi_file(path, seg: Segment) -> MonotonePhi:
    """Parse ``theta,phi`` lines (radians) into a validated map."""
    rows = _pairs_from_text(Path(path).read_text(), str(path))
    if not rows:
        raise ValueError(f"{path}: no nodes")
    t, p = zip(*rows)
    try:
        return validate_monotone(t, p, seg)
    except MonotoneError as err:
        if err.index is None:
            raise
        # report the file line rather than the node index
        lines = [
            n
            for n, raw in enumerate(Path(path).read_text().splitlines(), start=1)
            if raw.split("#", 1)[0].strip()
        ]
        raise ValueError(f"{path} line {lines[err.index]}: {err}") from None


def write_phi_file(path, phi: MonotonePhi) -> None:
    Path(path).write_text("".join(f"{float(t)!r},{float(p)!r}\n" for t, p in zip(phi.theta, phi.phi)))


def read_arcset_file(path) -> ArcSet:
    """Parse ``lo,hi`` lines into an :class:`ArcSet`."""
    rows = _pairs_from_text(Path(path).read_text(), str(path))
    return ArcSet(tuple(ArcInterval(lo, hi) for lo, hi in rows))
