"""Example maps onto inner chordarc domains and chordarc probing.

Two maps of the unit disk onto non-Lipschitz domains:

* ``spiral``: ``Phi(z) = |z - 1|^{4i} (z - 1)``, logarithmic spiral at ``0``;
* ``cusp``: ``Psi(z) = (z + 1)^2 / |z + 1|``, inward cusp at ``0``.

Both have constant Wirtinger moduli, so ``DF`` and ``(DF)^{-1}`` are bounded.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import shapely

from .energy import dirichlet_energy_grid, _midpoint_polar
from .harmonic import HarmonicMap, evaluate, wirtinger_derivatives

SINGULAR_EXCLUSION = 1e-6


class ExampleMap(str, Enum):
    SPIRAL = "spiral"
    CUSP = "cusp"

    @property
    def singular_point(self) -> complex:
        return 1.0 + 0j if self is ExampleMap.SPIRAL else -1.0 + 0j


def _kind(kind) -> ExampleMap:
    try:
        return ExampleMap(kind)
    except ValueError:
        raise ValueError(f"unknown example map {kind!r}; expected 'spiral' or 'cusp'") from None


def eval_example_map(kind, z):
    """Value of the example map; the singular point goes to ``0``."""
    kind = _kind(kind)
    z = np.asarray(z, dtype=complex)
    w = z - kind.singular_point
    r = np.abs(w)
    safe = np.where(r > 0, r, 1.0)
    if kind is ExampleMap.SPIRAL:
        out = np.exp(4j * np.log(safe)) * w
    else:
        out = w * w / safe
    out = np.where(r > 0, out, 0j)
    return complex(out) if out.ndim == 0 else out


def example_map_wirtinger(kind, z):
    """Exact ``(F_w, F_wbar)``; undefined at the singular point."""
    kind = _kind(kind)
    w = np.asarray(z, dtype=complex) - kind.singular_point
    r = np.abs(w)
    if np.any(r == 0):
        raise ValueError("derivative undefined at the singular boundary point")
    if kind is ExampleMap.SPIRAL:
        rot = np.exp(4j * np.log(r))
        return rot * (1 + 2j), 2j * (w / np.conj(w)) * rot
    u = w / r
    return 1.5 * u, -0.5 * u ** 3


def finite_difference_wirtinger(func, z, h: float = 1e-5):
    """Central-difference ``(f_z, f_zbar)`` of an arbitrary map."""
    z = np.asarray(z, dtype=complex)
    fx = (func(z + h) - func(z - h)) / (2 * h)
    fy = (func(z + 1j * h) - func(z - 1j * h)) / (2 * h)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


@dataclass(frozen=True)
class GradientSample:
    dw: np.ndarray
    dwbar: np.ndarray
    jacobian: np.ndarray
    fd_dw: np.ndarray
    fd_dwbar: np.ndarray

    @property
    def op_norm(self) -> np.ndarray:
        return self.dw + self.dwbar

    @property
    def inverse_op_norm(self) -> np.ndarray:
        return 1.0 / (self.dw - self.dwbar)


def example_map_gradients(kind, z, h: float = 1e-5) -> GradientSample:
    """Wirtinger moduli and Jacobian, exact and by central differences.

    Points within ``SINGULAR_EXCLUSION`` of the singular point are rejected.
    """
    kind = _kind(kind)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z - kind.singular_point) < SINGULAR_EXCLUSION):
        raise ValueError("point too close to the singular boundary point")
    a, b = example_map_wirtinger(kind, z)
    fa, fb = finite_difference_wirtinger(lambda p: eval_example_map(kind, p), z, h)
    return GradientSample(np.abs(a), np.abs(b), np.abs(a) ** 2 - np.abs(b) ** 2,
                          np.abs(fa), np.abs(fb))


def example_map_energy(kind, r_max: float = 0.999, n_r: int = 400, n_theta: int = 1024) -> float:
    """Grid Dirichlet energy of an example map over ``|z| <= r_max``."""
    return dirichlet_energy_grid(lambda z: example_map_wirtinger(kind, z), r_max=r_max,
                                 n_r=n_r, n_theta=n_theta)


# chordarc probes ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChordArcProbe:
    """Closed boundary polyline, two vertex indices and a connecting path."""

    boundary: np.ndarray
    a: int
    b: int
    gamma: np.ndarray

    def __post_init__(self):
        bnd = np.asarray(self.boundary, dtype=complex)
        gam = np.asarray(self.gamma, dtype=complex)
        if self.a == self.b:
            raise ValueError("probe endpoints must differ")
        if gam.size < 2:
            raise ValueError("gamma needs at least two points")
        if abs(gam[0] - bnd[self.a]) > 1e-12 or abs(gam[-1] - bnd[self.b]) > 1e-12:
            raise ValueError("gamma must start at boundary point a and end at b")
        object.__setattr__(self, "boundary", bnd)
        object.__setattr__(self, "gamma", gam)


def boundary_distance(boundary: np.ndarray, a: int, b: int) -> float:
    """Shorter of the two boundary paths between vertices ``a`` and ``b``."""
    edges = np.abs(np.diff(np.concatenate((boundary, boundary[:1]))))
    lo, hi = sorted((a, b))
    one_way = float(np.sum(edges[lo:hi]))
    return min(one_way, float(np.sum(edges)) - one_way)


def chordarc_ratio(probe: ChordArcProbe) -> float:
    """Boundary distance between the endpoints over the length of ``gamma``."""
    glen = float(np.sum(np.abs(np.diff(probe.gamma))))
    if glen <= 0:
        raise ValueError("gamma has zero length")
    return boundary_distance(probe.boundary, probe.a, probe.b) / glen


def circle_boundary(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def example_boundary(kind, n: int = 10_000) -> np.ndarray:
    """Image of ``n`` equally spaced circle points, starting next to the singular point."""
    kind = _kind(kind)
    t = 2 * np.pi * (np.arange(n) + 0.5) / n
    if kind is ExampleMap.CUSP:
        t = t + np.pi
    return eval_example_map(kind, np.exp(1j * t))


@dataclass(frozen=True)
class ProbeRow:
    probe_id: int
    a: int
    b: int
    boundary_len: float
    gamma_len: float
    ratio: float


@dataclass(frozen=True)
class ProbeSurvey:
    rows: tuple[ProbeRow, ...]
    skipped: int

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows), default=float("nan"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["probe_id", "boundary_len", "gamma_len", "ratio"])
        for r in self.rows:
            w.writerow([r.probe_id] + [repr(float(v)) for v in (r.boundary_len, r.gamma_len, r.ratio)])
        return buf.getvalue()


def _chord_inside(poly, p: complex, q: complex, shrink: float = 1e-9) -> bool:
    d = q - p
    p2, q2 = p + shrink * d, q - shrink * d
    return bool(poly.contains(shapely.LineString([(p2.real, p2.imag), (q2.real, q2.imag)])))


def survey_chords(boundary, n_probes: int, seed: int, family: str = "random") -> ProbeSurvey:
    """Straight-chord probes between boundary vertices.

    ``family="diameter"`` pairs each sampled vertex with the one halfway
    around the polyline. Chords leaving the domain are skipped and counted.
    The survey certifies nothing beyond "no ratio above the maximum found".
    """
    boundary = np.asarray(boundary, dtype=complex)
    n = boundary.size
    rng = np.random.default_rng(seed)
    poly = shapely.Polygon(np.column_stack((boundary.real, boundary.imag)))
    if not poly.is_valid:
        raise ValueError("boundary polyline is not a simple closed curve")
    shapely.prepare(poly)
    rows, skipped = [], 0
    for pid in range(n_probes):
        a = int(rng.integers(n))
        if family == "diameter":
            b = (a + n // 2) % n
        elif family == "random":
            b = int(rng.integers(n - 1))
            b = b + 1 if b >= a else b
        else:
            raise ValueError(f"unknown probe family {family!r}")
        p, q = boundary[a], boundary[b]
        if abs(((a - b) % n)) in (1, n - 1):
            inside = True  # an edge of the polyline is its own shortest path
        else:
            inside = _chord_inside(poly, p, q)
        if not inside:
            skipped += 1
            continue
        probe = ChordArcProbe(boundary, a, b, np.array([p, q]))
        blen = boundary_distance(boundary, a, b)
        glen = abs(q - p)
        rows.append(ProbeRow(pid, a, b, blen, glen, chordarc_ratio(probe)))
    return ProbeSurvey(tuple(rows), skipped)


# composition transport ------------------------------------------------------


@dataclass(frozen=True)
class TransportRow:
    sup_base: float
    sup_composite: float
    energy_composite: float
    royden: float


def _composite(kind, f: HarmonicMap):
    def value(z):
        return eval_example_map(kind, evaluate(f, z))

    def grad(z):
        fz, fzb = wirtinger_derivatives(f, z)
        a, b = example_map_wirtinger(kind, evaluate(f, z))
        return a * fz + b * np.conj(fzb), a * fzb + b * np.conj(fz)

    return value, grad


def composition_transport_check(f: HarmonicMap, f_ms, kind="cusp", r_max: float = 0.999,
                                n_r: int = 200, n_theta: int = 1024) -> list[TransportRow]:
    """Royden distances ``||F o f_m - F o f||`` for a sequence ``f_m``.

    The sup part is taken over the quadrature grid together with the circle
    ``|z| = 1``; gradients of the composites follow the chain rule
    ``(F o g)_z = F_w g_z + F_wbar conj(g_zbar)``.
    """
    kind = _kind(kind)
    z, wt = _midpoint_polar(r_max, n_r, n_theta)
    ring = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    val_f, grad_f = _composite(kind, f)
    Ff_z, Ff_zb = grad_f(z)
    Ff_in, Ff_ring = val_f(z), val_f(ring)
    f_in, f_ring = evaluate(f, z), evaluate(f, ring)
    rows = []
    for fm in f_ms:
        val_m, grad_m = _composite(kind, fm)
        gz, gzb = grad_m(z)
        E = float(np.sum(2 * (np.abs(gz - Ff_z) ** 2 + np.abs(gzb - Ff_zb) ** 2) * wt))
        sup_c = max(np.max(np.abs(val_m(z) - Ff_in)), np.max(np.abs(val_m(ring) - Ff_ring)))
        sup_b = max(np.max(np.abs(evaluate(fm, z) - f_in)), np.max(np.abs(evaluate(fm, ring) - f_ring)))
        rows.append(TransportRow(float(sup_b), float(sup_c), E, float(sup_c) + math.sqrt(E)))
    return rows
