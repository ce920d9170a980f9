"""Dirichlet energy three ways, the Royden norm and harmonic replacement.

``E[g] = iint_D |Dg|^2 dx dy`` with the Hilbert-Schmidt norm, so that
``|Dg|^2 = 2 (|g_z|^2 + |g_zbar|^2)`` and ``E[z] = 2 pi``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .harmonic import HarmonicMap, evaluate, fourier_coefficients, sample_angles, wirtinger_derivatives

Gradient = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

DEFAULT_DOUGLAS_NODES = 1 << 14
DOUGLAS_TILE = 1024
DOUGLAS_NEAR = 64


def dirichlet_energy_fourier(f: HarmonicMap) -> float:
    """Closed form ``2 pi sum |n| |c_n|^2``."""
    n = np.abs(np.arange(-f.N, f.N + 1))
    return float(2 * np.pi * np.sum(n * np.abs(f.coeffs) ** 2))


def _douglas_weights(M: int) -> np.ndarray:
    # 1 / |e^{i t_j} - e^{i s_k}|^2 for s_k - t_j = 2 pi (d + 1/2) / M, d = k - j
    d = np.arange(M)
    return 1.0 / (4.0 * np.sin(np.pi * (d + 0.5) / M) ** 2)


def douglas_energy(boundary, M: int = DEFAULT_DOUGLAS_NODES, method: str = "fft") -> float:
    """Douglas double integral of boundary data over the circle squared.

    ``(1/2pi) iint |(g(x) - g(y)) / (x - y)|^2 |dx| |dy|`` by the tensor
    midpoint rule on two grids offset by half a step, so the diagonal is
    never sampled.

    Parameters
    ----------
    boundary : callable
        ``angle -> complex``.
    M : int
        Nodes per circle (at least 64).
    method : {"fft", "direct"}
        The kernel depends only on the index difference, so the sum is a
        circular correlation; ``"direct"`` forms it tile by tile instead.
    """
    if M < 64:
        raise ValueError("Douglas quadrature needs M >= 64")
    t = sample_angles(M)
    g = np.asarray(boundary(t), dtype=complex)
    h = np.asarray(boundary(t + np.pi / M), dtype=complex)
    w = _douglas_weights(M)
    if method == "fft":
        # S_d = sum_j |g_j - h_{j+d}|^2 via one correlation; lags next to the
        # diagonal carry the largest weights and cancel badly, so redo them directly
        cross = np.fft.ifft(np.conj(np.fft.fft(g)) * np.fft.fft(h))
        S = np.sum(np.abs(g) ** 2) + np.sum(np.abs(h) ** 2) - 2 * np.real(cross)
        near = np.r_[0:min(DOUGLAS_NEAR, M), max(M - DOUGLAS_NEAR, 0):M]
        for d in np.unique(near):
            S[d] = np.sum(np.abs(g - np.roll(h, -d)) ** 2)
        total = float(np.sum(w * S))
    elif method == "direct":
        k = np.arange(M)
        partial = []
        for j0 in range(0, M, DOUGLAS_TILE):
            j = np.arange(j0, min(j0 + DOUGLAS_TILE, M))
            ker = w[(k[None, :] - j[:, None]) % M]
            partial.append(np.sum(np.abs(g[j, None] - h[None, :]) ** 2 * ker))
        total = math.fsum(partial)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(total * (2 * np.pi / M) ** 2 / (2 * np.pi))


def _midpoint_polar(r_max: float, n_r: int, n_theta: int, r_min: float = 0.0):
    """Midpoints equally spaced in ``r^2`` and in angle, with area weights."""
    s_edges = np.linspace(r_min ** 2, r_max ** 2, n_r + 1)
    s = 0.5 * (s_edges[1:] + s_edges[:-1])
    t = (np.arange(n_theta) + 0.5) * 2 * np.pi / n_theta
    z = np.sqrt(s)[:, None] * np.exp(1j * t)[None, :]
    # dx dy = (1/2) d(r^2) dt
    weight = 0.5 * np.diff(s_edges)[:, None] * (2 * np.pi / n_theta)
    return z, np.broadcast_to(weight, z.shape)


def dirichlet_energy_grid(grad: Gradient | HarmonicMap, r_max: float = 1.0, n_r: int = 400,
                          n_theta: int = 512, r_min: float = 0.0) -> float:
    """``iint 2(|g_z|^2 + |g_zbar|^2)`` over ``r_min <= |z| <= r_max``.

    Tensor midpoint rule in ``r^2`` and angle; exact for integrands that are
    constant. Nothing is added for the annulus beyond ``r_max``.
    """
    if isinstance(grad, HarmonicMap):
        hm = grad
        grad = lambda z: wirtinger_derivatives(hm, z)  # noqa: E731
    z, wt = _midpoint_polar(r_max, n_r, n_theta, r_min)
    gz, gzb = grad(z)
    density = 2 * (np.abs(gz) ** 2 + np.abs(gzb) ** 2)
    return float(np.sum(density * wt))


def energy_in_annulus(f: HarmonicMap, r: float, r_max: float = 0.999, n_r: int = 200,
                      n_theta: int = 1024) -> float:
    """Grid energy of ``f`` on ``r < |z| < r_max``."""
    return dirichlet_energy_grid(f, r_max=r_max, n_r=n_r, n_theta=n_theta, r_min=r)


def royden_norm(value: Callable, grad: Gradient, boundary_values=None, r_max: float = 1.0,
                n_r: int = 400, n_theta: int = 512) -> float:
    """``sup |g| + sqrt(E[g])``.

    The sup is taken over the quadrature grid and any supplied boundary
    values.
    """
    z, _ = _midpoint_polar(r_max, n_r, n_theta)
    sup = float(np.max(np.abs(value(z))))
    if boundary_values is not None and np.size(boundary_values):
        sup = max(sup, float(np.max(np.abs(boundary_values))))
    E = dirichlet_energy_grid(grad, r_max=r_max, n_r=n_r, n_theta=n_theta)
    return sup + math.sqrt(max(E, 0.0))


@dataclass(frozen=True)
class ReplacementCheck:
    E_g: float
    E_h: float
    E_diff: float
    residual: float
    h: HarmonicMap


def harmonic_replacement_check(grad: Gradient, trace: Callable, N: int = 64, M: int | None = None,
                               r_max: float = 1.0, n_r: int = 400, n_theta: int = 512) -> ReplacementCheck:
    """Compare ``E[g - h]`` with ``E[g] - E[h]`` for ``h`` the harmonic extension of ``g``'s trace.

    Parameters
    ----------
    grad : callable
        ``z -> (g_z, g_zbar)`` on the open disk.
    trace : callable
        ``angle -> g(e^{i angle})``.
    """
    M = 4 * N if M is None else M
    h = fourier_coefficients(trace(sample_angles(M)), N)

    def grad_h(z):
        return wirtinger_derivatives(h, z)

    def grad_diff(z):
        gz, gzb = grad(z)
        hz, hzb = grad_h(z)
        return gz - hz, gzb - hzb

    kw = dict(r_max=r_max, n_r=n_r, n_theta=n_theta)
    E_g = dirichlet_energy_grid(grad, **kw)
    E_h = dirichlet_energy_grid(grad_h, **kw)
    E_d = dirichlet_energy_grid(grad_diff, **kw)
    return ReplacementCheck(E_g, E_h, E_d, E_d - (E_g - E_h), h)


@dataclass(frozen=True)
class EnergyReport:
    dirichlet_fourier: float
    dirichlet_grid: float
    douglas: float
    royden: float
    residual_fd_douglas: float
    residual_fd_grid: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def energy_report(f: HarmonicMap, boundary=None, douglas_nodes: int = DEFAULT_DOUGLAS_NODES,
                  r_max: float = 0.999, n_r: int = 400, n_theta: int = 1024) -> EnergyReport:
    """All three energies of a harmonic map with their pairwise residuals.

    ``boundary`` defaults to the series itself on the unit circle.
    """
    if boundary is None:
        boundary = lambda t: evaluate(f, np.exp(1j * np.asarray(t)))  # noqa: E731
    E_f = dirichlet_energy_fourier(f)
    E_d = douglas_energy(boundary, douglas_nodes)
    E_g = dirichlet_energy_grid(f, r_max=r_max, n_r=n_r, n_theta=n_theta)
    R = royden_norm(
        lambda z: evaluate(f, z),
        lambda z: wirtinger_derivatives(f, z),
        boundary(sample_angles(n_theta)),
        r_max=r_max, n_r=n_r, n_theta=n_theta,
    )
    return EnergyReport(E_f, E_g, E_d, R, _rel(E_f, E_d), _rel(E_f, E_g))
