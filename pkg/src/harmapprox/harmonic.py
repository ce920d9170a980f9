"""Harmonic extension of boundary data into the unit disk.

A harmonic map is stored as Fourier coefficients ``c_n``, ``|n| <= N``, of
its boundary trace, so that ``f(r e^{it}) = sum_n c_n r^|n| e^{int}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P

DEFAULT_N = 512
DEFAULT_R_MAX = 0.95


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    """Band-limited complex harmonic function on the closed disk.

    ``coeffs[k]`` holds ``c_{k - N}``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coefficient array must have odd length 2N + 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return (self.coeffs.size - 1) // 2

    def c(self, n: int) -> complex:
        if abs(n) > self.N:
            return 0j
        return complex(self.coeffs[n + self.N])

    @property
    def analytic(self) -> np.ndarray:
        """``c_0, c_1, ..., c_N``."""
        return self.coeffs[self.N:]

    @property
    def antianalytic(self) -> np.ndarray:
        """``0, c_{-1}, ..., c_{-N}`` (the constant lives in :attr:`analytic`)."""
        a = self.coeffs[: self.N + 1][::-1].copy()
        a[0] = 0
        return a

    def __call__(self, z):
        return evaluate(self, z)

    def __sub__(self, other: "HarmonicMap") -> "HarmonicMap":
        n = max(self.N, other.N)
        return HarmonicMap(_padded(self, n) - _padded(other, n))

    @classmethod
    def from_dict(cls, coeffs: dict[int, complex]) -> "HarmonicMap":
        n = max((abs(k) for k in coeffs), default=0)
        c = np.zeros(2 * n + 1, dtype=complex)
        for k, v in coeffs.items():
            c[k + n] = v
        return cls(c)


def _padded(f: HarmonicMap, n: int) -> np.ndarray:
    out = np.zeros(2 * n + 1, dtype=complex)
    out[n - f.N: n + f.N + 1] = f.coeffs
    return out


def sample_angles(M: int) -> np.ndarray:
    return 2 * np.pi * np.arange(M) / M


def fourier_coefficients(samples, N: int = DEFAULT_N) -> HarmonicMap:
    """Trapezoid-rule Fourier coefficients of boundary samples.

    Parameters
    ----------
    samples : array_like of complex
        Values at the ``M`` angles ``2 pi k / M``.
    N : int
        Bandwidth; requires ``M >= 2N + 2``.
    """
    g = np.asarray(samples, dtype=complex)
    M = g.size
    if M < 2 * N + 2:
        raise ValueError(f"need at least 2N + 2 = {2 * N + 2} samples for bandwidth {N}, got {M}")
    G = np.fft.fft(g) / M
    n = np.arange(-N, N + 1)
    return HarmonicMap(G[n % M])


def harmonic_extension(boundary, N: int = DEFAULT_N, M: int | None = None) -> HarmonicMap:
    """Fourier extension of a callable boundary map ``angle -> complex``."""
    M = 4 * N if M is None else M
    return fourier_coefficients(boundary(sample_angles(M)), N)


def _check_disk(z, closed: bool):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if closed and np.any(r > 1 + 1e-12):
        raise ValueError("evaluation point outside the closed unit disk")
    if not closed and np.any(r >= 1):
        raise ValueError("derivatives are only available strictly inside the disk")
    return z


def evaluate(f: HarmonicMap, z):
    """``sum c_n r^|n| e^{int}`` at points of the closed disk."""
    z = _check_disk(z, closed=True)
    out = P.polyval(z, f.analytic) + P.polyval(np.conj(z), f.antianalytic)
    return complex(out) if np.ndim(out) == 0 else out


def wirtinger_derivatives(f: HarmonicMap, z):
    """``(f_z, f_zbar)`` at interior points."""
    z = _check_disk(z, closed=False)
    if f.N == 0:
        return np.zeros_like(z), np.zeros_like(z)
    n = np.arange(1, f.N + 1)
    fz = P.polyval(z, n * f.analytic[1:])
    fzb = P.polyval(np.conj(z), n * f.antianalytic[1:])
    return fz, fzb


def jacobian(f: HarmonicMap, z):
    """``|f_z|^2 - |f_zbar|^2``."""
    fz, fzb = wirtinger_derivatives(f, z)
    return np.abs(fz) ** 2 - np.abs(fzb) ** 2


def polar_grid(r_max: float = DEFAULT_R_MAX, n_r: int = 64, n_theta: int = 256) -> np.ndarray:
    """Points ``r e^{it}`` with ``r`` uniform in ``(0, r_max]`` plus the origin."""
    r = np.linspace(0.0, r_max, n_r + 1)[1:]
    t = sample_angles(n_theta)
    pts = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    return np.concatenate(([0j], pts))


@dataclass(frozen=True)
class JacobianCheck:
    min_jacobian: float
    argmin: complex


def rkc_positivity_check(f: HarmonicMap, r_max: float = DEFAULT_R_MAX, n_r: int = 64,
                         n_theta: int = 256) -> JacobianCheck:
    """Minimum Jacobian of ``f`` on a polar grid of radius ``r_max``.

    Positive for the extension of monotone data onto a convex curve; a
    negative minimum certifies that ``f`` is not a diffeomorphism.
    """
    z = polar_grid(r_max, n_r, n_theta)
    J = jacobian(f, z)
    k = int(np.argmin(J))
    return JacobianCheck(float(J[k]), complex(z[k]))


def write_coefficients(path, f: HarmonicMap) -> None:
    n = np.arange(-f.N, f.N + 1)
    Path(path).write_text(
        "".join(f"{int(k)},{float(c.real)!r},{float(c.imag)!r}\n" for k, c in zip(n, f.coeffs))
    )


def read_coefficients(path) -> HarmonicMap:
    coeffs = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            k, re_, im_ = line.split(",")
            coeffs[int(k)] = complex(float(re_), float(im_))
        except ValueError:
            raise ValueError(f"{path} line {lineno}: expected 'n,re,im'") from None
    return HarmonicMap.from_dict(coeffs)
