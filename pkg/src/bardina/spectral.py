"""Spectral representation of periodic fields on the square torus (0, 2*pi)^2.

Conventions used throughout the package:

* expansion          f(x) = sum_k fhat(k) exp(i k.x),  k integer lattice
* Parseval           ||f||_L2^2 = (2*pi)^2 * sum_k |fhat(k)|^2
* coefficient arrays follow the numpy FFT layout (wavenumber 0 first); the
  shifted layout -n/2 .. n/2-1 appears only in checkpoint files
* the mean mode k = 0 is excluded from the dynamics and kept at zero
* products are evaluated pseudo-spectrally with the 2/3-rule mask, so
  retained modes of a quadratic term carry no aliasing error

Fields are thin dataclasses around a complex (n, n) coefficient array plus
the grid that interprets it.  Operators are free functions; they return new
fields and never mutate their inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "FourierGrid",
    "ModelParams",
    "SpectralField",
    "VectorField",
    "make_grid",
    "field_from_samples",
    "zero_field",
    "smooth",
    "inverse_smooth",
    "gradient",
    "curl",
    "divergence_coeffs",
    "stream_velocity",
    "velocity_from_vorticity",
    "jacobian",
    "leray_project",
    "alpha_inner",
    "alpha_norm_sq",
    "l2_inner",
    "random_field",
]


@dataclass(frozen=True)
class FourierGrid:
    """Square collocation grid with integer wavenumbers in [-n/2, n/2).

    Attributes:
        n: number of modes (and collocation points) per axis, even, >= 4.
        k1, k2: integer wavenumber arrays of shape (n, n), FFT layout.
        k_sq: |k|^2 = k1^2 + k2^2.
        dealias: boolean 2/3-rule mask, symmetric under k -> -k.
    """

    n: int
    k1: np.ndarray
    k2: np.ndarray
    k_sq: np.ndarray
    dealias: np.ndarray
    _neg: np.ndarray  # index map k -> -k, both axes

    def spacing(self) -> float:
        """Collocation spacing 2*pi/n."""
        return 2.0 * np.pi / self.n

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Physical collocation nodes x1, x2 as (n, n) arrays."""
        x = 2.0 * np.pi * np.arange(self.n) / self.n
        return np.meshgrid(x, x, indexing="ij")


@lru_cache(maxsize=32)
def make_grid(n: int) -> FourierGrid:
    """Build (and cache) the grid for n modes per axis.

    Raises:
        ValueError: if n is odd or smaller than 4.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"grid size must be even and >= 4, got {n}")
    k = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    k_sq = (k1 * k1 + k2 * k2).astype(np.float64)
    cut = n // 3
    dealias = (np.abs(k1) <= cut) & (np.abs(k2) <= cut)
    neg = (-np.arange(n)) % n
    for arr in (k1, k2, k_sq, dealias, neg):
        arr.setflags(write=False)
    return FourierGrid(n=n, k1=k1, k2=k2, k_sq=k_sq, dealias=dealias, _neg=neg)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: filter length scale alpha and damping rate gamma.

    alpha is the square of the filter length; the velocity entering the
    transport term is (1 - alpha*Laplacian)^(-1) of the advected one.
    """

    alpha: float
    gamma: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass
class SpectralField:
    """Scalar field given by its Fourier coefficients (FFT layout)."""

    grid: FourierGrid
    coeffs: np.ndarray

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    def to_samples(self) -> np.ndarray:
        """Values on the collocation grid (real part; imag is roundoff)."""
        return np.fft.ifft2(self.coeffs).real * self.grid.n**2

    def l2_norm_sq(self) -> float:
        """(2*pi)^2 * sum |fhat|^2."""
        c = self.coeffs
        return float((2.0 * np.pi) ** 2 * np.vdot(c, c).real)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __rmul__(self, a: float) -> "SpectralField":
        return SpectralField(self.grid, a * self.coeffs)


@dataclass
class VectorField:
    """Two-component field; divergence-free ones satisfy k.uhat(k) = 0."""

    grid: FourierGrid
    coeffs: np.ndarray  # shape (2, n, n)

    def copy(self) -> "VectorField":
        return VectorField(self.grid, self.coeffs.copy())

    def component(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.coeffs[i])

    def l2_norm_sq(self) -> float:
        c = self.coeffs
        return float((2.0 * np.pi) ** 2 * np.vdot(c, c).real)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.grid, self.coeffs - other.coeffs)

    def __rmul__(self, a: float) -> "VectorField":
        return VectorField(self.grid, a * self.coeffs)


def hermitianize(grid: FourierGrid, coeffs: np.ndarray) -> np.ndarray:
    """Project onto coefficient arrays of real fields: c(-k) = conj(c(k)).

    The projection is exact by construction, so fields stay real under
    repeated transforms instead of accumulating imaginary drift.
    """
    neg = grid._neg
    flipped = coeffs[..., neg, :][..., :, neg]
    return 0.5 * (coeffs + np.conj(flipped))


def field_from_samples(grid: FourierGrid, samples: np.ndarray) -> SpectralField:
    """Transform real collocation samples to a spectral field."""
    c = np.fft.fft2(samples) / grid.n**2
    c = hermitianize(grid, c)
    return SpectralField(grid, c)


def zero_field(grid: FourierGrid) -> SpectralField:
    return SpectralField(grid, np.zeros((grid.n, grid.n), dtype=complex))


def zero_vector_field(grid: FourierGrid) -> VectorField:
    return VectorField(grid, np.zeros((2, grid.n, grid.n), dtype=complex))


def smooth(f: SpectralField, alpha: float) -> SpectralField:
    """Apply the regularizing inverse (1 - alpha*Laplacian)^(-1).

    Multiplies each mode by 1/(1 + alpha*|k|^2); alpha = 0 is the identity.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return SpectralField(f.grid, f.coeffs / (1.0 + alpha * f.grid.k_sq))


def inverse_smooth(f: SpectralField, alpha: float) -> SpectralField:
    """Apply (1 - alpha*Laplacian), the inverse of smooth()."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return SpectralField(f.grid, f.coeffs * (1.0 + alpha * f.grid.k_sq))


def smooth_vector(u: VectorField, alpha: float) -> VectorField:
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return VectorField(u.grid, u.coeffs / (1.0 + alpha * u.grid.k_sq))


def gradient(f: SpectralField) -> VectorField:
    g = f.grid
    return VectorField(g, np.stack((1j * g.k1 * f.coeffs, 1j * g.k2 * f.coeffs)))


def curl(u: VectorField) -> SpectralField:
    """Scalar curl d1 u2 - d2 u1 of a plane vector field."""
    g = u.grid
    return SpectralField(g, 1j * g.k1 * u.coeffs[1] - 1j * g.k2 * u.coeffs[0])


def divergence_coeffs(u: VectorField) -> np.ndarray:
    """Spectral divergence i*k.uhat, returned as a raw array."""
    g = u.grid
    return 1j * (g.k1 * u.coeffs[0] + g.k2 * u.coeffs[1])


def stream_velocity(omega: SpectralField) -> VectorField:
    """Velocity with the given scalar curl: perp-gradient of inv-Laplacian.

    The k = 0 mode of omega is ignored (and must be zero for consistency).
    """
    g = omega.grid
    inv_lap = np.zeros_like(g.k_sq)
    nz = g.k_sq > 0
    inv_lap[nz] = -1.0 / g.k_sq[nz]
    psi = inv_lap * omega.coeffs
    return VectorField(g, np.stack((-1j * g.k2 * psi, 1j * g.k1 * psi)))


def velocity_from_vorticity(omega: SpectralField, alpha: float) -> VectorField:
    """Regularized velocity whose unfiltered curl is omega.

    Returns ubar with curl((1 - alpha*Laplacian) ubar) = omega, i.e. the
    perp-gradient of (Laplacian - alpha*Laplacian^2)^(-1) omega.
    """
    return stream_velocity(smooth(omega, alpha))


def _phys(coeffs: np.ndarray, n: int) -> np.ndarray:
    return np.fft.ifft2(coeffs).real * n**2


def jacobian(a: SpectralField, b: SpectralField) -> SpectralField:
    """De-aliased Jacobian J(a, b) = d1a d2b - d2a d1b.

    Inputs are masked with the 2/3 rule, derivatives multiplied out in
    physical space, and the product transformed back and masked again, so
    the retained coefficients are exact convolution values.  The k = 0 mode
    is zeroed (the Jacobian has zero mean analytically).
    """
    g = a.grid
    if b.grid.n != g.n:
        raise ValueError("fields live on different grids")
    ca = np.where(g.dealias, a.coeffs, 0.0)
    cb = np.where(g.dealias, b.coeffs, 0.0)
    d1a = _phys(1j * g.k1 * ca, g.n)
    d2a = _phys(1j * g.k2 * ca, g.n)
    d1b = _phys(1j * g.k1 * cb, g.n)
    d2b = _phys(1j * g.k2 * cb, g.n)
    jac = np.fft.fft2(d1a * d2b - d2a * d1b) / g.n**2
    jac = hermitianize(g, np.where(g.dealias, jac, 0.0))
    jac[0, 0] = 0.0
    return SpectralField(g, jac)


def leray_project(u: VectorField) -> VectorField:
    """Remove the gradient part: uhat -> uhat - k (k.uhat)/|k|^2."""
    g = u.grid
    inv = np.zeros_like(g.k_sq)
    nz = g.k_sq > 0
    inv[nz] = 1.0 / g.k_sq[nz]
    kdotu = (g.k1 * u.coeffs[0] + g.k2 * u.coeffs[1]) * inv
    out = u.coeffs.copy()
    out[0] -= g.k1 * kdotu
    out[1] -= g.k2 * kdotu
    return VectorField(g, out)


def l2_inner(u: VectorField, v: VectorField) -> float:
    return float((2.0 * np.pi) ** 2 * np.vdot(u.coeffs, v.coeffs).real)


def alpha_inner(theta: VectorField, xi: VectorField, alpha: float) -> float:
    """Inner product of the filtered energy space.

    (theta, xi)_alpha = ((1-alpha*Lap)^(-1/2) theta, (1-alpha*Lap)^(-1/2) xi),
    computed spectrally as (2*pi)^2 sum Re(theta.conj(xi)) / (1+alpha|k|^2).
    Its square norm equals ||thetabar||^2 + alpha*||grad thetabar||^2 with
    thetabar = (1-alpha*Lap)^(-1) theta.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    w = 1.0 / (1.0 + alpha * theta.grid.k_sq)
    s = np.sum((theta.coeffs * np.conj(xi.coeffs)).real * w)
    return float((2.0 * np.pi) ** 2 * s)


def alpha_norm_sq(theta: VectorField, alpha: float) -> float:
    return alpha_inner(theta, theta, alpha)


def random_field(
    grid: FourierGrid,
    rng: np.random.Generator,
    amplitude: float = 1.0,
    band: int | None = None,
) -> SpectralField:
    """Random real zero-mean field supported on the de-aliased band.

    Coefficients are unit complex Gaussians scaled by amplitude/(1+|k|^2),
    hermitianized so the field is real.
    """
    n = grid.n
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    c *= amplitude / (1.0 + grid.k_sq)
    mask = grid.dealias.copy()
    if band is not None:
        mask &= grid.k_sq <= band**2
    c = np.where(mask, c, 0.0)
    c = hermitianize(grid, c)
    c[0, 0] = 0.0
    return SpectralField(grid, c)
