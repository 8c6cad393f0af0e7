#!/usr/bin/env python3
"""
Periodic box geometry, mass and the fixed DFT convention

Forward transform:  phi_hat(k) = (V / N^d) * sum_x phi(x) exp(-i k.x)
Inverse transform:  phi(x)     = (1 / V)   * sum_k phi_hat(k) exp(+i k.x)

Lattice sums then converge to the continuum integrals as N grows. Every other
module assumes this convention.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import GridError, MassError

logger = logging.getLogger(__name__)

# Relative slack when deciding whether a wavevector component is 2*pi*m/L
ADMISSIBLE_TOL = 1e-9


@dataclass(frozen=True)
class Mass:
    """Field mass m > 0 in inverse-length units (hbar = c = 1)"""

    m: float

    def __post_init__(self):
        value = float(self.m)
        if not np.isfinite(value) or value <= 0.0:
            raise MassError(f"mass must be finite and strictly positive, got {self.m!r}")
        object.__setattr__(self, 'm', value)

    def __float__(self) -> float:
        return self.m


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic box with an even number of lattice points per axis"""

    dim: int
    points: Tuple[int, ...]
    lengths: Tuple[float, ...]

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise GridError(f"dim must be 1, 2 or 3, got {self.dim!r}")
        points = tuple(int(n) for n in self.points)
        lengths = tuple(float(length) for length in self.lengths)
        if len(points) != self.dim or len(lengths) != self.dim:
            raise GridError(
                f"expected {self.dim} points and lengths, got {len(points)} and {len(lengths)}"
            )
        for n in points:
            if n < 4 or n % 2:
                raise GridError(f"points per axis must be even and >= 4, got {n}")
        for length in lengths:
            if not np.isfinite(length) or length <= 0.0:
                raise GridError(f"box lengths must be positive, got {length!r}")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'lengths', lengths)

    @classmethod
    def cube(cls, dim: int, n: int, length: float = 2.0 * np.pi) -> 'SpatialGrid':
        """Same resolution and length along every axis"""
        return cls(dim, (n,) * dim, (length,) * dim)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    @property
    def cell_volume(self) -> float:
        return self.volume / self.size

    @property
    def nyquist(self) -> Tuple[float, ...]:
        return tuple(np.pi * n / length for n, length in zip(self.points, self.lengths))

    @property
    def label(self) -> str:
        return f"{self.dim}d"

    def coordinates(self, axis: int) -> np.ndarray:
        """Point coordinates x_n = n L / N along one axis"""
        n = self.points[axis]
        return np.arange(n) * (self.lengths[axis] / n)

    def position_mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*(self.coordinates(a) for a in range(self.dim)), indexing='ij'))

    def wavenumbers(self, axis: int) -> np.ndarray:
        """k = 2 pi m / L in standard DFT order, m in [-N/2, N/2)"""
        n = self.points[axis]
        return 2.0 * np.pi * np.fft.fftfreq(n, d=self.lengths[axis] / n)

    def k_mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*(self.wavenumbers(a) for a in range(self.dim)), indexing='ij'))

    def k_squared(self) -> np.ndarray:
        return sum(k ** 2 for k in self.k_mesh())

    def omega(self, mass: Mass) -> np.ndarray:
        """Continuum dispersion sqrt(k.k + m^2) on the exact DFT wavevectors"""
        return np.sqrt(self.k_squared() + mass.m ** 2)

    def index_of(self, k: Sequence[float]) -> Optional[Tuple[int, ...]]:
        """Array index of an admissible wavevector, None if k is not on the grid"""
        k = np.asarray(k, dtype=float).reshape(-1)
        if k.size != self.dim:
            return None
        index = []
        for axis in range(self.dim):
            n, length = self.points[axis], self.lengths[axis]
            m_real = k[axis] * length / (2.0 * np.pi)
            m_int = int(np.rint(m_real))
            if abs(m_real - m_int) > ADMISSIBLE_TOL * max(1.0, abs(m_real)):
                return None
            if not -n // 2 <= m_int < n // 2:
                return None
            index.append(m_int % n)
        return tuple(index)

    def to_dict(self) -> dict:
        return {'dim': self.dim, 'points': list(self.points), 'lengths': list(self.lengths)}

    @classmethod
    def from_dict(cls, data: dict) -> 'SpatialGrid':
        try:
            dim = int(data['dim'])
            points = data.get('points', data.get('n'))
            lengths = data.get('lengths', [2.0 * np.pi] * dim)
            if np.isscalar(points):
                points = [points] * dim
            if np.isscalar(lengths):
                lengths = [lengths] * dim
            return cls(dim, tuple(points), tuple(lengths))
        except (KeyError, TypeError) as e:
            raise GridError(f"bad grid spec {data!r}: {e}") from e


def grid_wavevectors(grid: SpatialGrid) -> np.ndarray:
    """All admissible wavevectors, shape (prod N, dim)

    Row-major over the integer index tuple; along each axis the frequencies are
    in standard DFT order (0, 1, ..., N/2-1, -N/2, ..., -1) times 2 pi / L.
    """
    return np.stack([k.reshape(-1) for k in grid.k_mesh()], axis=-1)


def forward_transform(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    return np.fft.fftn(values) * grid.cell_volume


def inverse_transform(coeffs: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    return np.fft.ifftn(coeffs) / grid.cell_volume


def reflect(coeffs: np.ndarray) -> np.ndarray:
    """Coefficient array re-indexed at -k (index -n mod N on every axis)"""
    out = np.flip(coeffs)
    return np.roll(out, 1, axis=tuple(range(coeffs.ndim)))
