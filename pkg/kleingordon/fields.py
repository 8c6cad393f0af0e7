#!/usr/bin/env python3
"""
Lattice and spectral representations of a real Klein-Gordon field

A LatticeField holds (phi, pi = d phi / dt) sampled on the grid. A Spectrum
holds the positive-frequency coefficients alpha_k at its own time stamp, so
that at that time

    phi(x) = (1/V) sum_k [alpha_k exp(i k.x) + conj(alpha_k) exp(-i k.x)]

and evolving by dt multiplies alpha_k by exp(-i omega_k dt).
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConsistencyError, GridError, ParameterError
from .grid import (
    Mass,
    SpatialGrid,
    forward_transform,
    inverse_transform,
    reflect,
)

logger = logging.getLogger(__name__)

# Imaginary residue (relative) tolerated when a real field is reassembled
RESIDUE_DISCARD = 1e-13
RESIDUE_FATAL = 1e-10

TIME_TOL = 1e-12


def _frozen(values: np.ndarray, grid: SpatialGrid, dtype, name: str) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    if array.size != grid.size:
        raise GridError(f"{name} has {array.size} entries, grid needs {grid.size}")
    array = array.reshape(grid.shape)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LatticeField:
    """Real field values and time derivatives on the grid at one time"""

    grid: SpatialGrid
    mass: Mass
    time: float
    phi: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        for name in ('phi', 'pi'):
            values = np.asarray(getattr(self, name))
            if np.iscomplexobj(values):
                raise GridError(f"{name} must be real-valued")
            object.__setattr__(self, name, _frozen(values, self.grid, np.float64, name))
        object.__setattr__(self, 'time', float(self.time))

    @classmethod
    def zeros(cls, grid: SpatialGrid, mass: Mass, time: float = 0.0) -> 'LatticeField':
        return cls(grid, mass, time, np.zeros(grid.shape), np.zeros(grid.shape))

    def scaled(self, factor: float) -> 'LatticeField':
        return LatticeField(self.grid, self.mass, self.time, factor * self.phi, factor * self.pi)

    def __add__(self, other: 'LatticeField') -> 'LatticeField':
        require_compatible(self, other)
        return LatticeField(self.grid, self.mass, self.time, self.phi + other.phi, self.pi + other.pi)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Positive-frequency coefficient alpha_k for every admissible k"""

    grid: SpatialGrid
    mass: Mass
    time: float
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _frozen(self.alpha, self.grid, np.complex128, 'alpha'))
        object.__setattr__(self, 'time', float(self.time))

    @property
    def omega(self) -> np.ndarray:
        return self.grid.omega(self.mass)

    @classmethod
    def zeros(cls, grid: SpatialGrid, mass: Mass, time: float = 0.0) -> 'Spectrum':
        return cls(grid, mass, time, np.zeros(grid.shape, dtype=complex))

    def scaled(self, factor: complex) -> 'Spectrum':
        return Spectrum(self.grid, self.mass, self.time, factor * self.alpha)

    def __add__(self, other: 'Spectrum') -> 'Spectrum':
        require_compatible(self, other)
        return Spectrum(self.grid, self.mass, self.time, self.alpha + other.alpha)

    def conjugate_partner(self) -> np.ndarray:
        """conj(alpha_{-k}): the negative-frequency content at +k"""
        return np.conj(reflect(self.alpha))


FieldLike = Union[LatticeField, Spectrum]


def require_compatible(a, b) -> None:
    """Operands must share grid, mass and time"""
    if a.grid != b.grid:
        raise GridError(f"grid mismatch: {a.grid} vs {b.grid}")
    if a.mass != b.mass:
        raise GridError(f"mass mismatch: {a.mass.m} vs {b.mass.m}")
    if abs(a.time - b.time) > TIME_TOL * max(1.0, abs(a.time)):
        raise GridError(f"time mismatch: {a.time} vs {b.time}")


def lattice_to_spectrum(field: LatticeField) -> Spectrum:
    """alpha_k = (phi_hat_k + i pi_hat_k / omega_k) / 2, the P+ projector in Fourier space"""
    omega = field.grid.omega(field.mass)
    phi_hat = forward_transform(field.phi, field.grid)
    pi_hat = forward_transform(field.pi, field.grid)
    alpha = 0.5 * (phi_hat + 1j * pi_hat / omega)
    return Spectrum(field.grid, field.mass, field.time, alpha)


def _real_part(values: np.ndarray, name: str) -> np.ndarray:
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0:
        return np.zeros(values.shape)
    residue = float(np.max(np.abs(values.imag))) / scale
    if residue > RESIDUE_FATAL:
        raise ConsistencyError(f"{name} has relative imaginary residue {residue:.3e}")
    if residue > RESIDUE_DISCARD:
        logger.debug(f"discarding imaginary residue {residue:.3e} in {name}")
    return values.real.copy()


def spectrum_to_lattice(spectrum: Spectrum) -> LatticeField:
    """Reassemble (phi, pi) at the spectrum's time stamp"""
    grid = spectrum.grid
    omega = spectrum.omega
    partner = spectrum.conjugate_partner()
    phi_hat = spectrum.alpha + partner
    pi_hat = -1j * omega * (spectrum.alpha - partner)
    phi = _real_part(inverse_transform(phi_hat, grid), 'phi')
    pi = _real_part(inverse_transform(pi_hat, grid), 'pi')
    return LatticeField(grid, spectrum.mass, spectrum.time, phi, pi)


def band_mask(grid: SpatialGrid, band_limit: float) -> np.ndarray:
    return np.sqrt(grid.k_squared()) <= band_limit * (1.0 + 1e-12)


def random_field(grid: SpatialGrid, mass: Mass, seed: int,
                 band_limit: Optional[float] = None, time: float = 0.0) -> Spectrum:
    """Seeded random spectrum, band-limited to |k| <= band_limit

    Coefficients are complex standard normal, (X + iY)/sqrt(2) with X, Y drawn
    from numpy's PCG64 generator (np.random.default_rng(seed)): real parts for
    every grid wavevector in canonical order first, then imaginary parts.
    Modes outside the band are zeroed after drawing, so the draw does not
    depend on the band.
    """
    nyquist = min(grid.nyquist)
    if band_limit is None:
        band_limit = nyquist
    band_limit = float(band_limit)
    if band_limit < 0.0 or band_limit > nyquist * (1.0 + 1e-12):
        raise ParameterError(f"band_limit must lie in [0, {nyquist:.6g}], got {band_limit}")
    rng = np.random.default_rng(seed)
    real = rng.standard_normal(grid.shape)
    imag = rng.standard_normal(grid.shape)
    alpha = (real + 1j * imag) / np.sqrt(2.0)
    alpha[~band_mask(grid, band_limit)] = 0.0
    logger.debug(f"random field seed={seed} band={band_limit:.4g} active={int(np.count_nonzero(alpha))}")
    return Spectrum(grid, mass, time, alpha)


def single_mode_spectrum(grid: SpatialGrid, mass: Mass, mode_numbers: Sequence[int],
                         amplitude: complex, time: float = 0.0) -> Spectrum:
    """Spectrum with one nonzero alpha_k, k = 2 pi m / L

    `amplitude` is the pointwise amplitude alpha_k / V, i.e. at the spectrum's
    time phi(x) = amplitude exp(i k.x) + c.c.
    """
    mode_numbers = tuple(int(m) for m in mode_numbers)
    if len(mode_numbers) != grid.dim:
        raise ParameterError(f"need {grid.dim} mode numbers, got {mode_numbers}")
    k = [2.0 * np.pi * m / length for m, length in zip(mode_numbers, grid.lengths)]
    index = grid.index_of(k)
    if index is None:
        raise GridError(f"mode numbers {mode_numbers} are not admissible on {grid}")
    alpha = np.zeros(grid.shape, dtype=complex)
    alpha[index] = complex(amplitude) * grid.volume
    return Spectrum(grid, mass, time, alpha)
