#!/usr/bin/env python3
"""
Exact continuum plane-wave modes

A ModeSet represents the manifestly real field

    phi(x) = sum_j w_j [a_j exp(-i(omega_j t - k_j.x)) + c.c.] / (2 omega_j)

with w_j = weight_j / (2 pi)^d, the discrete version of the invariant measure
d^d p / ((2 pi)^d 2 omega). The weight of a mode is the momentum-space cell
Delta^d p it stands for; on a grid that cell is (2 pi)^d / V, which makes a
mode with amplitude a equivalent to alpha_k = a / (2 omega) at t = 0.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .errors import GridError, ParameterError, SnapshotError
from .fields import LatticeField, Spectrum
from .grid import Mass, SpatialGrid

logger = logging.getLogger(__name__)

MODESET_FORMAT = 'kg-modeset/1'

# Two wavevectors closer than this (relative) count as the same mode
K_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class Mode:
    """One plane wave: wavevector, complex amplitude and measure weight"""

    k: Tuple[float, ...]
    amplitude: complex
    weight: float

    def __post_init__(self):
        object.__setattr__(self, 'k', tuple(float(c) for c in np.atleast_1d(self.k)))
        object.__setattr__(self, 'amplitude', complex(self.amplitude))
        weight = float(self.weight)
        if not np.isfinite(weight) or weight <= 0.0:
            raise ParameterError(f"mode weight must be positive, got {self.weight!r}")
        object.__setattr__(self, 'weight', weight)

    def omega(self, mass: Mass) -> float:
        return float(np.sqrt(np.dot(self.k, self.k) + mass.m ** 2))


def same_k(k1: Sequence[float], k2: Sequence[float]) -> bool:
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    scale = max(1.0, float(np.max(np.abs(k1))), float(np.max(np.abs(k2))))
    return bool(np.max(np.abs(k1 - k2)) <= K_MATCH_TOL * scale)


@dataclass(frozen=True)
class ModeSet:
    """Finite list of exact modes with pairwise distinct wavevectors"""

    mass: Mass
    time: float
    dim: int
    modes: Tuple[Mode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise GridError(f"dim must be 1, 2 or 3, got {self.dim!r}")
        modes = tuple(self.modes)
        for j, mode in enumerate(modes):
            if len(mode.k) != self.dim:
                raise GridError(f"mode {j} has k={mode.k}, expected {self.dim} components")
        for i in range(len(modes)):
            for j in range(i + 1, len(modes)):
                if same_k(modes[i].k, modes[j].k):
                    raise ParameterError(f"modes {i} and {j} share wavevector {modes[i].k}")
        object.__setattr__(self, 'modes', modes)
        object.__setattr__(self, 'time', float(self.time))

    def __len__(self) -> int:
        return len(self.modes)

    def omegas(self) -> np.ndarray:
        return np.array([mode.omega(self.mass) for mode in self.modes])

    def measure(self) -> np.ndarray:
        """weight_j / (2 pi)^d per mode"""
        return np.array([mode.weight for mode in self.modes]) / (2.0 * np.pi) ** self.dim

    def to_spectrum(self, grid: SpatialGrid) -> Spectrum:
        """Exact embedding of a grid-admissible mode set"""
        self._check_grid(grid)
        alpha = np.zeros(grid.shape, dtype=complex)
        for index, mode, w, omega in zip(self._indices(grid), self.modes, self.measure(), self.omegas()):
            alpha[index] = grid.volume * w * mode.amplitude * np.exp(-1j * omega * self.time) / (2.0 * omega)
        return Spectrum(grid, self.mass, self.time, alpha)

    def _check_grid(self, grid: SpatialGrid) -> None:
        if grid.dim != self.dim:
            raise GridError(f"mode set is {self.dim}d, grid is {grid.dim}d")

    def _indices(self, grid: SpatialGrid) -> List[Tuple[int, ...]]:
        indices = []
        for j, mode in enumerate(self.modes):
            index = grid.index_of(mode.k)
            if index is None:
                raise GridError(f"mode {j} with k={mode.k} is not admissible on {grid}")
            indices.append(index)
        return indices


def modeset_to_lattice(modeset: ModeSet, grid: SpatialGrid) -> LatticeField:
    """Pointwise evaluation of the mode sum and its time derivative"""
    modeset._check_grid(grid)
    modeset._indices(grid)
    positions = grid.position_mesh()
    phi = np.zeros(grid.shape)
    pi = np.zeros(grid.shape)
    for mode, w, omega in zip(modeset.modes, modeset.measure(), modeset.omegas()):
        k_dot_x = sum(k * x for k, x in zip(mode.k, positions))
        wave = mode.amplitude * np.exp(-1j * (omega * modeset.time - k_dot_x))
        phi += (w / omega) * wave.real
        pi += w * wave.imag
    logger.debug(f"evaluated {len(modeset)} modes on {grid.label} grid")
    return LatticeField(grid, modeset.mass, modeset.time, phi, pi)


def modeset_from_spectrum(spectrum: Spectrum) -> ModeSet:
    """One mode per nonzero alpha_k, each carrying one grid cell of momentum space"""
    grid = spectrum.grid
    weight = (2.0 * np.pi) ** grid.dim / grid.volume
    omega = spectrum.omega
    k_mesh = grid.k_mesh()
    modes = []
    for index in zip(*np.nonzero(spectrum.alpha)):
        k = tuple(float(k_axis[index]) for k_axis in k_mesh)
        # alpha_k = V w a exp(-i omega t) / (2 omega) with V w = 1
        amplitude = 2.0 * omega[index] * spectrum.alpha[index] * np.exp(1j * omega[index] * spectrum.time)
        modes.append(Mode(k, amplitude, weight))
    return ModeSet(spectrum.mass, spectrum.time, grid.dim, tuple(modes))


def boost_modeset(modeset: ModeSet, rapidity: float, axis: int) -> ModeSet:
    """Lorentz boost along one axis; amplitudes are scalars and stay put

    (omega, k_axis) -> (omega cosh + k_axis sinh, k_axis cosh + omega sinh),
    weight -> weight omega' / omega so that weight / omega is invariant.
    """
    if not isinstance(axis, (int, np.integer)) or not 0 <= axis < modeset.dim:
        raise ParameterError(f"axis must be an integer in [0, {modeset.dim}), got {axis!r}")
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    boosted = []
    for mode in modeset.modes:
        omega = mode.omega(modeset.mass)
        k = list(mode.k)
        omega_new = omega * ch + k[axis] * sh
        k[axis] = k[axis] * ch + omega * sh
        boosted.append(Mode(tuple(k), mode.amplitude, mode.weight * omega_new / omega))
    return ModeSet(modeset.mass, modeset.time, modeset.dim, tuple(boosted))


def modeset_to_dict(modeset: ModeSet) -> Dict[str, Any]:
    return {
        'format': MODESET_FORMAT,
        'dim': modeset.dim,
        'mass': modeset.mass.m,
        'time': modeset.time,
        'modes': [
            {
                'k': list(mode.k),
                'amplitude': [mode.amplitude.real, mode.amplitude.imag],
                'weight': mode.weight,
            }
            for mode in modeset.modes
        ],
    }


def modeset_from_dict(data: Dict[str, Any]) -> ModeSet:
    if not isinstance(data, dict) or data.get('format', MODESET_FORMAT) != MODESET_FORMAT:
        raise SnapshotError(f"not a {MODESET_FORMAT} document")
    try:
        modes = []
        for entry in data.get('modes', []):
            amplitude = entry['amplitude']
            if isinstance(amplitude, (list, tuple)):
                amplitude = complex(amplitude[0], amplitude[1])
            modes.append(Mode(tuple(entry['k']), complex(amplitude), entry['weight']))
        return ModeSet(Mass(data['mass']), float(data.get('time', 0.0)), int(data['dim']), tuple(modes))
    except (KeyError, TypeError, IndexError) as e:
        raise SnapshotError(f"malformed mode set: {e}") from e


def modeset_to_json(modeset: ModeSet) -> str:
    return json.dumps(modeset_to_dict(modeset), indent=2)


def modeset_from_json(text: str) -> ModeSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SnapshotError(f"mode set is not valid JSON: {e}") from e
    return modeset_from_dict(data)
