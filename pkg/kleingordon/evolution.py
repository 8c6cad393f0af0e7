#!/usr/bin/env python3
"""
Time evolution: exact phase rotation and a kick-drift-kick leapfrog
"""

import logging
from abc import ABC, abstractmethod
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .errors import ParameterError, StabilityError
from .fields import LatticeField, Spectrum, lattice_to_spectrum, spectrum_to_lattice
from .grid import Mass, SpatialGrid, forward_transform, inverse_transform
from .operators import ComplexLatticeField, OperatorKind

logger = logging.getLogger(__name__)


def evolve_exact(spectrum: Spectrum, dt: float) -> Spectrum:
    """alpha_k -> alpha_k exp(-i omega_k dt), i.e. i d_t alpha = omega alpha"""
    if dt == 0:
        return spectrum
    phase = np.exp(-1j * spectrum.omega * dt)
    return Spectrum(spectrum.grid, spectrum.mass, spectrum.time + dt, spectrum.alpha * phase)


def evolve_field_exact(field: LatticeField, dt: float) -> LatticeField:
    if dt == 0:
        return field
    return spectrum_to_lattice(evolve_exact(lattice_to_spectrum(field), dt))


def leapfrog_stability(grid: SpatialGrid, mass: Mass) -> Tuple[float, float]:
    """(omega_max, dt bound) with dt * omega_max < 2 required"""
    omega_max = float(np.max(grid.omega(mass)))
    return omega_max, 2.0 / omega_max


def check_leapfrog_dt(grid: SpatialGrid, mass: Mass, dt: float) -> None:
    omega_max, max_dt = leapfrog_stability(grid, mass)
    if not abs(dt) * omega_max < 2.0:
        raise StabilityError(dt, omega_max, max_dt)


def evolve_leapfrog(field: LatticeField, dt: float, steps: int) -> LatticeField:
    """Kick-drift-kick for phi'' = -D phi, repeated `steps` times"""
    if steps < 0:
        raise ParameterError(f"steps must be non-negative, got {steps}")
    grid, mass = field.grid, field.mass
    check_leapfrog_dt(grid, mass, dt)
    if steps == 0:
        return field
    d_omega = OperatorKind.D.multiplier(grid, mass)
    phi = field.phi.copy()
    pi = field.pi.copy()
    half = 0.5 * dt
    force = -np.fft.ifftn(np.fft.fftn(phi) * d_omega).real
    for _ in range(steps):
        pi += half * force
        phi += dt * pi
        force = -np.fft.ifftn(np.fft.fftn(phi) * d_omega).real
        pi += half * force
    logger.debug(f"leapfrog: {steps} steps of dt={dt:.4g} on {grid.label} grid")
    return LatticeField(grid, mass, field.time + steps * dt, phi, pi)


class Integrator(ABC):
    """Advances a LatticeField by a number of equal steps"""

    NAMES: Tuple[str, ...] = ()

    def can_handle(self, name: str) -> bool:
        return bool(name) and name.lower() in self.NAMES

    @abstractmethod
    def check(self, field: LatticeField, dt: float) -> None:
        """Raise if dt is unusable for this field"""
        pass

    @abstractmethod
    def evolve(self, field: LatticeField, dt: float, steps: int) -> LatticeField:
        pass

    def states(self, field: LatticeField, dt: float, steps: int) -> Iterator[LatticeField]:
        """Yields the states after 0, 1, ..., steps steps"""
        self.check(field, dt)
        state = field
        yield state
        for _ in range(steps):
            state = self.evolve(state, dt, 1)
            yield state

    def trajectory(self, field: LatticeField, dt: float, steps: int) -> List[LatticeField]:
        return list(self.states(field, dt, steps))


class ExactIntegrator(Integrator):
    """Spectral phase rotation; exact to roundoff for any dt"""

    NAMES = ('exact', 'spectral')

    def check(self, field: LatticeField, dt: float) -> None:
        pass

    def evolve(self, field: LatticeField, dt: float, steps: int) -> LatticeField:
        if steps == 0:
            return field
        return evolve_field_exact(field, steps * dt)

    def states(self, field: LatticeField, dt: float, steps: int) -> Iterator[LatticeField]:
        # every state is rotated from the initial spectrum, so no roundoff accumulates
        spectrum = lattice_to_spectrum(field)
        yield field
        for n in range(1, steps + 1):
            yield spectrum_to_lattice(evolve_exact(spectrum, n * dt))


class LeapfrogIntegrator(Integrator):
    """Symplectic second-order cross-check"""

    NAMES = ('leapfrog', 'kdk')

    def check(self, field: LatticeField, dt: float) -> None:
        check_leapfrog_dt(field.grid, field.mass, dt)

    def evolve(self, field: LatticeField, dt: float, steps: int) -> LatticeField:
        return evolve_leapfrog(field, dt, steps)


class IntegratorFactory:
    """Looks up integrators by name"""

    def __init__(self):
        self._integrators: List[Integrator] = [
            ExactIntegrator(),
            LeapfrogIntegrator(),
        ]

    def get_integrator(self, name: str) -> Integrator:
        for integrator in self._integrators:
            if integrator.can_handle(name):
                logger.debug("Returning " + type(integrator).__name__)
                return integrator
        raise ParameterError(f"unknown integrator {name!r}; choose from {self.list_names()}")

    def register_integrator(self, integrator: Integrator, priority: Optional[int] = None):
        if priority is None:
            self._integrators.append(integrator)
        else:
            self._integrators.insert(priority, integrator)

    def list_names(self) -> List[str]:
        return [integrator.NAMES[0] for integrator in self._integrators]


integrator_factory = IntegratorFactory()


def evolve_complex_exact(field: ComplexLatticeField, dt: float) -> ComplexLatticeField:
    """Exact evolution of complex on-shell data (values, rates)

    Each Fourier coefficient splits into exp(-i omega t) and exp(+i omega t)
    parts, A = (v + i r / omega) / 2 and B = (v - i r / omega) / 2.
    """

    if dt == 0:
        return field
    grid = field.grid
    omega = grid.omega(field.mass)
    v_hat = forward_transform(field.values, grid)
    r_hat = forward_transform(field.rates, grid)
    ahead = 0.5 * (v_hat + 1j * r_hat / omega) * np.exp(-1j * omega * dt)
    behind = 0.5 * (v_hat - 1j * r_hat / omega) * np.exp(1j * omega * dt)
    values = inverse_transform(ahead + behind, grid)
    rates = inverse_transform(-1j * omega * (ahead - behind), grid)
    return ComplexLatticeField(grid, field.mass, field.time + dt, values, rates)
