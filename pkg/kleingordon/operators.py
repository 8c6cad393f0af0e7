#!/usr/bin/env python3
"""
Pseudo-differential operators built from D = -laplacian + m^2

All operators are exact Fourier multipliers (powers of omega(k)); none is
approximated by finite differences. Time derivatives are never taken
numerically: the rate data (pi for a real field) is carried alongside the
values and the equation of motion supplies second derivatives.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple, Union

import numpy as np

from .errors import GridError, ParameterError
from .fields import LatticeField, _frozen
from .grid import Mass, SpatialGrid

logger = logging.getLogger(__name__)


class OperatorKind(Enum):
    """Fourier multiplier omega(k)**power"""

    D = 2.0
    SqrtD = 1.0
    InvSqrtD = -1.0
    QuarterD = 0.5
    InvQuarterD = -0.5

    @property
    def power(self) -> float:
        return self.value

    def multiplier(self, grid: SpatialGrid, mass: Mass) -> np.ndarray:
        omega = grid.omega(mass)
        if self is OperatorKind.D:
            return omega ** 2
        if self is OperatorKind.SqrtD:
            return omega
        if self is OperatorKind.InvSqrtD:
            return 1.0 / omega
        return omega ** self.power


def _apply_multiplier(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    result = np.fft.ifftn(np.fft.fftn(values) * multiplier)
    if np.iscomplexobj(values):
        return result
    # multiplier is even in k, so real input stays real up to roundoff
    return result.real


def apply_operator(kind: OperatorKind, values: np.ndarray, grid: SpatialGrid, mass: Mass) -> np.ndarray:
    values = np.asarray(values)
    if values.shape != grid.shape:
        if values.size != grid.size:
            raise GridError(f"array of shape {values.shape} does not fit grid {grid.shape}")
        values = values.reshape(grid.shape)
    return _apply_multiplier(values, kind.multiplier(grid, mass))


def _odd_wavenumbers(grid: SpatialGrid, axis: int) -> np.ndarray:
    k = grid.wavenumbers(axis).copy()
    # sin(k_N x) vanishes on the lattice, so the Nyquist first derivative is zero
    k[grid.points[axis] // 2] = 0.0
    shape = [1] * grid.dim
    shape[axis] = grid.points[axis]
    return k.reshape(shape)


def spectral_derivative(values: np.ndarray, grid: SpatialGrid, axis: int) -> np.ndarray:
    return _apply_multiplier(np.asarray(values), 1j * _odd_wavenumbers(grid, axis))


def spectral_gradient(values: np.ndarray, grid: SpatialGrid) -> List[np.ndarray]:
    return [spectral_derivative(values, grid, axis) for axis in range(grid.dim)]


def spectral_second_derivative(values: np.ndarray, grid: SpatialGrid, axis: int) -> np.ndarray:
    k = grid.wavenumbers(axis)
    shape = [1] * grid.dim
    shape[axis] = grid.points[axis]
    return _apply_multiplier(np.asarray(values), -(k ** 2).reshape(shape))


def spectral_laplacian(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    return _apply_multiplier(np.asarray(values), -grid.k_squared())


@dataclass(frozen=True, eq=False)
class ComplexLatticeField:
    """Complex on-shell data (values and their time derivative), e.g. phi^(+)"""

    grid: SpatialGrid
    mass: Mass
    time: float
    values: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen(self.values, self.grid, np.complex128, 'values'))
        object.__setattr__(self, 'rates', _frozen(self.rates, self.grid, np.complex128, 'rates'))
        object.__setattr__(self, 'time', float(self.time))

    @classmethod
    def from_real(cls, field: LatticeField) -> 'ComplexLatticeField':
        return cls(field.grid, field.mass, field.time, field.phi, field.pi)

    def __add__(self, other: 'ComplexLatticeField') -> 'ComplexLatticeField':
        return ComplexLatticeField(self.grid, self.mass, self.time,
                                   self.values + other.values, self.rates + other.rates)

    def __sub__(self, other: 'ComplexLatticeField') -> 'ComplexLatticeField':
        return ComplexLatticeField(self.grid, self.mass, self.time,
                                   self.values - other.values, self.rates - other.rates)


AnyField = Union[LatticeField, ComplexLatticeField]


def _on_shell_pair(field: AnyField) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(field, LatticeField):
        return field.phi, field.pi
    return field.values, field.rates


def _parse_sign(sign: Union[int, str]) -> int:
    if sign in (1, '+', '+1'):
        return 1
    if sign in (-1, '-', '-1'):
        return -1
    raise ParameterError(f"projector sign must be + or -, got {sign!r}")


def project(sign: Union[int, str], field: AnyField) -> ComplexLatticeField:
    """phi^(+-) = (phi +- i D^{-1/2} d_t phi) / 2

    The rate of the result follows from the equation of motion:
    d_t phi^(+-) = (d_t phi -+ i sqrt(D) phi) / 2.
    """
    s = _parse_sign(sign)
    values, rates = _on_shell_pair(field)
    grid, mass = field.grid, field.mass
    half = 0.5 * values
    shift = 0.5j * apply_operator(OperatorKind.InvSqrtD, rates, grid, mass)
    half_rate = 0.5 * rates
    shift_rate = 0.5j * apply_operator(OperatorKind.SqrtD, values, grid, mass)
    if s > 0:
        out, out_rate = half + shift, half_rate - shift_rate
    else:
        out, out_rate = half - shift, half_rate + shift_rate
    return ComplexLatticeField(grid, mass, field.time, out, out_rate)


def grading(field: AnyField) -> ComplexLatticeField:
    """N phi = i D^{-1/2} d_t phi = phi^(+) - phi^(-)

    Eigenvalue +1 on positive-frequency data, -1 on negative-frequency data.
    The rate is i D^{-1/2} d_t^2 phi = -i sqrt(D) phi on shell, so the result
    can be graded again (N^2 = 1 on solutions).
    """
    values, rates = _on_shell_pair(field)
    grid, mass = field.grid, field.mass
    out = 1j * apply_operator(OperatorKind.InvSqrtD, rates, grid, mass)
    out_rate = -1j * apply_operator(OperatorKind.SqrtD, values, grid, mass)
    return ComplexLatticeField(grid, mass, field.time, out, out_rate)
