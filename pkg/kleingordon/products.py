#!/usr/bin/env python3
"""
Conserved current, inner product, norm and energy for real Klein-Gordon fields

The (b, a) family of conserved currents is evaluated in its projector-free
form with psi = D^{-1/2} d_t phi:

    j^mu = (b/2) { psi1 <->d^mu phi2 - phi1 <->d^mu psi2
                   + i a [ phi1 <->d^mu phi2 + psi1 <->d^mu psi2 ] }

with f <->d g = f (d g) - (d f) g and d^i = -d_i (metric +,-,-,-). Its charge
is the bilinear form

    (phi1, phi2)_{b,a} = b int [ phi1 sqrt(D) phi2 + pi1 D^{-1/2} pi2
                                 + i a (phi1 pi2 - pi1 phi2) ]

which is real and symmetric for a = 0 and whose diagonal does not depend on a.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np

from .errors import ConsistencyError, ParameterError
from .fields import LatticeField, Spectrum, lattice_to_spectrum, require_compatible, spectrum_to_lattice
from .grid import SpatialGrid
from .modes import ModeSet, same_k
from .operators import OperatorKind, apply_operator, spectral_derivative, spectral_laplacian

logger = logging.getLogger(__name__)

DEFAULT_B = 1.0

Scalar = Union[float, complex]


@dataclass(frozen=True)
class ProductParams:
    """Overall scale b > 0 and mixing parameter a of the current family"""

    b: float = DEFAULT_B
    a: float = 0.0

    def __post_init__(self):
        b = float(self.b)
        if not np.isfinite(b) or b <= 0.0:
            raise ParameterError(f"b must be positive, got {self.b!r}")
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'a', float(self.a))

    @property
    def symmetric(self) -> bool:
        return self.a == 0.0

    @property
    def semi_definite(self) -> bool:
        return abs(self.a) <= 1.0

    def require_semi_definite(self) -> 'ProductParams':
        if not self.semi_definite:
            raise ParameterError(f"|a| <= 1 required for a positive semi-definite form, got a={self.a}")
        return self


@dataclass(frozen=True, eq=False)
class Current4:
    """Current density j^mu on the grid; complex only when a != 0"""

    j0: np.ndarray
    ji: Tuple[np.ndarray, ...]
    params: ProductParams
    time: float


class MEigenvalues(NamedTuple):
    plus: float
    minus: float
    semi_definite: bool


def matrix_m(a: float) -> np.ndarray:
    return np.array([[1.0, 1j * a], [-1j * a, 1.0]])


def matrix_m_eigenvalues(a: float) -> MEigenvalues:
    """Eigenvalues 1 + a and 1 - a of M; semi-definite iff |a| <= 1"""
    a = float(a)
    return MEigenvalues(1.0 + a, 1.0 - a, abs(a) <= 1.0)


def _integrate(values: np.ndarray, grid: SpatialGrid):
    # np.sum on a contiguous 1-d array is pairwise, so the result is schedule independent
    return np.sum(np.ravel(values)) * grid.cell_volume


def _as_lattice(field) -> LatticeField:
    if isinstance(field, Spectrum):
        return spectrum_to_lattice(field)
    if isinstance(field, LatticeField):
        return field
    raise ParameterError(f"expected a LatticeField or Spectrum, got {type(field).__name__}")


def _finish(real_part: float, imag_part: float, params: ProductParams) -> Scalar:
    if params.symmetric:
        return float(real_part)
    return complex(real_part, params.a * imag_part)


def inner_product_spatial(f1, f2, params: ProductParams = ProductParams()) -> Scalar:
    """b int [phi1 sqrt(D) phi2 + pi1 D^{-1/2} pi2 + i a phi1 <->d_t phi2]"""
    f1, f2 = _as_lattice(f1), _as_lattice(f2)
    require_compatible(f1, f2)
    grid, mass = f1.grid, f1.mass
    sym = (f1.phi * apply_operator(OperatorKind.SqrtD, f2.phi, grid, mass)
           + f1.pi * apply_operator(OperatorKind.InvSqrtD, f2.pi, grid, mass))
    real_part = params.b * _integrate(sym, grid)
    imag_part = 0.0
    if not params.symmetric:
        imag_part = params.b * _integrate(f1.phi * f2.pi - f1.pi * f2.phi, grid)
    return _finish(real_part, imag_part, params)


def inner_product_quadform(f1, f2, params: ProductParams = ProductParams()) -> Scalar:
    """b int (D^{1/4} phi1, D^{-1/4} pi1) M (D^{1/4} phi2, D^{-1/4} pi2)^T"""
    f1, f2 = _as_lattice(f1), _as_lattice(f2)
    require_compatible(f1, f2)
    grid, mass = f1.grid, f1.mass
    q1 = apply_operator(OperatorKind.QuarterD, f1.phi, grid, mass)
    q2 = apply_operator(OperatorKind.QuarterD, f2.phi, grid, mass)
    r1 = apply_operator(OperatorKind.InvQuarterD, f1.pi, grid, mass)
    r2 = apply_operator(OperatorKind.InvQuarterD, f2.pi, grid, mass)
    real_part = params.b * _integrate(q1 * q2 + r1 * r2, grid)
    imag_part = 0.0
    if not params.symmetric:
        imag_part = params.b * _integrate(q1 * r2 - r1 * q2, grid)
    return _finish(real_part, imag_part, params)


def _align_modes(s1: ModeSet, s2: ModeSet) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Amplitude pairs over the union of wavevectors, plus weights and omegas"""
    if s1.mass != s2.mass or s1.dim != s2.dim:
        raise ParameterError("mode sets differ in mass or dimension")
    a1, a2, weights, omegas = [], [], [], []
    used = set()
    for mode in s1.modes:
        partner = None
        for j, other in enumerate(s2.modes):
            if j not in used and same_k(mode.k, other.k):
                partner = j
                break
        if partner is not None:
            other = s2.modes[partner]
            if not np.isclose(mode.weight, other.weight, rtol=1e-12, atol=0.0):
                raise ParameterError(f"modes at k={mode.k} carry different weights "
                                     f"{mode.weight} and {other.weight}")
            used.add(partner)
            a2.append(other.amplitude)
        else:
            a2.append(0.0)
        a1.append(mode.amplitude)
        weights.append(mode.weight)
        omegas.append(mode.omega(s1.mass))
    for j, other in enumerate(s2.modes):
        if j not in used:
            a1.append(0.0)
            a2.append(other.amplitude)
            weights.append(other.weight)
            omegas.append(other.omega(s2.mass))
    return (np.array(a1, dtype=complex), np.array(a2, dtype=complex),
            np.array(weights, dtype=float), np.array(omegas, dtype=float))


def inner_product_modes(s1, s2, params: ProductParams = ProductParams()) -> Scalar:
    """Mode-space form of the bilinear form

    Spectrum:  (4b/V) sum_k omega_k (Re + i a Im)[conj(alpha1_k) alpha2_k]
    ModeSet:   sum_j weight_j / ((2 pi)^d omega_j) b (Re + i a Im)[conj(a1_j) a2_j]

    The ModeSet sum is the discrete version of int d^dp / ((2 pi)^d 2 omega)
    2b Re[conj(a1) a2] for a = 0.
    """
    if isinstance(s1, LatticeField):
        s1 = lattice_to_spectrum(s1)
    if isinstance(s2, LatticeField):
        s2 = lattice_to_spectrum(s2)
    if isinstance(s1, Spectrum) and isinstance(s2, Spectrum):
        require_compatible(s1, s2)
        overlap = np.conj(s1.alpha) * s2.alpha
        scale = 4.0 * params.b / s1.grid.volume
        real_part = scale * np.sum(np.ravel(s1.omega * overlap.real))
        imag_part = scale * np.sum(np.ravel(s1.omega * overlap.imag))
        return _finish(real_part, imag_part, params)
    if isinstance(s1, ModeSet) and isinstance(s2, ModeSet):
        a1, a2, weights, omegas = _align_modes(s1, s2)
        if a1.size == 0:
            return _finish(0.0, 0.0, params)
        overlap = np.conj(a1) * a2
        measure = params.b * weights / ((2.0 * np.pi) ** s1.dim * omegas)
        return _finish(np.sum(measure * overlap.real), np.sum(measure * overlap.imag), params)
    raise ParameterError(f"cannot pair {type(s1).__name__} with {type(s2).__name__}")


_FORMS = {
    'spatial': inner_product_spatial,
    'quadform': inner_product_quadform,
    'modes': inner_product_modes,
}


def inner_product(f1, f2, params: ProductParams = ProductParams(), form: str = 'spatial') -> Scalar:
    try:
        return _FORMS[form](f1, f2, params)
    except KeyError:
        raise ParameterError(f"unknown inner product form {form!r}; choose from {sorted(_FORMS)}") from None


def norm(field, b: float = DEFAULT_B, a: float = 0.0) -> float:
    """||phi||_b^2 = (phi, phi)_{b,a}, the same for every a

    LatticeFields use the spatial form; Spectrum and ModeSet use the mode sum.
    Raises ConsistencyError if the diagonal picks up an imaginary part.
    """
    params = ProductParams(b=b, a=a)
    if isinstance(field, LatticeField):
        value = inner_product_spatial(field, field, params)
    else:
        value = inner_product_modes(field, field, params)
    value = complex(value)
    if abs(value.imag) > 1e-12 * max(abs(value.real), np.finfo(float).tiny):
        raise ConsistencyError(f"norm with a={a} has imaginary part {value.imag:.3e}")
    return value.real


def mode_norm_contributions(spectrum: Spectrum, b: float = DEFAULT_B) -> np.ndarray:
    """Per-k share (4b/V) omega_k |alpha_k|^2 of the norm"""
    params = ProductParams(b=b)
    return 4.0 * params.b / spectrum.grid.volume * spectrum.omega * np.abs(spectrum.alpha) ** 2


def naive_symplectic(f1, f2) -> complex:
    """int phi1 i <->d_t phi2; identically zero when f1 = f2"""
    f1, f2 = _as_lattice(f1), _as_lattice(f2)
    require_compatible(f1, f2)
    return 1j * complex(_integrate(f1.phi * f2.pi - f1.pi * f2.phi, f1.grid))


def total_energy(field) -> float:
    """E = int [pi^2 + (grad phi)^2 + m^2 phi^2] / 2, with the gradient term as phi (D - m^2) phi"""
    field = _as_lattice(field)
    d_phi = apply_operator(OperatorKind.D, field.phi, field.grid, field.mass)
    return float(0.5 * _integrate(field.pi ** 2 + field.phi * d_phi, field.grid))


class _Jet:
    """Value, first and second time derivative of one factor in the current"""

    def __init__(self, value: np.ndarray, rate: np.ndarray, accel: np.ndarray, grid: SpatialGrid):
        self.value = value
        self.rate = rate
        self.accel = accel
        self.grid = grid
        self._gradient = None
        self._laplacian = None

    @property
    def gradient(self) -> List[np.ndarray]:
        if self._gradient is None:
            self._gradient = [spectral_derivative(self.value, self.grid, axis) for axis in range(self.grid.dim)]
        return self._gradient

    @property
    def laplacian(self) -> np.ndarray:
        if self._laplacian is None:
            self._laplacian = spectral_laplacian(self.value, self.grid)
        return self._laplacian


def _jets(field: LatticeField, accel: Optional[np.ndarray] = None) -> Tuple[_Jet, _Jet]:
    """(phi, psi) jets; psi = D^{-1/2} pi, second derivatives from the equation of motion"""
    grid, mass = field.grid, field.mass
    if accel is None:
        accel = -apply_operator(OperatorKind.D, field.phi, grid, mass)
    else:
        accel = np.asarray(accel, dtype=float).reshape(grid.shape)
    phi = _Jet(field.phi, field.pi, accel, grid)
    psi = _Jet(apply_operator(OperatorKind.InvSqrtD, field.pi, grid, mass),
               apply_operator(OperatorKind.InvSqrtD, accel, grid, mass),
               -apply_operator(OperatorKind.SqrtD, field.pi, grid, mass),
               grid)
    return phi, psi


class _Term:
    """f <->d^mu g and its divergence pieces"""

    def __init__(self, f: _Jet, g: _Jet, with_space: bool = True, with_divergence: bool = False):
        self.time = f.value * g.rate - f.rate * g.value
        self.space = None
        if with_space:
            self.space = [-(f.value * dg - df * g.value) for df, dg in zip(f.gradient, g.gradient)]
        self.dt_time = None
        self.div_space = None
        if with_divergence:
            self.dt_time = f.value * g.accel - f.accel * g.value
            # sum_i d_i of -(f d_i g - d_i f g); the first-derivative products cancel
            self.div_space = -(f.value * g.laplacian - f.laplacian * g.value)


def _combine(params: ProductParams, sym_a, sym_b, anti_a, anti_b):
    """(b/2)[sym_a - sym_b + i a (anti_a + anti_b)]"""
    out = 0.5 * params.b * (sym_a - sym_b)
    if params.symmetric:
        return out
    return out + 0.5j * params.b * params.a * (anti_a + anti_b)


def current_density(f1: LatticeField, f2: LatticeField, params: ProductParams = ProductParams()) -> Current4:
    f1, f2 = _as_lattice(f1), _as_lattice(f2)
    require_compatible(f1, f2)
    phi1, psi1 = _jets(f1)
    phi2, psi2 = _jets(f2)
    t_psi_phi = _Term(psi1, phi2)
    t_phi_psi = _Term(phi1, psi2)
    t_phi_phi = t_psi_psi = None
    if not params.symmetric:
        t_phi_phi = _Term(phi1, phi2)
        t_psi_psi = _Term(psi1, psi2)
    j0 = _combine(params, t_psi_phi.time, t_phi_psi.time,
                  t_phi_phi.time if t_phi_phi else None, t_psi_psi.time if t_psi_psi else None)
    ji = tuple(
        _combine(params, t_psi_phi.space[i], t_phi_psi.space[i],
                 t_phi_phi.space[i] if t_phi_phi else None, t_psi_psi.space[i] if t_psi_psi else None)
        for i in range(f1.grid.dim)
    )
    if params.symmetric:
        for component in (j0,) + ji:
            if np.iscomplexobj(component):
                raise ConsistencyError("current of real fields came out complex")
    return Current4(j0, ji, params, f1.time)


def continuity_terms(f1: LatticeField, f2: LatticeField, params: ProductParams = ProductParams(),
                     accelerations: Optional[Tuple[np.ndarray, np.ndarray]] = None
                     ) -> Tuple[np.ndarray, np.ndarray]:
    """(d_t j^0, div j) evaluated pointwise

    d_t j^0 uses the carried rates and second time derivatives; by default the
    latter come from the equation of motion, d_t^2 phi = -D phi. Passing
    `accelerations` replaces them with arbitrary profiles, which is how an
    off-shell configuration is represented. The divergence is spectral.
    """
    f1, f2 = _as_lattice(f1), _as_lattice(f2)
    require_compatible(f1, f2)
    accel1, accel2 = accelerations if accelerations is not None else (None, None)
    phi1, psi1 = _jets(f1, accel1)
    phi2, psi2 = _jets(f2, accel2)
    terms = [_Term(psi1, phi2, False, True), _Term(phi1, psi2, False, True)]
    if not params.symmetric:
        terms += [_Term(phi1, phi2, False, True), _Term(psi1, psi2, False, True)]
    anti = (terms[2], terms[3]) if len(terms) == 4 else (None, None)
    dt_j0 = _combine(params, terms[0].dt_time, terms[1].dt_time,
                     anti[0].dt_time if anti[0] else None, anti[1].dt_time if anti[1] else None)
    div_j = _combine(params, terms[0].div_space, terms[1].div_space,
                     anti[0].div_space if anti[0] else None, anti[1].div_space if anti[1] else None)
    return dt_j0, div_j


def continuity_residual(f1: LatticeField, f2: LatticeField, params: ProductParams = ProductParams(),
                        accelerations: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> float:
    """max |d_t j^0 + div j| over the grid"""
    dt_j0, div_j = continuity_terms(f1, f2, params, accelerations)
    residual = float(np.max(np.abs(dt_j0 + div_j)))
    logger.debug(f"continuity residual {residual:.3e} (a={params.a})")
    return residual
