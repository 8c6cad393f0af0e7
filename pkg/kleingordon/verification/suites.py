#!/usr/bin/env python3
"""
Verification suites

Each suite draws its fields from the context seed, measures residuals of one
group of identities and records them as checks. Relative residuals of
bilinear quantities are scaled by sqrt(||f1||^2 ||f2||^2), the Cauchy-Schwarz
bound, so that nearly orthogonal random pairs do not blow up the ratio.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import StabilityError
from ..evolution import (check_leapfrog_dt, evolve_complex_exact, evolve_exact, evolve_field_exact,
                         integrator_factory, leapfrog_stability)
from ..fields import (LatticeField, Spectrum, band_mask, lattice_to_spectrum, random_field,
                      single_mode_spectrum, spectrum_to_lattice)
from ..grid import SpatialGrid, forward_transform
from ..modes import Mode, ModeSet, boost_modeset, modeset_from_spectrum, modeset_to_lattice
from ..operators import (ComplexLatticeField, OperatorKind, apply_operator, grading, project,
                         spectral_derivative)
from ..products import (Current4, ProductParams, continuity_terms, current_density, inner_product,
                        matrix_m, matrix_m_eigenvalues, mode_norm_contributions, naive_symplectic,
                        norm, total_energy)
from .base import Suite, SuiteContext, relative_error
from .convergence import convergence_study

logger = logging.getLogger(__name__)

FORMS = ('spatial', 'quadform', 'modes')


def _first_1d(ctx: SuiteContext, fallback_points: int = 64) -> SpatialGrid:
    for grid in ctx.grids:
        if grid.dim == 1:
            return grid
    return SpatialGrid.cube(1, fallback_points)


def _scale(f1, f2, b: float = 1.0) -> float:
    return float(np.sqrt(norm(f1, b) * norm(f2, b)))


def _grid_modes(ctx: SuiteContext, grid: SpatialGrid, offset: int, count: int = 6) -> ModeSet:
    """A few admissible modes with random amplitudes, one grid cell of weight each"""
    rng = ctx.rng(grid.dim, offset)
    reach = min(5, min(grid.points) // 2 - 1)
    chosen = []
    while len(chosen) < count:
        numbers = tuple(int(m) for m in rng.integers(-reach, reach + 1, size=grid.dim))
        if numbers not in chosen:
            chosen.append(numbers)
    weight = (2.0 * np.pi) ** grid.dim / grid.volume
    modes = []
    for numbers in chosen:
        k = tuple(2.0 * np.pi * m / length for m, length in zip(numbers, grid.lengths))
        amplitude = complex(rng.standard_normal(), rng.standard_normal())
        modes.append(Mode(k, amplitude, weight))
    return ModeSet(ctx.mass, 0.0, grid.dim, tuple(modes))


def _spatial_derivative(field: ComplexLatticeField, axis: int) -> np.ndarray:
    return spectral_derivative(field.values, field.grid, axis)


def _bidirectional(f: ComplexLatticeField, g: ComplexLatticeField) -> Tuple[np.ndarray, List[np.ndarray]]:
    """f i<->d^mu g with d^i = -d_i"""
    time = 1j * (f.values * g.rates - f.rates * g.values)
    space = [-1j * (f.values * _spatial_derivative(g, axis) - _spatial_derivative(f, axis) * g.values)
             for axis in range(f.grid.dim)]
    return time, space


def projector_current(f1: LatticeField, f2: LatticeField, params: ProductParams) -> Current4:
    """Current in terms of positive/negative-frequency parts

    j^mu = b { (a + 1) phi1^- i<->d^mu phi2^+ + (a - 1) phi1^+ i<->d^mu phi2^- }
    """
    minus1, plus1 = project(-1, f1), project(+1, f1)
    minus2, plus2 = project(-1, f2), project(+1, f2)
    t_mp, s_mp = _bidirectional(minus1, plus2)
    t_pm, s_pm = _bidirectional(plus1, minus2)
    b, a = params.b, params.a
    j0 = b * ((a + 1.0) * t_mp + (a - 1.0) * t_pm)
    ji = tuple(b * ((a + 1.0) * x + (a - 1.0) * y) for x, y in zip(s_mp, s_pm))
    return Current4(j0, ji, params, f1.time)


class ProjectorAlgebraSuite(Suite):
    name = 'projector-algebra'
    anchors = (
        'P+ + P- = 1 on on-shell data',
        'P+-^2 = P+-, P+ P- = 0, conj(phi^+) = phi^-',
        'N = P+ - P-, N^2 = 1, N phi^+- = +-phi^+-',
        'phi^+ carries only exp(-i omega t)',
        'D acts as omega^2 on single-frequency modes',
    )

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            f = ctx.random_lattice(grid, 0)
            plus, minus = project(+1, f), project(-1, f)

            completeness = max(float(np.max(np.abs(plus.values + minus.values - f.phi))),
                               float(np.max(np.abs(plus.rates + minus.rates - f.pi))))
            ctx.check(f"completeness[{label}]", completeness, 0.0)

            pp, mm = project(+1, plus), project(-1, minus)
            ctx.check(f"idempotence[{label}]",
                      max(relative_error(pp.values, plus.values), relative_error(mm.values, minus.values),
                          relative_error(pp.rates, plus.rates), relative_error(mm.rates, minus.rates)),
                      1e-12)

            pm, mp = project(+1, minus), project(-1, plus)
            ctx.check(f"orthogonality[{label}]",
                      max(float(np.max(np.abs(pm.values)) / np.max(np.abs(minus.values))),
                          float(np.max(np.abs(mp.values)) / np.max(np.abs(plus.values)))),
                      1e-12)

            ctx.check(f"reality[{label}]",
                      max(relative_error(np.conj(plus.values), minus.values),
                          relative_error(np.conj(plus.rates), minus.rates)),
                      1e-12)

            graded = grading(f)
            ctx.check(f"grading-split[{label}]",
                      relative_error(graded.values, plus.values - minus.values), 1e-12)
            twice = grading(graded)
            ctx.check(f"grading-involution[{label}]",
                      max(relative_error(twice.values, f.phi), relative_error(twice.rates, f.pi)), 1e-12)
            ctx.check(f"grading-eigenvalues[{label}]",
                      max(relative_error(grading(plus).values, plus.values),
                          relative_error(grading(minus).values, -minus.values)),
                      1e-12)

            dt = 0.37 / ctx.mass.m
            moved = evolve_complex_exact(plus, dt)
            expected = forward_transform(plus.values, grid) * np.exp(-1j * grid.omega(ctx.mass) * dt)
            ctx.check(f"positive-frequency[{label}]",
                      relative_error(forward_transform(moved.values, grid), expected), 1e-12)

            modes = _grid_modes(ctx, grid, 1)
            lattice = modeset_to_lattice(modes, grid)
            # -d_t^2 phi, evaluated pointwise from the modes
            squared = ModeSet(modes.mass, modes.time, modes.dim, tuple(
                Mode(m.k, m.amplitude * m.omega(modes.mass) ** 2, m.weight) for m in modes.modes))
            ctx.check(f"klein-gordon-operator[{label}]",
                      relative_error(apply_operator(OperatorKind.D, lattice.phi, grid, ctx.mass),
                                     modeset_to_lattice(squared, grid).phi),
                      1e-12)


class ConservationExactSuite(Suite):
    name = 'conservation-exact'
    anchors = (
        '(phi1, phi2)_{b,a} is time independent under exact evolution',
        'energy is conserved',
        'exact evolution is reversible',
        'projection commutes with evolution',
    )
    samples = 8

    def run(self, ctx: SuiteContext) -> None:
        t_final = 20.0 / ctx.mass.m
        times = np.linspace(0.0, t_final, self.samples + 1)[1:]
        for grid in self.grids(ctx):
            label = grid.label
            f1, f2 = ctx.random_lattice(grid, 0), ctx.random_lattice(grid, 1)
            s1, s2 = lattice_to_spectrum(f1), lattice_to_spectrum(f2)
            scale = _scale(f1, f2)
            symmetric, mixed = ProductParams(a=0.0), ProductParams(a=0.5)
            start = {(form, p.a): inner_product(f1, f2, p, form) for form in FORMS for p in (symmetric, mixed)}
            energy0 = total_energy(f1)
            drift = {0.0: 0.0, 0.5: 0.0}
            energy_drift = 0.0
            for t in times:
                g1 = spectrum_to_lattice(evolve_exact(s1, t))
                g2 = spectrum_to_lattice(evolve_exact(s2, t))
                for form in FORMS:
                    for p in (symmetric, mixed):
                        change = abs(inner_product(g1, g2, p, form) - start[(form, p.a)]) / scale
                        drift[p.a] = max(drift[p.a], change)
                energy_drift = max(energy_drift, abs(total_energy(g1) - energy0) / energy0)
            ctx.check(f"product-drift[{label}]", drift[0.0], 1e-12, t_final=t_final)
            ctx.check(f"mixed-product-drift[{label}]", drift[0.5], 1e-12, a=0.5)
            ctx.check(f"energy-drift[{label}]", energy_drift, 1e-12)

            back = evolve_exact(evolve_exact(s1, t_final), -t_final)
            ctx.check(f"reversibility[{label}]", relative_error(back.alpha, s1.alpha), 1e-12)

            commuted = project(+1, evolve_field_exact(f1, t_final))
            ahead = evolve_complex_exact(project(+1, f1), t_final)
            ctx.check(f"projection-commutes[{label}]", relative_error(ahead.values, commuted.values), 1e-12)


class ConservationLeapfrogSuite(Suite):
    """Leapfrog keeps the norm inside an O(dt^2) band and refuses unstable steps

    For each mode the kick-drift-kick map conserves pi^2 + omega^2 (1 - h^2/4)
    phi^2 with h = omega dt, so the relative deviation of the true norm and
    energy is at most h^2 / (4 - h^2) for the highest excited omega.
    """

    name = 'conservation-leapfrog'
    anchors = (
        'leapfrog norm and energy oscillate within an O(dt^2) band',
        'dt * omega_max < 2 is enforced',
    )

    def run(self, ctx: SuiteContext) -> None:
        grid = ctx.grids[0]
        m = ctx.mass.m
        band = min(8.0 * 2.0 * np.pi / max(grid.lengths), min(grid.nyquist))
        f = ctx.random_lattice(grid, 0, band)
        dt = 0.01 / m
        steps = int(round(10.0 / m / dt))
        omega_band = float(np.max(grid.omega(ctx.mass)[band_mask(grid, band)]))
        h2 = (omega_band * dt) ** 2
        bound = h2 / (4.0 - h2)

        integrator = integrator_factory.get_integrator('leapfrog')
        norm0, energy0 = norm(f), total_energy(f)
        state = f
        norm_dev = energy_dev = 0.0
        for _ in range(steps):
            state = integrator.evolve(state, dt, 1)
            norm_dev = max(norm_dev, abs(norm(state) - norm0) / norm0)
            energy_dev = max(energy_dev, abs(total_energy(state) - energy0) / energy0)
        slack = 1.0 + 1e-9
        ctx.check(f"norm-oscillation[{grid.label}]", norm_dev, bound * slack,
                  dt=dt, steps=steps, constant=norm_dev / dt ** 2, bound_constant=bound / dt ** 2)
        ctx.check(f"energy-oscillation[{grid.label}]", energy_dev, bound * slack,
                  constant=energy_dev / dt ** 2)

        omega_max, max_dt = leapfrog_stability(grid, ctx.mass)
        try:
            check_leapfrog_dt(grid, ctx.mass, 1.01 * max_dt)
            refused = 0.0
        except StabilityError:
            refused = 1.0
        ctx.check(f"stability-enforced[{grid.label}]", 1.0 - refused, 0.0, omega_max=omega_max)


class AIndependenceSuite(Suite):
    name = 'a-independence'
    anchors = (
        '(f, f)_{b,a} = (f, f)_{b,0} for every a',
        'the self-current does not depend on a',
    )
    a_values = (-1.0, -0.5, 0.5, 1.0)

    def run(self, ctx: SuiteContext) -> None:
        for position, grid in enumerate(self.grids(ctx)):
            count = 20 if position == 0 else 3
            worst = 0.0
            current_worst = 0.0
            for i in range(count):
                f = ctx.random_lattice(grid, i)
                for form in FORMS:
                    reference = inner_product(f, f, ProductParams(a=0.0), form)
                    for a in self.a_values:
                        value = inner_product(f, f, ProductParams(a=a), form)
                        worst = max(worst, abs(value - reference) / reference)
                if i < 2:
                    base = current_density(f, f, ProductParams(a=0.0))
                    mixed = current_density(f, f, ProductParams(a=0.7))
                    current_worst = max(current_worst, relative_error(mixed.j0, base.j0),
                                        *(relative_error(x, y) for x, y in zip(mixed.ji, base.ji)))
            ctx.check(f"self-product[{grid.label}]", worst, 1e-12, fields=count)
            ctx.check(f"self-current[{grid.label}]", current_worst, 1e-12)


class PositivitySuite(Suite):
    name = 'positivity'
    anchors = (
        '||f||^2 > 0 for f != 0 and = 0 for f = 0',
        'a = 0 form is symmetric and bilinear',
        'Cauchy-Schwarz for the a = 0 form',
    )
    fields = 100
    pairs = 10

    def run(self, ctx: SuiteContext) -> None:
        grid = ctx.grids[0]
        label = grid.label
        norms = [norm(ctx.random_lattice(grid, i)) for i in range(self.fields)]
        ctx.check(f"positivity[{label}]", min(norms), np.finfo(float).tiny, kind='min', fields=self.fields)

        zero = LatticeField.zeros(grid, ctx.mass)
        ctx.check(f"zero-field[{label}]",
                  max(abs(norm(zero)), abs(norm(lattice_to_spectrum(zero)))), 0.0)

        symmetry = bilinearity = schwarz = b_scaling = 0.0
        c1, c2 = 1.3, -0.45
        for i in range(self.pairs):
            f1 = ctx.random_lattice(grid, 1000 + 3 * i)
            f2 = ctx.random_lattice(grid, 1001 + 3 * i)
            g = ctx.random_lattice(grid, 1002 + 3 * i)
            n1, n2 = norm(f1), norm(f2)
            scale = np.sqrt(n1 * n2)
            p12 = inner_product(f1, f2)
            symmetry = max(symmetry, abs(p12 - inner_product(f2, f1)) / scale)
            combined = f1.scaled(c1) + f2.scaled(c2)
            expected = c1 * inner_product(f1, g) + c2 * inner_product(f2, g)
            bilinearity = max(bilinearity, abs(inner_product(combined, g) - expected)
                              / (abs(c1) * _scale(f1, g) + abs(c2) * _scale(f2, g)))
            schwarz = max(schwarz, p12 ** 2 / (n1 * n2) - 1.0)
            b_scaling = max(b_scaling, abs(norm(f1, b=2.5) - 2.5 * n1) / n1)
        ctx.check(f"symmetry[{label}]", symmetry, 1e-12)
        ctx.check(f"bilinearity[{label}]", bilinearity, 1e-12)
        ctx.check(f"cauchy-schwarz[{label}]", max(schwarz, 0.0), 1e-12)
        ctx.check(f"b-scaling[{label}]", b_scaling, 1e-12)


class TripleEquivalenceSuite(Suite):
    name = 'triple-equivalence'
    anchors = ('spatial, quadratic-form and mode-sum forms agree',)
    a_values = (0.0, 0.5, -0.5)

    def run(self, ctx: SuiteContext) -> None:
        for position, grid in enumerate(self.grids(ctx)):
            count = 20 if position == 0 else 3
            worst = 0.0
            for i in range(count):
                f1 = ctx.random_lattice(grid, 2 * i)
                f2 = ctx.random_lattice(grid, 2 * i + 1)
                scale = _scale(f1, f2)
                for a in self.a_values:
                    values = [inner_product(f1, f2, ProductParams(a=a), form) for form in FORMS]
                    for x in range(3):
                        for y in range(x + 1, 3):
                            worst = max(worst, abs(values[x] - values[y]) / scale)
            ctx.check(f"forms-agree[{grid.label}]", worst, 1e-10, pairs=count)


class ParsevalSuite(Suite):
    name = 'parseval'
    anchors = (
        'int phi^2 = (1/V) sum |phi_hat|^2',
        'lattice <-> spectrum round trip',
        'mode embeddings agree with the grid spectrum',
    )

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            f = ctx.random_lattice(grid, 0)
            spatial = float(np.sum(f.phi ** 2) * grid.cell_volume)
            spectral = float(np.sum(np.abs(forward_transform(f.phi, grid)) ** 2) / grid.volume)
            ctx.check(f"dft-parseval[{label}]", abs(spatial - spectral) / spatial, 1e-12)

            s = lattice_to_spectrum(f)
            back = spectrum_to_lattice(s)
            again = lattice_to_spectrum(back)
            ctx.check(f"round-trip[{label}]",
                      max(relative_error(back.phi, f.phi), relative_error(back.pi, f.pi),
                          relative_error(again.alpha, s.alpha)),
                      1e-12)

            # a sparse spectrum keeps the pointwise mode evaluation cheap
            sparse = random_field(grid, ctx.mass, ctx.seed_for(grid.dim, 1),
                                  band_limit=min(3.0 * 2.0 * np.pi / max(grid.lengths), min(grid.nyquist)))
            modes = modeset_from_spectrum(sparse)
            ctx.check(f"modeset-embedding[{label}]",
                      max(relative_error(modeset_to_lattice(modes, grid).phi, spectrum_to_lattice(sparse).phi),
                          relative_error(modes.to_spectrum(grid).alpha, sparse.alpha)),
                      1e-12, modes=len(modes))
            ctx.check(f"modeset-norm[{label}]", abs(norm(modes) - norm(sparse)) / norm(sparse), 1e-12)


class BoostInvarianceSuite(Suite):
    name = 'boost-invariance'
    anchors = (
        'ModeSet norm is boost invariant',
        '|a|^2 weight / omega is invariant per mode',
        'boosts along one axis compose additively in rapidity',
    )
    rapidities = (-2.0, -1.0, -0.3, 0.5, 1.0, 2.0)

    def _modes(self, ctx: SuiteContext, dim: int, offset: int, ks=None) -> ModeSet:
        rng = ctx.rng(dim, offset)
        count = 8
        if ks is None:
            ks = [tuple(rng.uniform(-5.0, 5.0, size=dim)) for _ in range(count)]
            weights = rng.uniform(0.5, 2.0, size=count)
        else:
            ks, weights = ks
        modes = tuple(Mode(k, complex(rng.standard_normal(), rng.standard_normal()), w)
                      for k, w in zip(ks, weights))
        return ModeSet(ctx.mass, 0.0, dim, modes)

    def run(self, ctx: SuiteContext) -> None:
        mixed = ProductParams(a=0.5)
        for dim in (1, 2, 3):
            ms1 = self._modes(ctx, dim, 0)
            ms2 = self._modes(ctx, dim, 1, ([m.k for m in ms1.modes], [m.weight for m in ms1.modes]))
            norm0 = norm(ms1)
            pair_scale = float(np.sqrt(norm0 * norm(ms2)))
            pair0 = inner_product(ms1, ms2, mixed, 'modes')
            occupancy0 = np.array([abs(m.amplitude) ** 2 * m.weight / m.omega(ms1.mass) for m in ms1.modes])
            norm_dev = pair_dev = occupancy_dev = 0.0
            for axis in range(dim):
                for eta in self.rapidities:
                    b1, b2 = boost_modeset(ms1, eta, axis), boost_modeset(ms2, eta, axis)
                    norm_dev = max(norm_dev, abs(norm(b1) - norm0) / norm0)
                    pair_dev = max(pair_dev, abs(inner_product(b1, b2, mixed, 'modes') - pair0) / pair_scale)
                    occupancy = np.array([abs(m.amplitude) ** 2 * m.weight / m.omega(b1.mass) for m in b1.modes])
                    occupancy_dev = max(occupancy_dev, relative_error(occupancy, occupancy0))
            label = f"{dim}d"
            ctx.check(f"norm[{label}]", norm_dev, 1e-12)
            ctx.check(f"mixed-product[{label}]", pair_dev, 1e-12)
            ctx.check(f"mode-occupancy[{label}]", occupancy_dev, 1e-12)

            composed = boost_modeset(boost_modeset(ms1, 0.7, 0), 1.3, 0)
            direct = boost_modeset(ms1, 2.0, 0)
            ctx.check(f"composition[{label}]",
                      max(relative_error([m.k for m in composed.modes], [m.k for m in direct.modes]),
                          relative_error([m.weight for m in composed.modes], [m.weight for m in direct.modes])),
                      1e-12)


class ContinuitySuite(Suite):
    name = 'continuity'
    anchors = (
        'd_t j^0 + div j = 0 pointwise on shell',
        'int j^0 equals the bilinear form',
        'off-shell data violates continuity',
    )
    a_values = (0.0, 0.5, 1.0)

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            band = 0.5 * min(grid.nyquist)
            f1, f2 = ctx.random_lattice(grid, 0, band), ctx.random_lattice(grid, 1, band)
            scale = _scale(f1, f2)
            worst = absolute = charge = 0.0
            for a in self.a_values:
                params = ProductParams(a=a)
                dt_j0, div_j = continuity_terms(f1, f2, params)
                residual = float(np.max(np.abs(dt_j0 + div_j)))
                size = max(float(np.max(np.abs(dt_j0))), float(np.max(np.abs(div_j))))
                worst = max(worst, residual / size)
                absolute = max(absolute, residual)
                j0 = current_density(f1, f2, params).j0
                integrated = np.sum(j0) * grid.cell_volume
                charge = max(charge, abs(integrated - inner_product(f1, f2, params)) / scale)
            ctx.check(f"on-shell[{label}]", worst, 1e-10, absolute=absolute)
            ctx.check(f"charge-density[{label}]", charge, 1e-10)

            still = (np.zeros(grid.shape), np.zeros(grid.shape))
            dt_j0, div_j = continuity_terms(f1, f2, ProductParams(), accelerations=still)
            size = max(float(np.max(np.abs(dt_j0))), float(np.max(np.abs(div_j))))
            ctx.check(f"off-shell-power[{label}]", float(np.max(np.abs(dt_j0 + div_j))) / size, 1e-2,
                      kind='min')


class NaiveVanishingSuite(Suite):
    """The naive product of a real field with itself is zero; the norm is not"""

    name = 'naive-vanishing'
    anchors = (
        'int phi i<->d_t phi = 0 for a real field',
        'norm is positive on the same fields',
        'phase-shifted pair: naive product nonzero, a = 0 product zero',
    )
    fields = 5

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            naive_worst, antisymmetry = 0.0, 0.0
            norms = []
            for i in range(self.fields):
                f = ctx.random_lattice(grid, i)
                g = ctx.random_lattice(grid, 100 + i)
                naive_worst = max(naive_worst, abs(naive_symplectic(f, f)))
                norms.append(norm(f))
                antisymmetry = max(antisymmetry,
                                   abs(naive_symplectic(f, g) + naive_symplectic(g, f)) / _scale(f, g))
            ctx.check(f"naive-self[{label}]", naive_worst, 1e-13)
            ctx.check(f"norm-positive[{label}]", min(norms), np.finfo(float).tiny, kind='min')
            ctx.check(f"naive-antisymmetry[{label}]", antisymmetry, 1e-12)

            numbers = (1,) + (0,) * (grid.dim - 1)
            # same mode a quarter period later, taken at the same time stamp
            f1 = spectrum_to_lattice(single_mode_spectrum(grid, ctx.mass, numbers, 0.5))
            f2 = spectrum_to_lattice(single_mode_spectrum(grid, ctx.mass, numbers, -0.5j))
            n = norm(f1)
            ctx.check(f"quarter-period-product[{label}]", abs(inner_product(f1, f2)) / n, 1e-12)
            ctx.check(f"quarter-period-naive[{label}]", abs(naive_symplectic(f1, f2)) / n, 1e-2, kind='min')


class EnergyRelationSuite(Suite):
    name = 'energy-relation'
    anchors = (
        'E = sum_k (omega_k / 2) x per-mode norm',
        'E = 2 omega^2 V |alpha|^2 for a single mode',
    )

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            f = ctx.random_lattice(grid, 0)
            s = lattice_to_spectrum(f)
            weighted = float(np.sum(0.5 * s.omega * mode_norm_contributions(s)))
            energy = total_energy(f)
            ctx.check(f"mode-weighted[{grid.label}]", abs(weighted - energy) / energy, 1e-12)

        grid = _first_1d(ctx)
        amplitude = 0.3 + 0.4j
        worst = 0.0
        for number in (0, 1, 2):
            s = single_mode_spectrum(grid, ctx.mass, (number,), amplitude)
            omega = float(np.sqrt((2.0 * np.pi * number / grid.lengths[0]) ** 2 + ctx.mass.m ** 2))
            energy = total_energy(s)
            closed = 2.0 * omega ** 2 * grid.volume * abs(amplitude) ** 2
            worst = max(worst, abs(energy - 0.5 * omega * norm(s)) / energy, abs(energy - closed) / closed)
        ctx.check(f"single-mode[{grid.label}]", worst, 1e-12)


class ConvergenceOrderSuite(Suite):
    """Leapfrog error ratio per dt halving, against exact evolution

    Runs on a coarse 1d box (16 points) so that the largest step 0.1/m stays
    inside the stability bound.
    """

    name = 'convergence-order'
    anchors = ('leapfrog converges at order 2 in dt',)
    dt_factors = (0.1, 0.05, 0.025)

    def run(self, ctx: SuiteContext) -> None:
        m = ctx.mass.m
        grid = SpatialGrid.cube(1, 16)
        dt_list = [factor / m for factor in self.dt_factors]
        t_final = 10.0 / m
        cases = [
            ('single-mode', spectrum_to_lattice(single_mode_spectrum(grid, ctx.mass, (0,), 0.5))),
            ('random', ctx.random_lattice(grid, 0, band_limit=2.0)),
        ]
        for tag, field in cases:
            try:
                table = convergence_study(dt_list, t_final, field)
            except StabilityError as e:
                ctx.check(f"stable[{tag}]", 1.0, 0.0, error=str(e))
                continue
            ratios = table.ratios
            ctx.check(f"ratio-low[{tag}]", min(ratios), 3.5, kind='min', ratios=ratios)
            ctx.check(f"ratio-high[{tag}]", max(ratios), 4.5)
            ctx.check(f"fitted-order[{tag}]", abs(table.order - 2.0), 0.1, order=table.order)


class MatrixEigenvaluesSuite(Suite):
    name = 'matrix-eigenvalues'
    anchors = (
        'M has eigenvalues 1 + a and 1 - a',
        'semi-definite iff |a| <= 1',
        '|a| > 1 produces a negative eigenvalue',
    )
    # (a, semi-definite)
    cases = ((0.0, True), (0.5, True), (-0.5, True), (1.0, True), (-1.0, True),
             (1.0 + 1e-12, False), (1.5, False), (-2.0, False))

    def run(self, ctx: SuiteContext) -> None:
        worst = 0.0
        wrong_flags = 0
        for a, expected in self.cases:
            numeric = np.sort(np.linalg.eigvalsh(matrix_m(a)))
            closed = matrix_m_eigenvalues(a)
            worst = max(worst, float(np.max(np.abs(numeric - np.sort([closed.plus, closed.minus])))))
            if closed.semi_definite != expected:
                wrong_flags += 1
        ctx.check("eigenvalues", worst, 1e-13)
        ctx.check("definiteness-flag", float(wrong_flags), 0.0)
        ctx.check("indefinite-power", -matrix_m_eigenvalues(1.5).minus, 0.1, kind='min')

        rng = ctx.rng(0)
        vectors = rng.standard_normal((64, 2)) + 1j * rng.standard_normal((64, 2))
        form = np.einsum('ni,ij,nj->n', np.conj(vectors), matrix_m(1.0), vectors).real
        lowest = float(np.min(form / np.sum(np.abs(vectors) ** 2, axis=1)))
        ctx.check("boundary-form", lowest, -1e-14, kind='min')


class SingleModeSuite(Suite):
    """Closed forms for one plane wave against brute-force quadrature

    The quadrature evaluates phi = 2 Re(alpha exp(ikx)) and its rate
    analytically on a fine uniform grid, independent of the FFT machinery.
    """

    name = 'single-mode'
    anchors = ('norm = 4 b omega V |alpha|^2', 'E = (omega / 2) norm(b=1)')
    quadrature_points = 4096

    def run(self, ctx: SuiteContext) -> None:
        grid = _first_1d(ctx)
        length = grid.lengths[0]
        x = np.arange(self.quadrature_points) * length / self.quadrature_points
        dx = length / self.quadrature_points
        amplitude = 0.3 + 0.4j
        norm_worst = energy_worst = 0.0
        for number in (0, 1, 2):
            k = 2.0 * np.pi * number / length
            omega = float(np.sqrt(k ** 2 + ctx.mass.m ** 2))
            wave = amplitude * np.exp(1j * k * x)
            phi = 2.0 * wave.real
            pi = 2.0 * (-1j * omega * wave).real
            s = single_mode_spectrum(grid, ctx.mass, (number,), amplitude)
            f = spectrum_to_lattice(s)
            for b in (1.0, 2.0):
                closed = 4.0 * b * omega * grid.volume * abs(amplitude) ** 2
                quadrature = b * float(np.sum(omega * phi ** 2 + pi ** 2 / omega) * dx)
                values = [closed, quadrature, norm(f, b), norm(s, b)]
                norm_worst = max(norm_worst, (max(values) - min(values)) / closed)
            quad_energy = 0.5 * float(np.sum(pi ** 2 + omega ** 2 * phi ** 2) * dx)
            energies = [quad_energy, total_energy(f), 0.5 * omega * norm(f)]
            energy_worst = max(energy_worst, (max(energies) - min(energies)) / quad_energy)
        ctx.check(f"norm-closed-form[{grid.label}]", norm_worst, 1e-12)
        ctx.check(f"energy-closed-form[{grid.label}]", energy_worst, 1e-12)


class CurrentFormsSuite(Suite):
    name = 'current-forms'
    anchors = (
        'projector form of the current equals the projector-free form',
        'a = 0 current is 2b Re[phi1^- i<->d phi2^+]',
        'self-current is b psi <->d phi',
    )
    a_values = (0.0, 0.5)

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            band = 0.5 * min(grid.nyquist)
            f1, f2 = ctx.random_lattice(grid, 0, band), ctx.random_lattice(grid, 1, band)
            worst = 0.0
            for a in self.a_values:
                params = ProductParams(a=a)
                free = current_density(f1, f2, params)
                framed = projector_current(f1, f2, params)
                worst = max(worst, relative_error(framed.j0, free.j0),
                            *(relative_error(x, y) for x, y in zip(framed.ji, free.ji)))
            ctx.check(f"projector-form[{label}]", worst, 1e-12)

            t0, s0 = _bidirectional(project(-1, f1), project(+1, f2))
            free = current_density(f1, f2)
            ctx.check(f"real-part-form[{label}]",
                      max(relative_error(2.0 * t0.real, free.j0),
                          *(relative_error(2.0 * x.real, y) for x, y in zip(s0, free.ji))),
                      1e-12)

            psi = apply_operator(OperatorKind.InvSqrtD, f1.pi, grid, ctx.mass)
            time = psi * f1.pi + f1.phi * apply_operator(OperatorKind.SqrtD, f1.phi, grid, ctx.mass)
            space = [-(psi * spectral_derivative(f1.phi, grid, axis) - spectral_derivative(psi, grid, axis) * f1.phi)
                     for axis in range(grid.dim)]
            own = current_density(f1, f1)
            ctx.check(f"self-current[{label}]",
                      max(relative_error(own.j0, time), *(relative_error(x, y) for x, y in zip(own.ji, space))),
                      1e-12)


class ModeCountSuite(Suite):
    name = 'mode-count'
    anchors = (
        'norm counts active modes of unit contribution',
        'norm is homogeneous of degree 2 and additive over disjoint modes',
        'per-mode contributions sum to the norm',
    )
    active = 5

    def run(self, ctx: SuiteContext) -> None:
        for grid in self.grids(ctx):
            label = grid.label
            rng = ctx.rng(grid.dim, 7)
            flat = rng.choice(grid.size, size=self.active, replace=False)
            alpha = np.zeros(grid.size, dtype=complex)
            omega = grid.omega(ctx.mass).reshape(-1)
            phases = np.exp(2j * np.pi * rng.random(self.active))
            alpha[flat] = np.sqrt(grid.volume / (4.0 * omega[flat])) * phases
            counted = Spectrum(grid, ctx.mass, 0.0, alpha)
            ctx.check(f"count[{label}]",
                      max(abs(norm(counted) - self.active), abs(norm(spectrum_to_lattice(counted)) - self.active))
                      / self.active, 1e-12)

            s = lattice_to_spectrum(ctx.random_lattice(grid, 0))
            total = norm(spectrum_to_lattice(s))
            factor = 1.7 - 0.4j
            scaled = norm(spectrum_to_lattice(s.scaled(factor)))
            ctx.check(f"homogeneity[{label}]", abs(scaled - abs(factor) ** 2 * total) / (abs(factor) ** 2 * total),
                      1e-12)

            mask = rng.random(grid.shape) < 0.5
            part = Spectrum(grid, ctx.mass, 0.0, np.where(mask, s.alpha, 0.0))
            rest = Spectrum(grid, ctx.mass, 0.0, np.where(mask, 0.0, s.alpha))
            split = norm(spectrum_to_lattice(part)) + norm(spectrum_to_lattice(rest))
            ctx.check(f"additivity[{label}]", abs(split - total) / total, 1e-12)

            contributions = float(np.sum(mode_norm_contributions(s)))
            ctx.check(f"contributions-sum[{label}]", abs(contributions - total) / total, 1e-10)


def canonical_suites() -> Sequence[Suite]:
    return (
        ProjectorAlgebraSuite(),
        ConservationExactSuite(),
        ConservationLeapfrogSuite(),
        AIndependenceSuite(),
        PositivitySuite(),
        TripleEquivalenceSuite(),
        ParsevalSuite(),
        BoostInvarianceSuite(),
        ContinuitySuite(),
        NaiveVanishingSuite(),
        EnergyRelationSuite(),
        ConvergenceOrderSuite(),
        MatrixEigenvaluesSuite(),
        SingleModeSuite(),
        CurrentFormsSuite(),
        ModeCountSuite(),
    )
