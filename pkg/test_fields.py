#!/usr/bin/env python3
"""
Tests for LatticeField, Spectrum and the conversions between them
"""

import unittest
import sys
import os

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from kleingordon.errors import ConsistencyError, GridError, ParameterError
from kleingordon.fields import (LatticeField, Spectrum, _real_part, lattice_to_spectrum, random_field,
                                single_mode_spectrum, spectrum_to_lattice)
from kleingordon.grid import Mass, SpatialGrid

MASS = Mass(1.0)


def relative(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b))


class TestLatticeField(unittest.TestCase):
    """Construction and immutability"""

    def setUp(self):
        self.grid = SpatialGrid.cube(1, 8)

    def test_arrays_are_frozen_copies(self):
        phi = np.ones(8)
        field = LatticeField(self.grid, MASS, 0.0, phi, np.zeros(8))
        phi[0] = 5.0
        self.assertEqual(field.phi[0], 1.0)
        self.assertFalse(field.phi.flags.writeable)

    def test_rejects_complex_values(self):
        with self.assertRaises(GridError):
            LatticeField(self.grid, MASS, 0.0, np.ones(8) * 1j, np.zeros(8))

    def test_rejects_wrong_size(self):
        with self.assertRaises(GridError):
            LatticeField(self.grid, MASS, 0.0, np.ones(7), np.zeros(7))

    def test_flat_arrays_are_reshaped(self):
        grid = SpatialGrid.cube(2, 4)
        field = LatticeField(grid, MASS, 0.0, np.arange(16.0), np.zeros(16))
        self.assertEqual(field.phi.shape, (4, 4))
        self.assertEqual(field.phi[1, 0], 4.0)

    def test_addition_requires_same_time(self):
        a = LatticeField.zeros(self.grid, MASS, 0.0)
        b = LatticeField.zeros(self.grid, MASS, 1.0)
        with self.assertRaises(GridError):
            a + b

    def test_addition_requires_same_mass(self):
        a = LatticeField.zeros(self.grid, MASS)
        b = LatticeField.zeros(self.grid, Mass(2.0))
        with self.assertRaises(GridError):
            a + b


class TestConversions(unittest.TestCase):
    """lattice_to_spectrum and spectrum_to_lattice"""

    def setUp(self):
        self.grid = SpatialGrid.cube(1, 16)

    def test_constant_field(self):
        field = LatticeField(self.grid, MASS, 0.0, np.full(16, 1.7), np.zeros(16))
        s = lattice_to_spectrum(field)
        self.assertAlmostEqual(s.alpha[0].real, 1.7 * self.grid.volume / 2, places=12)
        self.assertAlmostEqual(s.alpha[0].imag, 0.0, places=12)
        self.assertLess(np.max(np.abs(s.alpha[1:])), 1e-12)

    def test_zero_field(self):
        s = lattice_to_spectrum(LatticeField.zeros(self.grid, MASS))
        assert_array_equal(s.alpha, 0.0)
        back = spectrum_to_lattice(Spectrum.zeros(self.grid, MASS))
        assert_array_equal(back.phi, 0.0)
        assert_array_equal(back.pi, 0.0)

    def test_round_trip_random(self):
        for grid in (self.grid, SpatialGrid.cube(2, 8), SpatialGrid(3, (4, 6, 8), (1.0, 2.0, 3.0))):
            s = random_field(grid, MASS, seed=11)
            field = spectrum_to_lattice(s)
            back = lattice_to_spectrum(field)
            self.assertLess(relative(back.alpha, s.alpha), 1e-12)
            again = spectrum_to_lattice(back)
            self.assertLess(relative(again.phi, field.phi), 1e-12)
            self.assertLess(relative(again.pi, field.pi), 1e-12)

    def test_time_and_metadata_copied(self):
        s = random_field(self.grid, Mass(2.0), seed=3, time=1.25)
        field = spectrum_to_lattice(s)
        self.assertEqual(field.time, 1.25)
        self.assertEqual(field.mass, Mass(2.0))
        self.assertEqual(lattice_to_spectrum(field).time, 1.25)

    def test_nyquist_coefficients_real(self):
        field = spectrum_to_lattice(random_field(self.grid, MASS, seed=5))
        phi_hat = np.fft.fft(field.phi)
        self.assertLess(abs(phi_hat[8].imag), 1e-12 * np.max(np.abs(phi_hat)))

    def test_imaginary_residue_is_fatal(self):
        with self.assertRaises(ConsistencyError):
            _real_part(np.array([1.0 + 1e-6j, 2.0]), 'phi')
        assert_array_equal(_real_part(np.array([1.0 + 1e-15j, 2.0]), 'phi'), [1.0, 2.0])


class TestSingleMode(unittest.TestCase):
    """single_mode_spectrum uses the pointwise amplitude"""

    def test_pointwise_values(self):
        grid = SpatialGrid.cube(1, 16)
        amplitude = 0.3 - 0.2j
        field = spectrum_to_lattice(single_mode_spectrum(grid, MASS, (2,), amplitude))
        x = grid.coordinates(0)
        omega = np.sqrt(5.0)
        assert_allclose(field.phi, 2.0 * (amplitude * np.exp(2j * x)).real, atol=1e-14)
        assert_allclose(field.pi, 2.0 * (-1j * omega * amplitude * np.exp(2j * x)).real, atol=1e-14)

    def test_inadmissible_mode(self):
        grid = SpatialGrid.cube(1, 8)
        with self.assertRaises(GridError):
            single_mode_spectrum(grid, MASS, (4,), 1.0)
        with self.assertRaises(ParameterError):
            single_mode_spectrum(grid, MASS, (1, 1), 1.0)


class TestRandomField(unittest.TestCase):
    """Seeded random spectra"""

    def setUp(self):
        self.grid = SpatialGrid.cube(2, 8)

    def test_band_limit_zero_keeps_only_k0(self):
        s = random_field(self.grid, MASS, seed=1, band_limit=0.0)
        self.assertNotEqual(s.alpha[0, 0], 0)
        self.assertEqual(np.count_nonzero(s.alpha), 1)

    def test_band_limit(self):
        s = random_field(self.grid, MASS, seed=1, band_limit=2.0)
        k = np.sqrt(self.grid.k_squared())
        self.assertTrue(np.all(s.alpha[k > 2.0 + 1e-9] == 0))
        self.assertTrue(np.all(s.alpha[k <= 2.0] != 0))

    def test_draw_does_not_depend_on_band(self):
        full = random_field(self.grid, MASS, seed=4)
        banded = random_field(self.grid, MASS, seed=4, band_limit=1.0)
        mask = banded.alpha != 0
        assert_array_equal(banded.alpha[mask], full.alpha[mask])

    def test_determinism(self):
        assert_array_equal(random_field(self.grid, MASS, 9).alpha, random_field(self.grid, MASS, 9).alpha)
        self.assertFalse(np.array_equal(random_field(self.grid, MASS, 9).alpha,
                                        random_field(self.grid, MASS, 10).alpha))

    def test_band_above_nyquist(self):
        with self.assertRaises(ParameterError):
            random_field(self.grid, MASS, 1, band_limit=5.0)
        with self.assertRaises(ParameterError):
            random_field(self.grid, MASS, 1, band_limit=-1.0)


if __name__ == '__main__':
    unittest.main(verbosity=2)
