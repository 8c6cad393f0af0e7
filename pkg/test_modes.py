#!/usr/bin/env python3
"""
Tests for exact plane-wave mode sets
"""

import unittest
import sys
import os

import numpy as np
from numpy.testing import assert_allclose

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from kleingordon.errors import GridError, ParameterError, SnapshotError
from kleingordon.fields import lattice_to_spectrum, random_field
from kleingordon.grid import Mass, SpatialGrid
from kleingordon.modes import (Mode, ModeSet, boost_modeset, modeset_from_json, modeset_from_spectrum,
                               modeset_to_json, modeset_to_lattice)

MASS = Mass(1.0)
TWO_PI = 2.0 * np.pi


class TestModeSetEvaluation(unittest.TestCase):
    """Pointwise evaluation on a grid"""

    def setUp(self):
        self.grid = SpatialGrid.cube(1, 16)
        self.x = self.grid.coordinates(0)

    def test_empty_mode_set_is_zero(self):
        field = modeset_to_lattice(ModeSet(MASS, 0.0, 1), self.grid)
        self.assertTrue(np.all(field.phi == 0))
        self.assertTrue(np.all(field.pi == 0))

    def test_homogeneous_mode(self):
        ms = ModeSet(MASS, 0.0, 1, (Mode((0.0,), 0.5, TWO_PI),))
        field = modeset_to_lattice(ms, self.grid)
        assert_allclose(field.phi, 0.5, atol=1e-15)
        assert_allclose(field.pi, 0.0, atol=1e-15)

    def test_travelling_mode(self):
        ms = ModeSet(MASS, 0.0, 1, (Mode((1.0,), 1.0, TWO_PI),))
        field = modeset_to_lattice(ms, self.grid)
        assert_allclose(field.phi, np.cos(self.x) / np.sqrt(2.0), atol=1e-14)
        assert_allclose(field.pi, np.sin(self.x), atol=1e-14)

    def test_time_dependence(self):
        t = 0.7
        ms = ModeSet(MASS, t, 1, (Mode((1.0,), 1.0, TWO_PI),))
        field = modeset_to_lattice(ms, self.grid)
        omega = np.sqrt(2.0)
        assert_allclose(field.phi, np.cos(self.x - omega * t) / omega, atol=1e-14)
        self.assertEqual(field.time, t)

    def test_inadmissible_mode(self):
        ms = ModeSet(MASS, 0.0, 1, (Mode((0.5,), 1.0, TWO_PI),))
        with self.assertRaises(GridError) as cm:
            modeset_to_lattice(ms, self.grid)
        self.assertIn('mode 0', str(cm.exception))
        with self.assertRaises(GridError):
            ms.to_spectrum(self.grid)

    def test_dimension_mismatch(self):
        ms = ModeSet(MASS, 0.0, 2, (Mode((1.0, 0.0), 1.0, 1.0),))
        with self.assertRaises(GridError):
            modeset_to_lattice(ms, self.grid)

    def test_embedding_matches_transform(self):
        grid = SpatialGrid.cube(2, 8)
        ms = ModeSet(MASS, 0.3, 2, (
            Mode((1.0, 0.0), 0.4 + 0.1j, 0.5),
            Mode((-2.0, 3.0), -0.2j, 1.5),
            Mode((0.0, 0.0), 0.25, 2.0),
        ))
        embedded = ms.to_spectrum(grid)
        transformed = lattice_to_spectrum(modeset_to_lattice(ms, grid))
        assert_allclose(embedded.alpha, transformed.alpha, rtol=0, atol=1e-12 * np.max(np.abs(embedded.alpha)))


class TestModeSetValidation(unittest.TestCase):
    """Construction rules"""

    def test_duplicate_wavevector(self):
        with self.assertRaises(ParameterError):
            ModeSet(MASS, 0.0, 1, (Mode((1.0,), 1.0, 1.0), Mode((1.0,), 2.0, 1.0)))

    def test_weight_must_be_positive(self):
        for weight in (0.0, -1.0, float('nan')):
            with self.assertRaises(ParameterError):
                Mode((1.0,), 1.0, weight)

    def test_component_count(self):
        with self.assertRaises(GridError):
            ModeSet(MASS, 0.0, 2, (Mode((1.0,), 1.0, 1.0),))


class TestSpectrumConversion(unittest.TestCase):
    """modeset_from_spectrum inverts the grid embedding"""

    def test_round_trip(self):
        grid = SpatialGrid.cube(2, 8)
        s = random_field(grid, MASS, seed=21, band_limit=2.0, time=0.4)
        ms = modeset_from_spectrum(s)
        self.assertEqual(len(ms), np.count_nonzero(s.alpha))
        assert_allclose(ms.to_spectrum(grid).alpha, s.alpha, rtol=1e-12, atol=0)
        self.assertAlmostEqual(ms.modes[0].weight, TWO_PI ** 2 / grid.volume)


class TestBoost(unittest.TestCase):
    """Lorentz boosts of mode sets"""

    def setUp(self):
        self.ms = ModeSet(MASS, 0.0, 2, (
            Mode((0.0, 0.0), 1.0, 1.0),
            Mode((1.0, -2.0), 0.5j, 0.3),
        ))

    def test_zero_rapidity_is_identity(self):
        boosted = boost_modeset(self.ms, 0.0, 0)
        for a, b in zip(self.ms.modes, boosted.modes):
            assert_allclose(a.k, b.k)
            self.assertAlmostEqual(a.weight, b.weight)
            self.assertEqual(a.amplitude, b.amplitude)

    def test_mode_at_rest(self):
        eta = 0.8
        boosted = boost_modeset(self.ms, eta, 1)
        rest = boosted.modes[0]
        assert_allclose(rest.k, (0.0, np.sinh(eta)), atol=1e-15)
        self.assertAlmostEqual(rest.weight, np.cosh(eta))
        self.assertAlmostEqual(rest.omega(MASS), np.cosh(eta))

    def test_weight_over_omega_invariant(self):
        boosted = boost_modeset(self.ms, -1.3, 0)
        before = np.array([m.weight for m in self.ms.modes]) / self.ms.omegas()
        after = np.array([m.weight for m in boosted.modes]) / boosted.omegas()
        assert_allclose(after, before, rtol=1e-12)

    def test_composition(self):
        twice = boost_modeset(boost_modeset(self.ms, 0.4, 0), 0.9, 0)
        once = boost_modeset(self.ms, 1.3, 0)
        for a, b in zip(twice.modes, once.modes):
            assert_allclose(a.k, b.k, rtol=1e-12, atol=1e-12)
            self.assertAlmostEqual(a.weight, b.weight, places=12)

    def test_bad_axis(self):
        with self.assertRaises(ParameterError):
            boost_modeset(self.ms, 0.5, 2)
        with self.assertRaises(ParameterError):
            boost_modeset(self.ms, 0.5, -1)


class TestModeSetJson(unittest.TestCase):
    """JSON documents used by the init-mode command"""

    def test_round_trip(self):
        ms = ModeSet(Mass(2.0), 0.5, 1, (Mode((1.0,), 0.3 - 0.4j, 2.0),))
        again = modeset_from_json(modeset_to_json(ms))
        self.assertEqual(again, ms)

    def test_plain_amplitude_accepted(self):
        text = '{"dim": 1, "mass": 1.0, "modes": [{"k": [0.0], "amplitude": 0.5, "weight": 6.283185307179586}]}'
        ms = modeset_from_json(text)
        self.assertEqual(ms.modes[0].amplitude, 0.5 + 0j)
        self.assertEqual(ms.time, 0.0)

    def test_malformed_documents(self):
        for text in ('not json', '[]', '{"format": "other", "dim": 1, "mass": 1.0}',
                     '{"dim": 1, "modes": []}', '{"dim": 1, "mass": 1.0, "modes": [{"k": [0.0]}]}'):
            with self.assertRaises(SnapshotError):
                modeset_from_json(text)


if __name__ == '__main__':
    unittest.main(verbosity=2)
