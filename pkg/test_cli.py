#!/usr/bin/env python3
"""
Tests for the kgfield command-line interface
"""

import unittest
import sys
import os
import csv
import json
import shutil
import tempfile
from unittest import mock

import numpy as np
from click.testing import CliRunner

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import cli
from kleingordon.fields import LatticeField
from kleingordon.grid import Mass, SpatialGrid
from kleingordon.snapshot import read_snapshot, write_snapshot
from kleingordon.verification.base import Suite
from kleingordon.verification.factory import SuiteFactory

SMALL_GRIDS = [{'dim': 1, 'points': [16], 'lengths': [6.283185307179586]}]


class CrashingSuite(Suite):
    name = 'crashing'
    anchors = ('always raises',)

    def run(self, ctx):
        return 1 / 0


def read_rows(path):
    with open(path, newline='') as handle:
        return list(csv.reader(handle))


class CliTestCase(unittest.TestCase):
    """Runs commands inside a scratch directory"""

    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def invoke(self, *args):
        return self.runner.invoke(cli, [str(a) for a in args])

    def random_snapshot(self, name='field.kgf', *extra):
        result = self.invoke('random', self.path(name), '-n', 16, '-s', 3, *extra)
        self.assertEqual(result.exit_code, 0, result.output)
        return self.path(name)

    def write_config(self, name, **data):
        data.setdefault('grids', SMALL_GRIDS)
        with open(self.path(name), 'w') as handle:
            json.dump(data, handle)
        return self.path(name)


class TestVerifyCommand(CliTestCase):

    def test_passing_run_writes_report(self):
        cfg = self.write_config('cfg.json', suites=['parseval', 'matrix-eigenvalues'])
        result = self.invoke('verify', '-c', cfg, '-o', self.path('report.json'), '--threads', 2)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('PASS', result.output)
        with open(self.path('report.json')) as handle:
            report = json.load(handle)
        self.assertIn('generated_at', report)
        self.assertTrue(report['report']['passed'])
        self.assertEqual([s['name'] for s in report['report']['suites']], ['parseval', 'matrix-eigenvalues'])

    def test_seed_override(self):
        cfg = self.write_config('cfg.json', suites=['parseval'], seed=1)
        result = self.invoke('verify', '-c', cfg, '-o', self.path('report.json'), '--seed', 77, '--no-table')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertNotIn('PASS', result.output)
        with open(self.path('report.json')) as handle:
            self.assertEqual(json.load(handle)['report']['environment']['config']['seed'], 77)

    def test_impossible_tolerance(self):
        cfg = self.write_config('cfg.json', suites=['parseval'], tolerances={'*': 1e-20})
        result = self.invoke('verify', '-c', cfg)
        self.assertEqual(result.exit_code, 1)
        self.assertIn('failed', result.output)

    def test_missing_config(self):
        result = self.invoke('verify', '-c', self.path('missing.json'))
        self.assertEqual(result.exit_code, 2)

    def test_unknown_suite(self):
        cfg = self.write_config('cfg.json', suites=['nope'])
        result = self.invoke('verify', '-c', cfg)
        self.assertEqual(result.exit_code, 2)
        self.assertIn('nope', result.output)

    def test_default_config_passes(self):
        default = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'default.json')
        result = self.invoke('verify', '--config', default, '--out', self.path('report.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('checks passed - PASS', result.output)
        with open(self.path('report.json')) as handle:
            report = json.load(handle)['report']
        self.assertTrue(report['passed'])
        self.assertEqual(len(report['suites']), 16)
        self.assertEqual(report['environment']['config']['seed'], 20060217)

    def test_suite_error_exits_failed(self):
        factory = SuiteFactory()
        factory.register_suite(CrashingSuite())
        cfg = self.write_config('cfg.json', suites=['crashing', 'parseval'])
        with mock.patch('kleingordon.verification.runner.suite_factory', factory):
            result = self.invoke('verify', '-c', cfg)
        self.assertEqual(result.exit_code, 1, result.output)
        self.assertIn('crashing (ZeroDivisionError', result.output)
        self.assertIn('1 suite error(s) - FAIL', result.output)


class TestEvolveCommand(CliTestCase):

    def test_exact_keeps_norm(self):
        snapshot = self.random_snapshot()
        result = self.invoke('evolve', snapshot, '--dt', 0.1, '--steps', 20, '-o', self.path('out.kgf'),
                             '--csv', self.path('obs.csv'))
        self.assertEqual(result.exit_code, 0, result.output)
        rows = read_rows(self.path('obs.csv'))
        self.assertEqual(rows[0], ['step', 'time', 'norm', 'energy', 'naive_charge'])
        self.assertEqual(len(rows), 22)
        norms = np.array([float(row[2]) for row in rows[1:]])
        self.assertLess(np.max(np.abs(norms - norms[0])) / norms[0], 1e-12)
        energies = np.array([float(row[3]) for row in rows[1:]])
        self.assertLess(np.max(np.abs(energies - energies[0])) / energies[0], 1e-12)
        self.assertTrue(all(float(row[4]) == 0.0 for row in rows[1:]))
        self.assertAlmostEqual(read_snapshot(self.path('out.kgf')).time, 2.0)

    def test_header_written_once(self):
        snapshot = self.random_snapshot()
        for _ in range(2):
            result = self.invoke('evolve', snapshot, '--dt', 0.1, '--steps', 3, '-o', self.path('out.kgf'),
                                 '--csv', self.path('obs.csv'))
            self.assertEqual(result.exit_code, 0, result.output)
        rows = read_rows(self.path('obs.csv'))
        self.assertEqual(len(rows), 1 + 2 * 4)
        self.assertEqual(sum(1 for row in rows if row[0] == 'step'), 1)

    def test_zero_steps_copy_input(self):
        snapshot = self.random_snapshot()
        result = self.invoke('evolve', snapshot, '--dt', 0.1, '--steps', 0, '-o', self.path('out.kgf'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(snapshot, 'rb') as a, open(self.path('out.kgf'), 'rb') as b:
            self.assertEqual(a.read(), b.read())

    def test_leapfrog_small_step(self):
        snapshot = self.random_snapshot('band.kgf', '--band', 2.0)
        result = self.invoke('evolve', snapshot, '-i', 'leapfrog', '--dt', 0.01, '--steps', 50,
                             '-o', self.path('out.kgf'), '--csv', self.path('obs.csv'))
        self.assertEqual(result.exit_code, 0, result.output)
        norms = np.array([float(row[2]) for row in read_rows(self.path('obs.csv'))[1:]])
        self.assertLess(np.max(np.abs(norms - norms[0])) / norms[0], 1e-3)

    def test_leapfrog_unstable(self):
        snapshot = self.random_snapshot()
        result = self.invoke('evolve', snapshot, '-i', 'leapfrog', '--dt', 1.0, '--steps', 5,
                             '-o', self.path('out.kgf'))
        self.assertEqual(result.exit_code, 1)
        self.assertIn('omega_max', result.output)
        self.assertFalse(os.path.exists(self.path('out.kgf')))

    def test_unreadable_snapshot(self):
        with open(self.path('junk.kgf'), 'wb') as handle:
            handle.write(b'not a snapshot')
        result = self.invoke('evolve', self.path('junk.kgf'), '--dt', 0.1, '--steps', 1, '-o', self.path('o.kgf'))
        self.assertEqual(result.exit_code, 2)


class TestSpectrumCommand(CliTestCase):

    def test_single_mode(self):
        modeset = {'dim': 1, 'mass': 1.0, 'modes': [{'k': [1.0], 'amplitude': [1.0, 0.0], 'weight': 1.0}]}
        with open(self.path('mode.json'), 'w') as handle:
            json.dump(modeset, handle)
        result = self.invoke('init-mode', self.path('mode.json'), self.path('mode.kgf'), '-n', 16)
        self.assertEqual(result.exit_code, 0, result.output)

        result = self.invoke('spectrum', self.path('mode.kgf'), self.path('spectrum.csv'))
        self.assertEqual(result.exit_code, 0, result.output)
        rows = read_rows(self.path('spectrum.csv'))
        self.assertEqual(rows[0], ['k0', 'omega', 'alpha_re', 'alpha_im', 'norm_contribution'])
        self.assertEqual(len(rows), 17)
        contributions = np.array([float(row[-1]) for row in rows[1:]])
        echoed = [line for line in result.output.splitlines() if line.startswith('total norm')]
        total = float(echoed[0].rsplit(':', 1)[1])
        significant = [row for row in rows[1:] if float(row[-1]) > 1e-12 * total]
        self.assertEqual(len(significant), 1)
        self.assertEqual(float(significant[0][0]), 1.0)
        self.assertAlmostEqual(np.sum(contributions), total, delta=1e-10 * total)
        self.assertAlmostEqual(total, 1.0 / (2.0 * np.pi * np.sqrt(2.0)), delta=1e-10)

    def test_zero_field(self):
        grid = SpatialGrid.cube(2, 4)
        write_snapshot(LatticeField.zeros(grid, Mass(1.0)), self.path('zero.kgf'))
        result = self.invoke('spectrum', self.path('zero.kgf'), self.path('spectrum.csv'), '--b', 2.0)
        self.assertEqual(result.exit_code, 0, result.output)
        rows = read_rows(self.path('spectrum.csv'))
        self.assertEqual(rows[0][:2], ['k0', 'k1'])
        self.assertTrue(all(float(row[-1]) == 0.0 for row in rows[1:]))
        self.assertIn('b=2', result.output)

    def test_missing_snapshot(self):
        result = self.invoke('spectrum', self.path('missing.kgf'), self.path('spectrum.csv'))
        self.assertEqual(result.exit_code, 2)


class TestSnapshotCommands(CliTestCase):

    def test_random_is_seeded(self):
        first = read_snapshot(self.random_snapshot('a.kgf'))
        second = read_snapshot(self.random_snapshot('b.kgf'))
        np.testing.assert_array_equal(first.phi, second.phi)

    def test_random_options(self):
        result = self.invoke('random', self.path('r.kgf'), '-d', 2, '-n', 8, '-L', 3.0, '-m', 2.0)
        self.assertEqual(result.exit_code, 0, result.output)
        field = read_snapshot(self.path('r.kgf'))
        self.assertEqual(field.grid, SpatialGrid.cube(2, 8, 3.0))
        self.assertEqual(field.mass, Mass(2.0))

    def test_random_band_too_wide(self):
        result = self.invoke('random', self.path('r.kgf'), '-n', 8, '--band', 100.0)
        self.assertEqual(result.exit_code, 2)

    def test_init_mode_rejects_inadmissible(self):
        modeset = {'dim': 1, 'mass': 1.0, 'modes': [{'k': [0.5], 'amplitude': 1.0, 'weight': 1.0}]}
        with open(self.path('mode.json'), 'w') as handle:
            json.dump(modeset, handle)
        result = self.invoke('init-mode', self.path('mode.json'), self.path('mode.kgf'), '-n', 16)
        self.assertEqual(result.exit_code, 2)
        self.assertIn('mode 0', result.output)


if __name__ == '__main__':
    unittest.main(verbosity=2)
