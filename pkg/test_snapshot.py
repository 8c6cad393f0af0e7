#!/usr/bin/env python3
"""
Tests for the KGF1 binary snapshot format
"""

import unittest
import sys
import os
import struct
import tempfile

import numpy as np
from numpy.testing import assert_array_equal

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from kleingordon.errors import SnapshotError
from kleingordon.fields import random_field, spectrum_to_lattice
from kleingordon.grid import Mass, SpatialGrid
from kleingordon.snapshot import field_from_bytes, read_snapshot, snapshot_bytes, write_snapshot


class TestSnapshot(unittest.TestCase):
    """Header layout, round trip and corrupt input"""

    def setUp(self):
        grid = SpatialGrid(2, (4, 6), (1.5, 2.5))
        self.field = spectrum_to_lattice(random_field(grid, Mass(0.5), seed=8, time=3.25))

    def test_header_layout(self):
        data = snapshot_bytes(self.field)
        self.assertEqual(data[:4], b'KGF1')
        self.assertEqual(struct.unpack_from('<I', data, 4), (2,))
        self.assertEqual(struct.unpack_from('<2I', data, 8), (4, 6))
        self.assertEqual(struct.unpack_from('<2d', data, 16), (1.5, 2.5))
        self.assertEqual(struct.unpack_from('<dd', data, 32), (0.5, 3.25))
        self.assertEqual(len(data), 48 + 16 * 24)
        first_phi = struct.unpack_from('<d', data, 48)[0]
        self.assertEqual(first_phi, self.field.phi[0, 0])

    def test_round_trip_is_exact(self):
        again = field_from_bytes(snapshot_bytes(self.field))
        self.assertEqual(again.grid, self.field.grid)
        self.assertEqual(again.mass, self.field.mass)
        self.assertEqual(again.time, self.field.time)
        assert_array_equal(again.phi, self.field.phi)
        assert_array_equal(again.pi, self.field.pi)

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'field.kgf')
            write_snapshot(self.field, path)
            again = read_snapshot(path)
            assert_array_equal(again.phi, self.field.phi)
            self.assertEqual(snapshot_bytes(again), snapshot_bytes(self.field))

    def test_bad_magic(self):
        data = b'KGF2' + snapshot_bytes(self.field)[4:]
        with self.assertRaises(SnapshotError):
            field_from_bytes(data)

    def test_truncated(self):
        data = snapshot_bytes(self.field)
        for cut in (10, 40, len(data) - 8):
            with self.assertRaises(SnapshotError):
                field_from_bytes(data[:cut])

    def test_trailing_bytes(self):
        with self.assertRaises(SnapshotError):
            field_from_bytes(snapshot_bytes(self.field) + b'\x00' * 8)

    def test_invalid_header_values(self):
        data = bytearray(snapshot_bytes(self.field))
        struct.pack_into('<I', data, 4, 5)
        with self.assertRaises(SnapshotError):
            field_from_bytes(bytes(data))
        data = bytearray(snapshot_bytes(self.field))
        struct.pack_into('<d', data, 32, -1.0)
        with self.assertRaises(SnapshotError):
            field_from_bytes(bytes(data))

    def test_missing_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(SnapshotError):
                read_snapshot(os.path.join(tmp, 'missing.kgf'))

    def test_values_are_float64(self):
        again = field_from_bytes(snapshot_bytes(self.field))
        self.assertEqual(again.phi.dtype, np.float64)


if __name__ == '__main__':
    unittest.main(verbosity=2)
