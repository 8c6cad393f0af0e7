#!/usr/bin/env python3
"""
Binary snapshot format for LatticeField

    magic   4 bytes  b"KGF1"
    dim     u32
    points  u32 x dim
    lengths f64 x dim
    mass    f64
    time    f64
    phi     f64 x prod(points), row-major
    pi      f64 x prod(points), row-major

All numbers little-endian.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from .errors import KleinGordonError, SnapshotError
from .fields import LatticeField
from .grid import Mass, SpatialGrid

logger = logging.getLogger(__name__)

MAGIC = b'KGF1'


def snapshot_bytes(field: LatticeField) -> bytes:
    grid = field.grid
    header = MAGIC + struct.pack('<I', grid.dim)
    header += struct.pack(f'<{grid.dim}I', *grid.points)
    header += struct.pack(f'<{grid.dim}d', *grid.lengths)
    header += struct.pack('<dd', field.mass.m, field.time)
    body = np.ascontiguousarray(field.phi, dtype='<f8').tobytes(order='C')
    body += np.ascontiguousarray(field.pi, dtype='<f8').tobytes(order='C')
    return header + body


def field_from_bytes(data: bytes) -> LatticeField:
    if data[:4] != MAGIC:
        raise SnapshotError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    try:
        offset = 4
        (dim,) = struct.unpack_from('<I', data, offset)
        offset += 4
        if dim not in (1, 2, 3):
            raise SnapshotError(f"unsupported dim {dim}")
        points = struct.unpack_from(f'<{dim}I', data, offset)
        offset += 4 * dim
        lengths = struct.unpack_from(f'<{dim}d', data, offset)
        offset += 8 * dim
        mass, time = struct.unpack_from('<dd', data, offset)
        offset += 16
    except struct.error as e:
        raise SnapshotError(f"truncated snapshot header: {e}") from e
    try:
        grid = SpatialGrid(dim, tuple(points), tuple(lengths))
        size = grid.size
        expected = offset + 16 * size
        if len(data) != expected:
            raise SnapshotError(f"snapshot has {len(data)} bytes, header implies {expected}")
        phi = np.frombuffer(data, dtype='<f8', count=size, offset=offset)
        pi = np.frombuffer(data, dtype='<f8', count=size, offset=offset + 8 * size)
        return LatticeField(grid, Mass(mass), time, phi, pi)
    except SnapshotError:
        raise
    except KleinGordonError as e:
        raise SnapshotError(f"invalid snapshot contents: {e}") from e


def write_snapshot(field: LatticeField, path: Union[str, Path]) -> None:
    Path(path).write_bytes(snapshot_bytes(field))
    logger.debug(f"wrote snapshot {path} ({field.grid.label}, t={field.time:.6g})")


def read_snapshot(path: Union[str, Path]) -> LatticeField:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise SnapshotError(f"cannot read snapshot {path}: {e}") from e
    return field_from_bytes(data)
