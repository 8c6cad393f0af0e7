#!/usr/bin/env python3
"""
Base interfaces for verification suites
"""

import logging
import zlib
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..fields import LatticeField, random_field, spectrum_to_lattice
from ..grid import Mass, SpatialGrid

logger = logging.getLogger(__name__)

CHECK_KINDS = ('max', 'min')


@dataclass(frozen=True)
class CheckResult:
    """One measured residual against its tolerance

    kind "max" passes iff residual <= tolerance; kind "min" passes iff
    residual >= tolerance (power checks that must detect a violation).
    """

    name: str
    suite: str
    residual: float
    tolerance: float
    kind: str = 'max'
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        if self.kind == 'min':
            return self.residual >= self.tolerance
        return self.residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'name': self.name,
            'suite': self.suite,
            'residual': self.residual,
            'tolerance': self.tolerance,
            'kind': self.kind,
            'passed': self.passed,
        }
        if self.detail:
            out['detail'] = self.detail
        return out


def relative_error(measured, expected) -> float:
    """max |measured - expected| / max |expected| (absolute when expected is all zero)"""
    measured = np.asarray(measured)
    expected = np.asarray(expected)
    diff = float(np.max(np.abs(measured - expected))) if measured.size else 0.0
    scale = float(np.max(np.abs(expected))) if expected.size else 0.0
    return diff / scale if scale > 0.0 else diff


@dataclass
class SuiteContext:
    """Everything a suite may read: seed, grids, mass and tolerance overrides"""

    suite: str
    seed: int
    grids: Tuple[SpatialGrid, ...]
    mass: Mass
    tolerances: Dict[str, float] = field(default_factory=dict)
    results: List[CheckResult] = field(default_factory=list)

    def tolerance(self, check: str, default: float) -> float:
        """Override lookup: full check name, bare name, suite name, then '*'"""
        bare = check.split('[', 1)[0]
        for key in (check, bare, self.suite, '*'):
            if key in self.tolerances:
                return float(self.tolerances[key])
        return float(default)

    def seed_for(self, *offsets: int) -> int:
        """Independent, reproducible seed per (suite, offsets)"""
        entropy = [int(self.seed), zlib.crc32(self.suite.encode('utf-8'))] + [int(o) for o in offsets]
        return int(np.random.SeedSequence(entropy).generate_state(1)[0])

    def rng(self, *offsets: int) -> np.random.Generator:
        return np.random.default_rng(self.seed_for(*offsets))

    def random_lattice(self, grid: SpatialGrid, offset: int,
                       band_limit: Optional[float] = None) -> LatticeField:
        seed = self.seed_for(grid.dim, offset)
        return spectrum_to_lattice(random_field(grid, self.mass, seed, band_limit))

    def check(self, name: str, residual: float, tolerance: float, kind: str = 'max',
              **detail) -> CheckResult:
        result = CheckResult(name, self.suite, float(residual), self.tolerance(name, tolerance),
                             kind, {k: _plain(v) for k, v in detail.items()})
        logger.debug(f"{self.suite}/{name}: residual={result.residual:.3e} "
                     f"tol={result.tolerance:.1e} ({'pass' if result.passed else 'FAIL'})")
        self.results.append(result)
        return result


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


class Suite(ABC):
    """A named group of checks bound to the invariants it exercises"""

    name: str = ''
    # invariants the suite exercises, as short human-readable statements
    anchors: Tuple[str, ...] = ()

    def can_handle(self, name: str) -> bool:
        return name == self.name

    @abstractmethod
    def run(self, ctx: SuiteContext) -> None:
        """Record checks on ctx via ctx.check(...)"""
        pass

    def grids(self, ctx: SuiteContext) -> Tuple[SpatialGrid, ...]:
        return ctx.grids
