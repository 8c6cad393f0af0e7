#!/usr/bin/env python3
"""
Run verification suites from a JSON experiment config

Config schema (every key optional):

    {
      "seed": 20060217,
      "mass": 1.0,
      "grids": [{"dim": 1, "points": [256], "lengths": [6.283185307179586]}, ...],
      "tolerances": {"*": 1e-20, "parseval": 1e-11, "idempotence": 1e-13},
      "suites": ["projector-algebra", "parseval"]
    }

Missing keys fall back to the environment configuration (KG_DEFAULT_SEED,
KG_DEFAULT_MASS, KG_GRID_1D/2D/3D); a missing suite list runs every suite.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from config import config
from ..errors import ConfigError, KleinGordonError
from ..grid import Mass, SpatialGrid
from .base import Suite, SuiteContext
from .convergence import ConvergenceRow, ConvergenceTable, convergence_study
from .factory import suite_factory
from .report import Report, SuiteOutcome

logger = logging.getLogger(__name__)

__all__ = ['SuiteConfig', 'run_suite', 'convergence_study', 'ConvergenceRow', 'ConvergenceTable']


@dataclass(frozen=True)
class SuiteConfig:
    seed: int
    grids: Tuple[SpatialGrid, ...]
    mass: Mass
    tolerances: Dict[str, float] = field(default_factory=dict)
    suites: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.grids:
            raise ConfigError("at least one grid is required")
        names = tuple(self.suites) or tuple(suite_factory.list_names())
        for name in names:
            suite_factory.get_suite(name)
        object.__setattr__(self, 'suites', names)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SuiteConfig':
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - {'seed', 'mass', 'grids', 'tolerances', 'suites'}
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            seed = int(data.get('seed', config.DEFAULT_SEED))
            mass = Mass(float(data.get('mass', config.DEFAULT_MASS)))
            grids = tuple(SpatialGrid.from_dict(spec) for spec in data.get('grids', config.default_grids()))
            tolerances = {str(k): float(v) for k, v in dict(data.get('tolerances', {})).items()}
            suites = data.get('suites') or ()
            if isinstance(suites, str):
                suites = (suites,)
            return cls(seed, grids, mass, tolerances, tuple(str(name) for name in suites))
        except ConfigError:
            raise
        except (KleinGordonError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid config: {e}") from e

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'SuiteConfig':
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def default(cls) -> 'SuiteConfig':
        return cls.from_dict({})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'mass': self.mass.m,
            'grids': [grid.to_dict() for grid in self.grids],
            'tolerances': dict(sorted(self.tolerances.items())),
            'suites': list(self.suites),
        }


def _run_one(suite: Suite, cfg: SuiteConfig) -> SuiteOutcome:
    ctx = SuiteContext(suite.name, cfg.seed, cfg.grids, cfg.mass, cfg.tolerances)
    logger.debug(f"suite {suite.name} started")
    error = None
    try:
        suite.run(ctx)
    except KleinGordonError as e:
        logger.error(f"suite {suite.name} raised {type(e).__name__}: {e}")
        error = f"{type(e).__name__}: {e}"
    except Exception as e:
        logger.exception(f"suite {suite.name} crashed")
        error = f"{type(e).__name__}: {e}"
    outcome = SuiteOutcome(suite.name, tuple(suite.anchors), tuple(ctx.results), error)
    logger.info(f"suite {suite.name}: {'pass' if outcome.passed else 'FAIL'} ({len(ctx.results)} checks)")
    return outcome


def run_suite(cfg: SuiteConfig, workers: Optional[int] = None) -> Report:
    """Run the configured suites; results come back in canonical order

    Suites are independent and pure given the seed, so they run in a thread
    pool of at most `workers` threads (default: KG_THREADS or one per CPU).
    """
    suites = suite_factory.ordered(list(cfg.suites))
    if workers is None:
        workers = config.worker_count
    workers = max(1, min(int(workers), len(suites)))
    logger.debug(f"running {len(suites)} suites on {workers} worker(s)")
    if workers == 1:
        outcomes = [_run_one(suite, cfg) for suite in suites]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, suite, cfg) for suite in suites]
            outcomes = [future.result() for future in futures]
    environment = {
        'config': cfg.to_dict(),
        'settings': config.to_dict(),
        'numpy': np.__version__,
    }
    return Report(tuple(outcomes), environment)


def failing_checks(report: Report) -> List[str]:
    """Failed checks as suite/check, then suites that raised as suite (error)"""
    names = [f"{check.suite}/{check.name}" for check in report.failures]
    names.extend(f"{suite.name} ({suite.error})" for suite in report.errors)
    return names
