#!/usr/bin/env python3
"""
Leapfrog convergence against the exact spectral evolution
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ParameterError
from ..evolution import check_leapfrog_dt, evolve_exact, evolve_leapfrog
from ..fields import LatticeField, lattice_to_spectrum, spectrum_to_lattice

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    steps: int
    max_error: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: Tuple[ConvergenceRow, ...]
    order: Optional[float]

    @property
    def ratios(self) -> List[float]:
        """error(dt_i) / error(dt_{i+1}) for consecutive rows"""
        out = []
        for coarse, fine in zip(self.rows, self.rows[1:]):
            out.append(coarse.max_error / fine.max_error if fine.max_error > 0.0 else float('inf'))
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': [{'dt': r.dt, 'steps': r.steps, 'max_error': r.max_error} for r in self.rows],
            'ratios': self.ratios,
            'order': self.order,
        }


def _max_error(field: LatticeField, dt: float, steps: int) -> float:
    spectrum = lattice_to_spectrum(field)
    state = field
    worst = 0.0
    for n in range(1, steps + 1):
        state = evolve_leapfrog(state, dt, 1)
        exact = spectrum_to_lattice(evolve_exact(spectrum, n * dt))
        worst = max(worst, float(np.max(np.abs(state.phi - exact.phi))))
    return worst


def convergence_study(dt_list: Sequence[float], t_final: float, field: LatticeField) -> ConvergenceTable:
    """max |phi_leapfrog - phi_exact| over [0, t_final] for each dt

    Every dt is checked against the stability bound before anything runs.
    The fitted order is the slope of log(error) against log(dt); it needs two
    rows with nonzero errors.
    """
    dt_list = [float(dt) for dt in dt_list]
    if not dt_list:
        raise ParameterError("dt_list is empty")
    if t_final < 0.0:
        raise ParameterError(f"t_final must be non-negative, got {t_final}")
    for dt in dt_list:
        if dt <= 0.0:
            raise ParameterError(f"time steps must be positive, got {dt}")
        check_leapfrog_dt(field.grid, field.mass, dt)

    rows = []
    for dt in dt_list:
        steps = int(round(t_final / dt))
        if abs(steps * dt - t_final) > 1e-9 * max(1.0, t_final):
            raise ParameterError(f"dt={dt} does not divide t_final={t_final}")
        error = _max_error(field, dt, steps)
        logger.debug(f"convergence: dt={dt:.4g} steps={steps} error={error:.3e}")
        rows.append(ConvergenceRow(dt, steps, error))

    order = None
    errors = np.array([row.max_error for row in rows])
    if len(rows) >= 2 and np.all(errors > 0.0):
        order = float(np.polyfit(np.log([row.dt for row in rows]), np.log(errors), 1)[0])
    return ConvergenceTable(tuple(rows), order)
