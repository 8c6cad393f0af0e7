#!/usr/bin/env python3
"""
Exception hierarchy shared by the field toolkit
"""

from typing import Optional


class KleinGordonError(Exception):
    """Base class for every error raised by the toolkit"""


class GridError(KleinGordonError, ValueError):
    """Invalid grid, non-admissible wavevector or mismatched operands"""


class MassError(KleinGordonError, ValueError):
    """Mass is not strictly positive"""


class ParameterError(KleinGordonError, ValueError):
    """Invalid scalar parameter (b, axis, band limit, sign, alignment)"""


class StabilityError(KleinGordonError):
    """Leapfrog time step exceeds the stability bound"""

    def __init__(self, dt: float, omega_max: float, max_dt: Optional[float] = None):
        self.dt = dt
        self.omega_max = omega_max
        self.max_dt = max_dt if max_dt is not None else 2.0 / omega_max
        super().__init__(
            f"leapfrog unstable: dt={dt:.6g} gives dt*omega_max={dt * omega_max:.6g} >= 2 "
            f"(omega_max={omega_max:.6g}, max admissible dt < {self.max_dt:.6g})"
        )


class ConsistencyError(KleinGordonError):
    """Internal-consistency violation, e.g. a real field came back complex"""


class SnapshotError(KleinGordonError):
    """Malformed snapshot file or ModeSet document"""


class ConfigError(KleinGordonError):
    """Bad verification config or unknown suite name"""
