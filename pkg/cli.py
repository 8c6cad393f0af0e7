#!/usr/bin/env python3
"""
Command-line front end for the Klein-Gordon field toolkit
Runs verification suites, evolves snapshots and exports spectra as CSV
"""

from dotenv import load_dotenv
load_dotenv()

import csv
import functools
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from config import config
from kleingordon.errors import ConfigError, KleinGordonError, SnapshotError, StabilityError
from kleingordon.evolution import integrator_factory
from kleingordon.fields import lattice_to_spectrum, random_field, spectrum_to_lattice
from kleingordon.grid import Mass, SpatialGrid, grid_wavevectors
from kleingordon.modes import modeset_from_json, modeset_to_lattice
from kleingordon.products import mode_norm_contributions, naive_symplectic, norm, total_energy
from kleingordon.snapshot import read_snapshot, write_snapshot
from kleingordon.verification.runner import SuiteConfig, failing_checks, run_suite

logging.basicConfig(level=getattr(logging, config.LOG_LEVEL))
logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

OBSERVABLE_COLUMNS = ['step', 'time', 'norm', 'energy', 'naive_charge']


def _fail(message: str, code: int):
    logger.error(message)
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def exit_codes(command):
    """0 pass, 1 check or physics failure, 2 usage or I/O error"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except StabilityError as e:
            _fail(str(e), EXIT_FAILED)
        except (ConfigError, SnapshotError, OSError) as e:
            _fail(str(e), EXIT_USAGE)
        except KleinGordonError as e:
            _fail(f"{type(e).__name__}: {e}", EXIT_USAGE)

    return wrapper


def _number(value: float) -> str:
    return repr(float(value))


@click.group(name='kgfield')
def cli():
    """Spectral toolkit for real Klein-Gordon fields"""


@cli.command()
@click.option('-c', '--config', 'config_path', type=click.Path(dir_okay=False),
              help='JSON experiment config; defaults come from the environment.')
@click.option('-o', '--out', type=click.Path(dir_okay=False), help='Write the JSON report here.')
@click.option('--seed', type=int, help='Override the config seed.')
@click.option('--threads', type=click.IntRange(min=1), help='Override KG_THREADS for this run.')
@click.option('--table/--no-table', default=True, show_default=True, help='Print the summary table.')
@exit_codes
def verify(config_path: Optional[str], out: Optional[str], seed: Optional[int],
           threads: Optional[int], table: bool):
    """Run the verification suites and report pass/fail"""
    cfg = SuiteConfig.from_file(config_path) if config_path else SuiteConfig.default()
    if seed is not None:
        cfg = SuiteConfig(seed, cfg.grids, cfg.mass, cfg.tolerances, cfg.suites)
    report = run_suite(cfg, workers=threads)
    if out:
        Path(out).write_text(report.to_json())
        logger.info(f"report written to {out}")
    if table:
        click.echo(report.summary_table())
    if not report.passed:
        failed = failing_checks(report)
        _fail(f"{len(failed)} check(s) or suite(s) failed: {', '.join(failed)}", EXIT_FAILED)


@cli.command()
@click.argument('snapshot_in', type=click.Path(dir_okay=False))
@click.option('-i', '--integrator', 'integrator_name', default='exact', show_default=True,
              type=click.Choice(['exact', 'leapfrog'], case_sensitive=False))
@click.option('--dt', type=float, required=True, help='Time step.')
@click.option('--steps', type=click.IntRange(min=0), required=True, help='Number of steps.')
@click.option('-o', '--out', type=click.Path(dir_okay=False), required=True, help='Final snapshot.')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False),
              help='Append per-step observables (time, norm, energy, naive charge).')
@click.option('--b', 'b', type=float, default=None, help='Norm scale b (default KG_DEFAULT_B).')
@exit_codes
def evolve(snapshot_in: str, integrator_name: str, dt: float, steps: int, out: str,
           csv_path: Optional[str], b: Optional[float]):
    """Evolve a snapshot and record observables"""
    b = config.DEFAULT_B if b is None else b
    field = read_snapshot(snapshot_in)
    integrator = integrator_factory.get_integrator(integrator_name)
    integrator.check(field, dt)

    rows = []
    final = field
    for n, state in enumerate(integrator.states(field, dt, steps)):
        final = state
        if csv_path:
            rows.append([n, _number(state.time), _number(norm(state, b)), _number(total_energy(state)),
                         _number(naive_symplectic(state, state).imag)])

    if steps == 0:
        # unchanged field: copy the input so the output matches bit for bit
        Path(out).write_bytes(Path(snapshot_in).read_bytes())
    else:
        write_snapshot(final, out)
    logger.info(f"{integrator_name}: {steps} steps of dt={dt:g}, snapshot written to {out}")

    if csv_path:
        path = Path(csv_path)
        new_file = not path.exists() or path.stat().st_size == 0
        with path.open('a', newline='') as handle:
            writer = csv.writer(handle)
            if new_file:
                writer.writerow(OBSERVABLE_COLUMNS)
            writer.writerows(rows)
        logger.info(f"appended {len(rows)} rows to {csv_path}")


@cli.command()
@click.argument('snapshot_in', type=click.Path(dir_okay=False))
@click.argument('csv_out', type=click.Path(dir_okay=False))
@click.option('--b', 'b', type=float, default=None, help='Norm scale b (default KG_DEFAULT_B).')
@exit_codes
def spectrum(snapshot_in: str, csv_out: str, b: Optional[float]):
    """Export per-mode amplitudes and norm contributions"""
    b = config.DEFAULT_B if b is None else b
    field = read_snapshot(snapshot_in)
    s = lattice_to_spectrum(field)
    grid = field.grid
    contributions = mode_norm_contributions(s, b).reshape(-1)
    alpha = s.alpha.reshape(-1)
    omega = s.omega.reshape(-1)
    wavevectors = grid_wavevectors(grid)
    with Path(csv_out).open('w', newline='') as handle:
        writer = csv.writer(handle)
        writer.writerow([f"k{axis}" for axis in range(grid.dim)]
                        + ['omega', 'alpha_re', 'alpha_im', 'norm_contribution'])
        for row in range(grid.size):
            writer.writerow([_number(c) for c in wavevectors[row]]
                            + [_number(omega[row]), _number(alpha[row].real), _number(alpha[row].imag),
                               _number(contributions[row])])
    total = float(np.sum(contributions))
    logger.info(f"spectrum of {grid.size} modes written to {csv_out}")
    click.echo(f"total norm (b={b:g}): {total!r}")


@cli.command('init-mode')
@click.argument('modeset_json', type=click.Path(dir_okay=False))
@click.argument('snapshot_out', type=click.Path(dir_okay=False))
@click.option('-n', '--points', type=click.IntRange(min=4), default=64, show_default=True,
              help='Lattice points per axis.')
@click.option('-L', '--length', type=float, default=2.0 * np.pi, show_default=True, help='Box length per axis.')
@exit_codes
def init_mode(modeset_json: str, snapshot_out: str, points: int, length: float):
    """Evaluate a ModeSet JSON document on a grid and write a snapshot"""
    modeset = modeset_from_json(Path(modeset_json).read_text())
    grid = SpatialGrid.cube(modeset.dim, points, length)
    write_snapshot(modeset_to_lattice(modeset, grid), snapshot_out)
    click.echo(f"wrote {len(modeset)} modes on a {grid.label} grid to {snapshot_out}")


@cli.command('random')
@click.argument('snapshot_out', type=click.Path(dir_okay=False))
@click.option('-d', '--dim', type=click.IntRange(1, 3), default=1, show_default=True)
@click.option('-n', '--points', type=click.IntRange(min=4), default=64, show_default=True)
@click.option('-L', '--length', type=float, default=2.0 * np.pi, show_default=True)
@click.option('-m', '--mass', type=float, default=None, help='Mass (default KG_DEFAULT_MASS).')
@click.option('-s', '--seed', type=int, default=None, help='Seed (default KG_DEFAULT_SEED).')
@click.option('--band', type=float, default=None, help='Keep modes with |k| <= band.')
@exit_codes
def random_snapshot(snapshot_out: str, dim: int, points: int, length: float, mass: Optional[float],
                    seed: Optional[int], band: Optional[float]):
    """Write a seeded random field snapshot"""
    mass = Mass(config.DEFAULT_MASS if mass is None else mass)
    seed = config.DEFAULT_SEED if seed is None else seed
    grid = SpatialGrid.cube(dim, points, length)
    write_snapshot(spectrum_to_lattice(random_field(grid, mass, seed, band)), snapshot_out)
    click.echo(f"wrote random {grid.label} field (seed {seed}) to {snapshot_out}")


if __name__ == '__main__':
    cli()
