#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
commands.py

Command implementations behind the CLI. Each command takes the validated
RunConfig, calls the library and streams CSV rows to the artifact writer.
``run_command`` maps exceptions to exit codes:

    0  success
    1  usage or configuration error
    2  runtime error (the error name goes to stderr)
"""

import math
from typing import Any, Callable, Dict, Optional

import click
import numpy as np
from loguru import logger

from lvphase import __version__
from lvphase.config.parser import RunConfig
from lvphase.core.dynamics import StepControl, relax_homogeneous, relax_thermal_homogeneous
from lvphase.core.equilibrium import (
    admissible_pressure_limit,
    find_stationary_points,
    hysteresis_sweep_reduced,
    isotherm,
    minima_structure_map,
    spinodal,
)
from lvphase.core.pde1d import run_pde1d
from lvphase.core.potentials import coexistence_pressure, u_schedule
from lvphase.core.thermo_validate import audit_suite
from lvphase.exceptions import ParseError, PhaseFieldError, ValidationError
from lvphase.models.data_models import (
    AuditReport,
    BoundaryCondition,
    DensityMode,
    PressureSchedule,
    Profile1D,
)
from lvphase.models.params import PotentialModel
from lvphase.utils.csv_io import csv_artifact

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class AuditFailure(PhaseFieldError):
    """At least one audit of the validate command failed."""


def _isotherm(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("isotherm")
    p0 = float(coexistence_pressure(model, block.theta))
    p_min = block.p_min if block.p_min is not None else 0.5 * p0
    if block.p_max is not None:
        p_max = block.p_max
    else:
        p_max = admissible_pressure_limit(model, block.theta, (p_min, 1.5 * p0))
        if p_max < 1.5 * p0:
            logger.warning(f"Default isotherm range cut at p={p_max:.6g}: nu <= 0 beyond it "
                           f"(set run.isotherm.p_max to override)")
    curve = isotherm(model, block.theta, (p_min, p_max), block.n)
    with csv_artifact(out, ["p", "nu", "phi", "branch"], meta) as writer:
        for s in curve.samples:
            writer.row([s.p, s.nu, s.phi, s.branch])


def _phase_diagram(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("phase-diagram")
    u_axis, h_axis, counts = minima_structure_map(
        model, (block.u_min, block.u_max), (block.h_min, block.h_max), (block.n_u, block.n_h))
    with csv_artifact(out, ["u", "h_over_a", "n_minima"], meta) as writer:
        for i, u in enumerate(u_axis):
            for j, h in enumerate(h_axis):
                writer.row([float(u), float(h), int(counts[i, j])])


def _minima(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("minima")
    p = block.p if block.p is not None else float(coexistence_pressure(model, block.theta))
    eq = find_stationary_points(model, p, block.theta)
    with csv_artifact(out, ["phi", "kind", "f_value", "is_absolute_min", "residual"], meta) as writer:
        for pt in eq.points:
            writer.row([pt.phi, pt.kind.value, pt.f_value, pt.is_absolute_min, pt.residual])


def _spinodal(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("spinodal")
    a = model.params.a
    with csv_artifact(out, ["theta", "u", "h_minus", "h_plus", "h_bar_over_a"], meta) as writer:
        for theta in np.linspace(block.theta_min, block.theta_max, block.n):
            theta = float(theta)
            fields = spinodal(model, theta)
            u = float(u_schedule(model, theta))
            if fields:
                writer.row([theta, u, fields[0], fields[1], fields[1] / a])
            else:
                writer.row([theta, u, math.nan, math.nan, math.nan])


def _hysteresis(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("hysteresis")
    a = model.params.a
    u = block.u if block.u is not None else float(u_schedule(model, block.theta))
    amp = block.h_amplitude
    up = np.linspace(-amp, amp, block.n_steps)
    path = np.concatenate([up, up[::-1][1:]]) * a
    sweep = hysteresis_sweep_reduced(model, u, path)
    with csv_artifact(out, ["h_over_a", "phi", "branch"], meta) as writer:
        for point in sweep:
            writer.row([point.h / a, point.phi, point.branch])


def _schedule(model: PotentialModel, block) -> PressureSchedule:
    if block.schedule:
        return PressureSchedule(points=block.schedule)
    return PressureSchedule.constant(float(coexistence_pressure(model, block.theta)))


def _relax(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("relax")
    control = StepControl(atol=block.atol, rtol=block.rtol)
    trajectory = relax_homogeneous(model, block.phi0, block.theta, _schedule(model, block),
                                   block.t_end, control)
    with csv_artifact(out, trajectory.columns, meta) as writer:
        writer.rows(trajectory.rows())


def _thermal(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("thermal")
    control = StepControl(atol=block.atol, rtol=block.rtol)
    trajectory = relax_thermal_homogeneous(model, block.phi0, block.theta, _schedule(model, block),
                                           block.r, block.t_end, control)
    with csv_artifact(out, trajectory.columns, meta) as writer:
        writer.rows(trajectory.rows())


def initial_profile(model: PotentialModel, block) -> Profile1D:
    """Initial field of a pde1d run between the two extreme minima at (p, theta)."""
    p = block.p if block.p is not None else float(coexistence_pressure(model, block.theta))
    minima = find_stationary_points(model, p, block.theta).minima
    low, high = minima[0].phi, minima[-1].phi
    if block.amplitude is not None:
        low, high = -block.amplitude, block.amplitude
    x0 = block.x0 if block.x0 is not None else -0.5 * (block.n - 1) * block.dx
    x = x0 + block.dx * np.arange(block.n)
    mid, half = 0.5 * (low + high), 0.5 * (high - low)
    if block.initial == "step":
        phi = np.where(x < 0.0, low, high)
    elif block.initial == "tanh":
        width = math.sqrt(2.0 * max(model.params.kappa, 1e-300))
        phi = mid + half * np.tanh(x / width)
    else:
        phi = np.full(block.n, high)
    if block.bc == "dirichlet":
        left = block.phi_left if block.phi_left is not None else float(phi[0])
        right = block.phi_right if block.phi_right is not None else float(phi[-1])
        bc = BoundaryCondition.dirichlet(left, right)
    else:
        bc = BoundaryCondition.noflux()
    return Profile1D(phi=phi, dx=block.dx, x0=x0, p=p, theta=block.theta, bc=bc,
                     density_mode=DensityMode(block.density_mode))


def _pde1d(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("pde1d")
    result = run_pde1d(model, initial_profile(model, block), block.t_end, dt=block.dt,
                       record_every=block.record_every, scheme=block.scheme,
                       steady_tol=block.steady_tol)
    with csv_artifact(out, ["series", "coord", "value"], meta) as writer:
        for t, energy in result.energy_series:
            writer.row(["energy", t, energy])
        for x, phi in zip(result.profile.x, result.profile.phi):
            writer.row(["profile", float(x), float(phi)])
        writer.comment(f"lyapunov_violations={result.lyapunov_violations} converged={result.converged}")


def _validate(model: PotentialModel, config: RunConfig, out: str, meta: Dict[str, Any], seed):
    block = config.run("validate")
    reports = audit_suite(model, seed=seed if seed is not None else block.seed,
                          n_samples=block.n_samples, n_pairs=block.n_pairs)
    with csv_artifact(out, AuditReport.CSV_COLUMNS, meta) as writer:
        for report in reports:
            writer.row(report.csv_row())
    width = max(len(r.check) for r in reports)
    click.echo("Audit summary:", err=True)
    for r in reports:
        verdict = "PASS" if r.passed else "FAIL"
        click.echo(f"  {r.check:<{width}}  {verdict}  "
                   f"max_rel_error={r.max_rel_error:.3e}  tol={r.tolerance:.1e}", err=True)
    failed = [r.check for r in reports if not r.passed]
    if failed:
        raise AuditFailure(", ".join(failed))


COMMANDS: Dict[str, Callable] = {
    "isotherm": _isotherm,
    "phase-diagram": _phase_diagram,
    "minima": _minima,
    "spinodal": _spinodal,
    "hysteresis": _hysteresis,
    "relax": _relax,
    "thermal": _thermal,
    "pde1d": _pde1d,
    "validate": _validate,
}


def run_command(cmd: str, config: RunConfig, out_path: str = "-", seed: Optional[int] = None) -> int:
    """
    Run one command and write its CSV artifact.

    Returns:
        Exit code (0 ok, 1 usage/config error, 2 runtime error)
    """
    if cmd not in COMMANDS:
        click.echo(f"UsageError: unknown command {cmd!r}", err=True)
        return EXIT_USAGE
    metadata = {"command": cmd, "config": config.echo(), "lvphase": __version__}
    if seed is not None:
        metadata["seed"] = seed
    metadata["config"]["run"].setdefault(cmd, config.run(cmd).model_dump())
    try:
        COMMANDS[cmd](config.model(), config, out_path, metadata, seed)
    except (ParseError, ValidationError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_USAGE
    except (PhaseFieldError, ArithmeticError, ValueError) as exc:
        logger.error(f"{cmd} failed: {type(exc).__name__}: {exc}")
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_RUNTIME
    logger.info(f"Command {cmd} finished, artifact written to {out_path}")
    return EXIT_OK

