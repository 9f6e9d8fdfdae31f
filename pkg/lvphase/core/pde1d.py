#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
pde1d.py

1-D Ginzburg-Landau gradient flow at frozen (p, theta):

    rho tau phi_t = kappa (rho phi_x)_x - rho f_phi(p, theta, phi)

ConstantRho divides rho out (tau phi_t = kappa phi_xx - f_phi, an exact
gradient flow of the discrete free energy). FrozenRhoField holds
rho(x) = 1 / f_p(p, theta, phi0(x)) fixed and uses the flux form.

Second-order central differences on a uniform grid. NoFlux boundaries are
ghost-node reflections, Dirichlet boundaries keep the end values fixed.
Stepping is explicit Euler or semi-implicit (diffusion implicit, potential
explicit) through a banded solve.
"""

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid
from scipy.linalg import solve_banded

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.core.potentials import potential_eval
from lvphase.exceptions import DomainError, StabilityViolation
from lvphase.models.data_models import (
    BoundaryKind,
    DensityMode,
    PDEResult,
    Profile1D,
)
from lvphase.models.params import ModelKind, PotentialModel

SCHEMES = ("explicit", "semi-implicit")


def density_field(model: PotentialModel, profile: Profile1D) -> np.ndarray:
    """rho(x) = 1 / f_p(p, theta, phi(x)) of the given profile."""
    nu = np.asarray(potential_eval(model, profile.p, profile.theta, profile.phi).f_p, dtype=float)
    if np.any(nu <= 0):
        raise DomainError("non-positive specific volume in the density field")
    return 1.0 / nu


def _weights(profile: Profile1D, model: PotentialModel) -> np.ndarray:
    if profile.density_mode is DensityMode.FROZEN_RHO_FIELD:
        return profile.rho if profile.rho is not None else density_field(model, profile)
    return np.ones(profile.n)


def _operator_bands(profile: Profile1D, rho: np.ndarray, kappa: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Tridiagonal coefficients (lower, diag, upper) of kappa (rho phi_x)_x / rho.

    Dirichlet end rows are zero.
    """
    n = profile.n
    inv = kappa / (profile.dx * profile.dx)
    rho_half = 0.5 * (rho[1:] + rho[:-1])
    lower = np.zeros(n)
    upper = np.zeros(n)
    lower[1:-1] = inv * rho_half[:-1] / rho[1:-1]
    upper[1:-1] = inv * rho_half[1:] / rho[1:-1]
    if profile.bc.kind is BoundaryKind.NOFLUX:
        upper[0] = 2.0 * inv * rho_half[0] / rho[0]
        lower[-1] = 2.0 * inv * rho_half[-1] / rho[-1]
    diag = -(lower + upper)
    return lower, diag, upper


def _apply(bands, phi: np.ndarray) -> np.ndarray:
    lower, diag, upper = bands
    out = diag * phi
    out[1:] += lower[1:] * phi[:-1]
    out[:-1] += upper[:-1] * phi[1:]
    return out


def stability_limit(profile: Profile1D, model: PotentialModel, safety: Optional[float] = None) -> float:
    """Largest explicit step safety * dx^2 tau / (2 kappa), scaled by the rho contrast."""
    kappa = model.params.kappa
    if kappa == 0:
        return math.inf
    if safety is None:
        safety = DEFAULT_CONFIG["PDE_SAFETY"]
    rho = _weights(profile, model)
    contrast = float(np.max(rho) / np.min(rho))
    return safety * profile.dx ** 2 * model.params.tau / (2.0 * kappa * contrast)


def discrete_free_energy(model: PotentialModel, profile: Profile1D) -> float:
    """
    Discrete free energy of a profile.

    Gradient term from forward differences, potential term by the trapezoid
    rule; both weighted by rho in FrozenRhoField mode. A uniform profile gives
    (n - 1) dx f.
    """
    rho = _weights(profile, model)
    d = potential_eval(model, profile.p, profile.theta, profile.phi)
    grad = np.diff(profile.phi)
    rho_half = 0.5 * (rho[1:] + rho[:-1])
    gradient_term = 0.5 * model.params.kappa / profile.dx * float(np.sum(rho_half * grad * grad))
    potential_term = float(trapezoid(rho * np.asarray(d.f, dtype=float), dx=profile.dx))
    return gradient_term + potential_term


def _check_domain(model: PotentialModel, phi: np.ndarray, step: int):
    if model.kind is not ModelKind.LOGARITHMIC:
        return
    margin = DEFAULT_CONFIG["PDE_DOMAIN_MARGIN"]
    if np.any(np.abs(phi) >= 1.0 - margin) or not np.all(np.isfinite(phi)):
        raise DomainError(f"phi left (-1, 1) at step {step}")


def run_pde1d(model: PotentialModel, profile0: Profile1D, t_end: float,
              dt: Optional[float] = None, record_every: int = 1,
              scheme: str = "explicit", steady_tol: Optional[float] = None,
              safety: Optional[float] = None) -> PDEResult:
    """
    Evolve the gradient flow up to t_end.

    Args:
        model: The potential model
        profile0: Initial profile (grid, boundary condition, frozen p and theta)
        t_end: Final time
        dt: Time step (default PDE_DT_FACTOR * dx^2 tau / kappa)
        record_every: Record the energy every this many steps
        scheme: "explicit" or "semi-implicit"
        steady_tol: Stop once max |phi_t| falls below this value
        safety: Safety factor of the explicit stability bound

    Returns:
        PDEResult with the final profile, the energy series and Lyapunov diagnostics

    Raises:
        StabilityViolation: If an explicit dt exceeds the stability bound
        DomainError: If phi leaves (-1, 1) for the logarithmic model
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    pr = model.params
    tau, kappa = pr.tau, pr.kappa

    profile = profile0
    phi = np.array(profile.phi, dtype=float)
    if profile.bc.kind is BoundaryKind.DIRICHLET:
        phi[0], phi[-1] = profile.bc.phi_left, profile.bc.phi_right
    if profile.density_mode is DensityMode.FROZEN_RHO_FIELD and profile.rho is None:
        profile = profile.model_copy(update={"rho": density_field(model, profile.with_phi(phi))})
    profile = profile.with_phi(phi)
    _check_domain(model, phi, 0)

    limit = stability_limit(profile, model, safety)
    if dt is None:
        dt = DEFAULT_CONFIG["PDE_DT_FACTOR"] * profile.dx ** 2 * tau / kappa if kappa > 0 else 1e-3
    if scheme == "explicit" and dt > limit:
        raise StabilityViolation(f"dt={dt:.3e} exceeds the explicit bound {limit:.3e}")

    rho = _weights(profile, model)
    bands = _operator_bands(profile, rho, kappa)
    free = np.ones(profile.n, dtype=bool)
    if profile.bc.kind is BoundaryKind.DIRICHLET:
        free[0] = free[-1] = False

    banded = None
    if scheme == "semi-implicit":
        lower, diag, upper = bands
        banded = np.zeros((3, profile.n))
        banded[0, 1:] = -dt / tau * upper[:-1]
        banded[1, :] = 1.0 - dt / tau * diag
        banded[2, :-1] = -dt / tau * lower[1:]

    slack = DEFAULT_CONFIG["PDE_ENERGY_SLACK"]
    n_steps = int(math.ceil(t_end / dt - 1e-12))
    energy = discrete_free_energy(model, profile)
    times, energies = [0.0], [energy]
    violations = 0
    converged = False
    max_rate = float("nan")
    step = 0

    for step in range(1, n_steps + 1):
        d = potential_eval(model, profile.p, profile.theta, phi)
        f_phi = np.asarray(d.f_phi, dtype=float)
        rate = (_apply(bands, phi) - f_phi) / tau
        rate[~free] = 0.0
        max_rate = float(np.max(np.abs(rate)))
        if steady_tol is not None and max_rate < steady_tol:
            converged = True
            step -= 1
            break

        if banded is None:
            phi = phi + dt * rate
        else:
            rhs = phi - dt / tau * f_phi
            rhs[~free] = phi[~free]
            phi = solve_banded((1, 1), banded, rhs)
        _check_domain(model, phi, step)

        profile = profile.with_phi(phi)
        new_energy = discrete_free_energy(model, profile)
        if new_energy > energy + slack * abs(energy):
            violations += 1
        energy = new_energy
        if step % record_every == 0 or step == n_steps:
            times.append(step * dt)
            energies.append(energy)

    if times[-1] != step * dt:
        times.append(step * dt)
        energies.append(energy)
    if violations:
        level = "WARNING" if profile.density_mode is DensityMode.CONSTANT_RHO else "INFO"
        logger.log(level, f"Energy increased in {violations} of {step} steps ({profile.density_mode.value})")
    logger.info(f"PDE run: {step} steps of dt={dt:.3e}, E={energy:.12g}, max|phi_t|={max_rate:.3e}, "
                f"converged={converged}")
    return PDEResult(profile=profile, times=times, energies=energies, steps=step,
                     lyapunov_violations=violations, converged=converged, max_phi_t=max_rate)


def kink_profile(u: float, kappa: float, x: np.ndarray, x0: float = 0.0) -> np.ndarray:
    """Stationary quartic kink u tanh(u (x - x0) / sqrt(2 kappa)) at h = 0."""
    return u * np.tanh(u * (np.asarray(x, dtype=float) - x0) / math.sqrt(2.0 * kappa))
