#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
dynamics.py

Homogeneous relaxation of the order parameter, tau phi' = -f_phi, under a
prescribed pressure schedule p(t).

Two modes:

* isothermal: theta is fixed; the integrated dissipation D = int tau phi'^2
  and pressure work W = int nu p' give the energy balance residual
  f(t) - f(0) + D - W.
* thermal: theta follows the homogeneous heat equation theta eta' = r + tau phi'^2
  with eta = -f_theta; the integrated entropy supply S gives the residual
  eta(t) - eta(0) - S.

Integration runs segment by segment between schedule knots so p' is
constant on every segment.
"""

from typing import Callable, List, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.core.integrator import DormandPrince
from lvphase.core.potentials import potential_eval
from lvphase.exceptions import DomainError, NonPositiveVolume, SingularHeatCapacity
from lvphase.models.data_models import PressureSchedule, Trajectory
from lvphase.models.params import ModelKind, PotentialModel

HEAT_CAPACITY_FLOOR = 1e-12


class StepControl(BaseModel):
    """Tolerances and step limits of the adaptive integrator."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    atol: float = Field(default=DEFAULT_CONFIG["ODE_ATOL"], gt=0)
    rtol: float = Field(default=DEFAULT_CONFIG["ODE_RTOL"], gt=0)
    h0: Optional[float] = Field(default=DEFAULT_CONFIG["ODE_H0"], gt=0)
    h_min: float = Field(default=DEFAULT_CONFIG["ODE_H_MIN"], gt=0)
    h_max: Optional[float] = Field(default=DEFAULT_CONFIG["ODE_H_MAX"], gt=0)
    max_steps: int = Field(default=DEFAULT_CONFIG["ODE_MAX_STEPS"], gt=0)


def _segments(schedule: PressureSchedule, t_end: float) -> List[float]:
    inner = [t for t in schedule.knots if 0.0 < t < t_end]
    return [0.0] + inner + [t_end]


def _check_phi0(model: PotentialModel, phi0: float):
    if model.kind is ModelKind.LOGARITHMIC and not -1.0 < phi0 < 1.0:
        raise DomainError(f"phi0={phi0} outside (-1, 1)")


def _run_segments(rhs_factory, y0, schedule, t_end, control: StepControl):
    """Integrate across all schedule segments; returns (t, y, accepted, rejected)."""
    times = [np.array([0.0])]
    states = [np.array([y0], dtype=float)]
    y = np.array(y0, dtype=float)
    h0 = control.h0
    accepted = rejected = 0
    bounds = _segments(schedule, t_end)
    for t_a, t_b in zip(bounds, bounds[1:]):
        solver = DormandPrince(rhs_factory(schedule.rate(t_a)), atol=control.atol,
                               rtol=control.rtol, h_min=control.h_min,
                               h_max=control.h_max, max_steps=control.max_steps)
        result = solver.integrate(y, t_a, t_b, h0=h0)
        times.append(result.t[1:])
        states.append(result.y[1:])
        y = result.y[-1]
        h0 = result.last_h if result.last_h > 0 else None
        accepted += result.n_accepted
        rejected += result.n_rejected
    return np.concatenate(times), np.concatenate(states), accepted, rejected


def relax_homogeneous(model: PotentialModel, phi0: float, theta: float,
                      schedule: PressureSchedule, t_end: float,
                      dt_ctrl: Optional[StepControl] = None) -> Trajectory:
    """
    Isothermal homogeneous relaxation tau phi' = -f_phi(p(t), theta, phi).

    Args:
        model: The potential model
        phi0: Initial order parameter
        theta: Fixed temperature
        schedule: Pressure schedule p(t)
        t_end: Final time
        dt_ctrl: Integrator tolerances (defaults from the configuration)

    Returns:
        Trajectory with t, phi, p, nu, f, dissipation and balance_residual

    Raises:
        StepFailure: If the step controller underflows
        DomainError: If phi0 is outside (-1, 1) for the logarithmic model
        NonPositiveVolume: If nu <= 0 along the trajectory
    """
    _check_phi0(model, phi0)
    control = dt_ctrl or StepControl()
    tau = model.params.tau

    def rhs_factory(p_rate):
        def rhs(t, y):
            p = schedule.value(t)
            d = potential_eval(model, p, theta, y[0])
            phi_dot = -d.f_phi / tau
            return np.array([phi_dot, tau * phi_dot * phi_dot, d.f_p * p_rate])
        return rhs

    t, y, accepted, rejected = _run_segments(rhs_factory, [phi0, 0.0, 0.0], schedule, t_end, control)
    phi = y[:, 0]
    p = np.array([schedule.value(ti) for ti in t])
    d = potential_eval(model, p, theta, phi)
    nu = np.asarray(d.f_p, dtype=float)
    if np.any(nu <= 0):
        i = int(np.argmin(nu))
        raise NonPositiveVolume(float(nu[i]), float(p[i]), theta)
    f = np.asarray(d.f, dtype=float)
    phi_dot = -np.asarray(d.f_phi, dtype=float) / tau
    balance = f - f[0] + y[:, 1] - y[:, 2]

    logger.info(f"Isothermal relaxation: t_end={t_end}, {accepted} accepted / {rejected} rejected steps, "
                f"max |balance| = {np.max(np.abs(balance)):.3e}")
    return Trajectory(mode="isothermal", t=t, phi=phi, p=p, nu=nu, f=f,
                      dissipation=tau * phi_dot ** 2, balance_residual=balance,
                      tau=tau, atol=control.atol, rtol=control.rtol,
                      n_accepted=accepted, n_rejected=rejected)


def relax_thermal_homogeneous(model: PotentialModel, phi0: float, theta0: float,
                              schedule: PressureSchedule,
                              r_supply: Union[float, Callable[[float], float]],
                              t_end: float, dt_ctrl: Optional[StepControl] = None) -> Trajectory:
    """
    Homogeneous relaxation coupled to the heat equation theta eta' = r + tau phi'^2.

    theta' = ((r + tau phi'^2) / theta - eta_phi phi' - eta_p p') / eta_theta
    with eta_theta = -f_thetatheta, eta_phi = -f_thetaphi, eta_p = -f_ptheta.

    Args:
        r_supply: Specific heat supply r, constant or a function of t

    Raises:
        SingularHeatCapacity: If |theta eta_theta| < 1e-12 along the trajectory
        StepFailure: If the step controller underflows
    """
    _check_phi0(model, phi0)
    if theta0 <= 0:
        raise ValueError("theta0 must be > 0")
    control = dt_ctrl or StepControl()
    tau = model.params.tau
    supply = r_supply if callable(r_supply) else (lambda _t, _r=float(r_supply): _r)

    def rhs_factory(p_rate):
        def rhs(t, y):
            phi, theta = y[0], y[1]
            if theta <= 0:
                raise DomainError(f"theta={theta} left (0, inf)")
            p = schedule.value(t)
            d = potential_eval(model, p, theta, phi)
            phi_dot = -d.f_phi / tau
            eta_theta = -d.f_thetatheta
            if abs(theta * eta_theta) < HEAT_CAPACITY_FLOOR:
                raise SingularHeatCapacity(f"theta*eta_theta={theta * eta_theta:.3e} at t={t:.6g}")
            source = (supply(t) + tau * phi_dot * phi_dot) / theta
            theta_dot = (source + d.f_thetaphi * phi_dot + d.f_ptheta * p_rate) / eta_theta
            return np.array([phi_dot, theta_dot, source])
        return rhs

    t, y, accepted, rejected = _run_segments(rhs_factory, [phi0, theta0, 0.0], schedule, t_end, control)
    phi, theta = y[:, 0], y[:, 1]
    p = np.array([schedule.value(ti) for ti in t])
    d = potential_eval(model, p, theta, phi)
    nu = np.asarray(d.f_p, dtype=float)
    if np.any(nu <= 0):
        i = int(np.argmin(nu))
        raise NonPositiveVolume(float(nu[i]), float(p[i]), float(theta[i]))
    eta = -np.asarray(d.f_theta, dtype=float)
    phi_dot = -np.asarray(d.f_phi, dtype=float) / tau
    balance = eta - eta[0] - y[:, 2]

    logger.info(f"Thermal relaxation: t_end={t_end}, theta {theta0:.6g} -> {theta[-1]:.6g}, "
                f"{accepted} accepted / {rejected} rejected steps")
    return Trajectory(mode="thermal", t=t, phi=phi, p=p, nu=nu, f=np.asarray(d.f, dtype=float),
                      dissipation=tau * phi_dot ** 2, balance_residual=balance,
                      theta=theta, eta=eta, tau=tau, atol=control.atol, rtol=control.rtol,
                      n_accepted=accepted, n_rejected=rejected)
