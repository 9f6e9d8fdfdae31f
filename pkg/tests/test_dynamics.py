#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from lvphase.core.dynamics import StepControl, relax_homogeneous, relax_thermal_homogeneous
from lvphase.core.equilibrium import find_stationary_points
from lvphase.core.integrator import DormandPrince
from lvphase.core.potentials import coexistence_pressure
from lvphase.core.thermo_validate import check_dissipation
from lvphase.exceptions import DomainError, NonPositiveVolume, StepFailure
from lvphase.models.data_models import PointKind, PressureSchedule
from lvphase.models.params import make_model

PHI_BAR = math.sqrt(0.4)


# ---------------------------------------------------------------------------
# Integrator and schedules
# ---------------------------------------------------------------------------

def test_dormand_prince_exponential_decay():
    result = DormandPrince(lambda t, y: -y, atol=1e-12, rtol=1e-10).integrate([1.0], 0.0, 2.0)
    assert result.t[-1] == 2.0
    assert np.all(np.diff(result.t) > 0)
    assert result.y[-1, 0] == pytest.approx(math.exp(-2.0), abs=1e-9)
    assert result.n_accepted == len(result.t) - 1


def test_dormand_prince_empty_span():
    result = DormandPrince(lambda t, y: -y).integrate([1.0], 1.0, 1.0)
    assert result.n_accepted == 0
    assert result.y.shape == (1, 1)


def test_schedule_interpolates_and_holds():
    schedule = PressureSchedule(points=[(0.0, 1.0), (2.0, 3.0)])
    assert schedule.value(1.0) == pytest.approx(2.0)
    assert schedule.value(5.0) == 3.0
    assert schedule.rate(0.5) == pytest.approx(1.0)
    assert schedule.rate(2.0) == 0.0
    assert PressureSchedule.constant(0.7).knots == [0.0]


@pytest.mark.parametrize("points", [[], [(0.0, 1.0), (0.0, 2.0)], [(0.0, -1.0)]])
def test_schedule_rejects_bad_points(points):
    with pytest.raises(ValueError):
        PressureSchedule(points=points)


# ---------------------------------------------------------------------------
# Isothermal relaxation
# ---------------------------------------------------------------------------

def test_minimum_is_a_fixed_point(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    traj = relax_homogeneous(log_model, PHI_BAR, 0.6, PressureSchedule.constant(p0), t_end=5.0)
    assert np.max(np.abs(traj.phi - PHI_BAR)) < 1e-10


def test_relaxes_to_the_liquid_minimum(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    traj = relax_homogeneous(log_model, 0.1, 0.6, PressureSchedule.constant(p0), t_end=20.0)
    assert traj.phi[-1] == pytest.approx(PHI_BAR, abs=1e-8)
    assert traj.t[-1] == 20.0


def test_free_energy_is_non_increasing_at_constant_pressure(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    traj = relax_homogeneous(log_model, -0.05, 0.6, PressureSchedule.constant(p0), t_end=10.0)
    assert np.all(np.diff(traj.f) <= 1e-12)
    assert np.all(traj.dissipation >= 0)
    assert traj.phi[-1] == pytest.approx(-PHI_BAR, abs=1e-8)


def test_energy_balance_at_constant_pressure(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    traj = relax_homogeneous(log_model, 0.1, 0.6, PressureSchedule.constant(p0), t_end=20.0)
    assert check_dissipation(traj).passed


@pytest.mark.parametrize("shape", ["up", "down", "up-down"])
def test_energy_balance_under_pressure_ramps(ramp_model, shape):
    p0 = coexistence_pressure(ramp_model, 0.6)
    lo, hi = 0.5 * p0, 1.5 * p0
    points = {
        "up": [(0.0, lo), (10.0, hi)],
        "down": [(0.0, hi), (10.0, lo)],
        "up-down": [(0.0, lo), (5.0, hi), (10.0, lo)],
    }[shape]
    traj = relax_homogeneous(ramp_model, 0.0, 0.6, PressureSchedule(points=points), t_end=15.0)
    report = check_dissipation(traj)
    assert report.passed, report.offending_point
    assert np.all(traj.nu > 0)


def test_slow_ramp_tracks_a_local_minimum():
    model = make_model("logarithmic", A=2.0, R=10.0, a=0.1, tau=0.01)
    theta = 0.6
    p0 = coexistence_pressure(model, theta)
    schedule = PressureSchedule(points=[(0.0, p0 - 0.06), (100.0, p0 + 0.06)])
    traj = relax_homogeneous(model, -0.8, theta, schedule, t_end=100.0)
    k = (traj.p - p0) / model.params.a
    for i in np.flatnonzero((traj.t > 5.0) & (np.abs(k) > 0.3))[::10]:
        minima = [pt.phi for pt in find_stationary_points(model, traj.p[i], theta).points
                  if pt.kind is PointKind.MINIMUM]
        assert min(abs(traj.phi[i] - m) for m in minima) < 1e-2
    # the vapour branch ends at a small positive field, so the ramp ends on the liquid side
    assert traj.phi[-1] > 0.5


def test_trajectory_rows_follow_columns(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    traj = relax_homogeneous(log_model, 0.1, 0.6, PressureSchedule.constant(p0), t_end=1.0)
    rows = list(traj.rows())
    assert traj.columns == ["t", "phi", "p", "nu", "f", "dissipation", "balance_residual"]
    assert len(rows) == len(traj.t)
    assert all(len(row) == len(traj.columns) for row in rows)


def test_step_failure_when_steps_cannot_shrink(log_model):
    control = StepControl(h0=1.0, h_min=1.0)
    with pytest.raises(StepFailure):
        relax_homogeneous(log_model, 0.1, 0.6, PressureSchedule.constant(1.0), t_end=10.0, dt_ctrl=control)


@pytest.mark.parametrize("phi0", [1.0, -1.0, 1.5])
def test_logarithmic_initial_value_outside_domain(log_model, phi0):
    with pytest.raises(DomainError):
        relax_homogeneous(log_model, phi0, 0.6, PressureSchedule.constant(1.0), t_end=1.0)


def test_non_positive_volume_is_reported():
    model = make_model("logarithmic", R=0.01)
    with pytest.raises(NonPositiveVolume):
        relax_homogeneous(model, 0.9, 0.6, PressureSchedule.constant(5.0), t_end=1.0)


# ---------------------------------------------------------------------------
# Thermal relaxation
# ---------------------------------------------------------------------------

def test_thermal_equilibrium_without_supply(thermal_model):
    p0 = coexistence_pressure(thermal_model, 0.6)
    traj = relax_thermal_homogeneous(thermal_model, PHI_BAR, 0.6, PressureSchedule.constant(p0),
                                     r_supply=0.0, t_end=5.0)
    assert np.max(np.abs(traj.theta - 0.6)) < 1e-10
    assert traj.columns[-2:] == ["theta", "eta"]


def test_entropy_grows_during_adiabatic_relaxation(thermal_model):
    p0 = coexistence_pressure(thermal_model, 0.6)
    traj = relax_thermal_homogeneous(thermal_model, 0.1, 0.6, PressureSchedule.constant(p0),
                                     r_supply=0.0, t_end=20.0)
    assert np.all(np.diff(traj.eta) >= -1e-10)
    assert traj.eta[-1] > traj.eta[0]
    assert check_dissipation(traj).passed


def test_heat_supply_raises_entropy_and_temperature(thermal_model):
    p = coexistence_pressure(thermal_model, 1.5)
    traj = relax_thermal_homogeneous(thermal_model, 0.0, 1.5, PressureSchedule.constant(p),
                                     r_supply=1.0, t_end=2.0)
    assert np.all(np.diff(traj.eta) > 0)
    assert traj.theta[-1] > 1.5
    assert check_dissipation(traj).passed


def test_heat_supply_as_function_of_time(thermal_model):
    p = coexistence_pressure(thermal_model, 1.5)
    traj = relax_thermal_homogeneous(thermal_model, 0.0, 1.5, PressureSchedule.constant(p),
                                     r_supply=lambda t: 0.0 if t < 1.0 else 1.0, t_end=2.0)
    assert traj.theta[-1] > 1.5


def test_thermal_rejects_non_positive_temperature(thermal_model):
    with pytest.raises(ValueError):
        relax_thermal_homogeneous(thermal_model, 0.0, 0.0, PressureSchedule.constant(1.0),
                                  r_supply=0.0, t_end=1.0)
