#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvphase.core.potentials import (
    background_f0,
    coexistence_pressure,
    coexistence_slope,
    density_split,
    h_field,
    order_part,
    potential_eval,
    quartic_F,
    quartic_F_x,
    quartic_G,
    quartic_G_x,
    thermo_point,
    u_schedule,
    volume_split,
)
from lvphase.exceptions import DomainError, InvalidParams, NonPositiveVolume
from lvphase.models.params import ModelKind, make_model


@pytest.mark.parametrize("x, expected", [(0.0, 0.0), (1.0, -0.25), (2.0, 2.0)])
def test_quartic_F_values(x, expected):
    assert quartic_F(x, 1.0) == pytest.approx(expected)


@pytest.mark.parametrize("x, expected", [(0.0, 0.0), (1.0, -2.0 / 3.0), (5.0, -2.0 / 3.0), (-5.0, 2.0 / 3.0)])
def test_quartic_G_values(x, expected):
    assert quartic_G(x, 1.0) == pytest.approx(expected)


def test_quartic_derivative_accessors():
    assert quartic_F_x(2.0, 1.0) == pytest.approx(6.0)
    assert quartic_G_x(0.5, 1.0) == pytest.approx(-0.75)
    assert quartic_G_x(3.0, 1.0) == 0.0


@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.0, max_value=2.0))
def test_G_is_odd(x, u):
    assert quartic_G(-x, u) == -quartic_G(x, u)


def test_u_schedule_logarithmic(log_model):
    assert u_schedule(log_model, 1.0) == 0.0
    assert u_schedule(log_model, 0.5) == pytest.approx(-0.5)
    assert u_schedule(log_model, 0.6) == pytest.approx(-0.4)


def test_u_schedule_logarithmic_is_increasing(log_model):
    theta = np.linspace(0.05, 3.0, 200)
    u = np.asarray(u_schedule(log_model, theta))
    assert np.all(np.diff(u) > 0)
    assert np.all(u > -1.0)


def test_u_schedule_quartic():
    model = make_model("quartic", dnu_ref=4.0 / 3.0, beta_q=1.0)
    assert u_schedule(model, 1e-12) == pytest.approx(1.0, rel=1e-9)
    assert u_schedule(model, 1.0) == 0.0
    assert u_schedule(model, 1.5) == 0.0


def test_u_schedule_rejects_non_positive_theta(log_model):
    with pytest.raises(InvalidParams):
        u_schedule(log_model, 0.0)


def test_coexistence_pressure(log_model):
    assert coexistence_pressure(log_model, 1.0) == pytest.approx(1.0)
    assert coexistence_pressure(log_model, 0.9) == pytest.approx(math.exp(7.0 * (1.0 - 1.0 / 0.9)))
    assert coexistence_pressure(log_model, 0.01) < 1e-200
    theta = np.linspace(0.2, 2.0, 50)
    assert np.all(np.diff(coexistence_pressure(log_model, theta)) > 0)


def test_coexistence_slope_matches_difference(log_model):
    h = 1e-6
    numeric = (coexistence_pressure(log_model, 0.8 + h) - coexistence_pressure(log_model, 0.8 - h)) / (2 * h)
    assert coexistence_slope(log_model, 0.8) == pytest.approx(numeric, rel=1e-7)


def test_h_field(log_model):
    p0 = coexistence_pressure(log_model, 0.7)
    assert h_field(log_model, p0, 0.7).h == pytest.approx(0.0, abs=1e-15)
    hf = h_field(log_model, p0 + 0.1, 0.7)
    assert hf.h == pytest.approx(0.1)
    assert hf.h_p == 1.0
    assert hf.h_theta == pytest.approx(-coexistence_slope(log_model, 0.7))


@given(st.floats(min_value=0.01, max_value=3.0), st.floats(min_value=0.2, max_value=2.0))
def test_h_sign_follows_pressure(p, theta):
    model = make_model("logarithmic")
    p0 = coexistence_pressure(model, theta)
    assert np.sign(h_field(model, p, theta).h) == np.sign(p - p0)


def test_background_at_reference_point(log_model):
    bg = background_f0(log_model, 1.0, 1.0)
    assert bg.f0 == pytest.approx(1.0)
    assert bg.f0_p == pytest.approx(1.0)


def test_background_ideal_gas_and_heat_capacity(log_model):
    p, theta = np.meshgrid(np.linspace(0.1, 3.0, 7), np.linspace(0.2, 2.0, 5))
    bg = background_f0(log_model, p, theta)
    np.testing.assert_allclose(bg.f0_p * p, theta, rtol=1e-14)
    np.testing.assert_allclose(bg.f0_thetatheta, -1.0 / theta, rtol=1e-14)


def test_background_rejects_non_positive_pressure(log_model):
    with pytest.raises(InvalidParams):
        background_f0(log_model, -1.0, 0.5)


def test_background_term_hook():
    class Correction:
        def value(self, theta):
            return theta ** 2

        def dtheta(self, theta):
            return 2.0 * theta

        def dtheta2(self, theta):
            return 2.0 * np.ones_like(theta)

    plain = make_model("quartic")
    corrected = make_model("quartic", background_term=Correction())
    a = background_f0(plain, 0.5, 0.7)
    b = background_f0(corrected, 0.5, 0.7)
    assert b.f0 - a.f0 == pytest.approx(0.49)
    assert b.f0_theta - a.f0_theta == pytest.approx(1.4)
    assert b.f0_thetatheta - a.f0_thetatheta == pytest.approx(2.0)


def test_logarithmic_f_phi_vanishes_at_origin_for_zero_field(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    assert potential_eval(log_model, p0, 0.6, 0.0).f_phi == pytest.approx(0.0, abs=1e-15)


@given(st.floats(min_value=-0.95, max_value=0.95), st.floats(min_value=-0.9, max_value=1.0),
       st.floats(min_value=-2.0, max_value=2.0))
def test_logarithmic_stationarity_matches_cubic(phi, u, k):
    model = make_model("logarithmic")
    g_phi = order_part(model, u, k, phi).g_phi
    cubic = phi ** 3 + u * phi - k * (1.0 - phi * phi)
    # f_phi = 2a (cubic) / (1 - phi^2) with a = 1
    assert g_phi == pytest.approx(2.0 * cubic / (1.0 - phi * phi), rel=1e-9, abs=1e-12)


def test_quartic_above_critical_is_pure_quartic(quartic_model):
    phi = np.linspace(-2.0, 2.0, 41)
    for p in (0.5, 1.0, 3.0):
        d = potential_eval(quartic_model, p, 1.3, phi)
        f0 = background_f0(quartic_model, p, 1.3).f0
        np.testing.assert_allclose(d.f - f0, phi ** 4 / 4.0, atol=1e-12)


@settings(max_examples=200)
@given(st.sampled_from(["quartic", "logarithmic"]), st.floats(min_value=-0.95, max_value=0.95),
       st.floats(min_value=0.0, max_value=1.5), st.floats(min_value=-2.0, max_value=2.0))
def test_order_part_symmetry(kind, phi, u_abs, h):
    model = make_model(kind)
    u = u_abs if kind == "quartic" else u_abs - 0.9
    assert order_part(model, u, h, phi).g == order_part(model, u, -h, -phi).g


@pytest.mark.parametrize("phi, u, h", [(0.5933, 0.0, 0.0), (0.5933, 0.3, 1.7), (-1.9, 0.7, -0.4), (0.25, 0.25, 0.9)])
def test_quartic_order_part_is_exactly_symmetric(phi, u, h):
    model = make_model("quartic")
    assert order_part(model, u, h, phi).g == order_part(model, u, -h, -phi).g
    assert quartic_G(-phi, u) == -quartic_G(phi, u)
    assert quartic_F(-phi, u) == quartic_F(phi, u)


def test_quartic_f_phi_is_continuous_at_the_wells(kink_model):
    for h in (-0.3, 0.0, 0.7):
        for x in (-1.0, 1.0):
            left = order_part(kink_model, 1.0, h, x * (1.0 - 1e-12)).g_phi
            right = order_part(kink_model, 1.0, h, x * (1.0 + 1e-12)).g_phi
            assert abs(left - right) < 1e-9


def test_logarithmic_domain(log_model):
    with pytest.raises(DomainError):
        potential_eval(log_model, 1.0, 0.6, 1.0)
    with pytest.raises(DomainError):
        order_part(log_model, -0.4, 0.0, np.array([0.0, -1.2]))


def test_logarithmic_blows_up_at_the_boundary(log_model):
    values = [potential_eval(log_model, 1.0, 0.6, x).f for x in (0.9, 0.99, 0.9999, 0.999999)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_volume_split_quartic(kink_model):
    p0 = coexistence_pressure(kink_model, 0.5)
    split = volume_split(kink_model, p0, 0.5, 0.0)
    assert split.nu1 == 0.0
    assert split.nu == pytest.approx(background_f0(kink_model, p0, 0.5).f0_p)
    assert volume_split(kink_model, p0, 0.5, 1.0).nu1 == pytest.approx(-2.0 / 3.0)


def test_volume_split_logarithmic(log_model):
    p0 = coexistence_pressure(log_model, 0.6)
    split = volume_split(log_model, p0, 0.6, -math.sqrt(0.4))
    assert split.nu1 == pytest.approx(2.0 * math.sqrt(0.4))


@pytest.mark.parametrize("kind", ["quartic", "logarithmic"])
def test_volume_split_sums_to_f_p(kind):
    # R theta / p = 8.75 > 2 |phi| keeps every sample admissible
    model = make_model(kind, R=10.0)
    phi = np.linspace(-0.9, 0.9, 19)
    split = volume_split(model, 0.8, 0.7, phi)
    np.testing.assert_array_equal(split.nu0 + split.nu1, split.nu)
    np.testing.assert_allclose(split.nu, potential_eval(model, 0.8, 0.7, phi).f_p, rtol=1e-14)


def test_volume_split_rejects_non_positive_volume():
    model = make_model("logarithmic", R=0.01)
    with pytest.raises(NonPositiveVolume):
        volume_split(model, 5.0, 0.6, 0.9)


def test_density_split_reciprocal_sum(ramp_model):
    phi = np.array([-0.5, 0.2, 0.7])
    rho = density_split(ramp_model, 0.8, 0.7, phi)
    np.testing.assert_allclose(1.0 / rho.rho, 1.0 / rho.rho0 + 1.0 / rho.rho1, rtol=1e-13)
    assert np.isinf(density_split(ramp_model, 0.8, 0.7, 0.0).rho1)


def test_density_split_rejects_the_liquid_side_of_the_default_model(log_model):
    # R theta / p = 0.875 < 2 phi for phi = 0.7
    assert density_split(log_model, 0.8, 0.7, -0.7).rho > 0
    with pytest.raises(NonPositiveVolume):
        density_split(log_model, 0.8, 0.7, 0.7)
    with pytest.raises(NonPositiveVolume):
        volume_split(log_model, 0.8, 0.7, np.array([0.0, 0.5]))


def test_thermo_point_recomputes_volume_and_entropy(quartic_model):
    point = thermo_point(quartic_model, 0.7, 0.8, 0.3)
    d = potential_eval(quartic_model, 0.7, 0.8, 0.3)
    assert point.nu == d.f_p
    assert point.eta == -d.f_theta
    assert point.psi + 0.7 * point.nu == pytest.approx(point.Phi)


@pytest.mark.parametrize("params", [{"a": -1.0}, {"kappa": -0.1}, {"dnu_ref": -1.0}, {"theta_c": 0.0}])
def test_make_model_rejects_invalid_parameters(params):
    with pytest.raises(InvalidParams):
        make_model("logarithmic", **params)


@pytest.mark.parametrize("params, message", [({"a": -1.0}, "a must be > 0"), ({"kappa": -0.1}, "kappa must be >= 0")])
def test_make_model_reports_the_bound(params, message):
    with pytest.raises(InvalidParams) as info:
        make_model("logarithmic", **params)
    assert str(info.value) == message


def test_make_model_rejects_unknown_kind():
    with pytest.raises(InvalidParams):
        make_model("cubic")


def test_make_model_accepts_enum():
    assert make_model(ModelKind.QUARTIC).is_quartic
