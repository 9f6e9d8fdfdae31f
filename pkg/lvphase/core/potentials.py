#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
potentials.py

Ginzburg-Landau free-energy densities f(p, theta, phi) of the liquid-vapour
model and their analytic partial derivatives.

Two potentials are provided:

* quartic:      f = f0 + F(phi; u) + h G(phi; u)
* logarithmic:  f = f0 - a (u + 1) ln(1 - phi^2) - a phi^2 - 2 h phi

together with the auxiliary schedules they are built from: the background
equation of state f0(p, theta), the coexistence pressure p0(theta), the field
h(p, theta) = p - p0(theta) and the order-parameter scale u(theta).

All functions accept scalars or numpy arrays and never mutate their input.
"""

from typing import NamedTuple

import numpy as np

from lvphase.exceptions import DomainError, InvalidParams, NonPositiveVolume
from lvphase.models.data_models import ThermoPoint
from lvphase.models.params import ModelKind, PotentialModel


class Schedule(NamedTuple):
    """A temperature schedule with its first two theta-derivatives."""
    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray


class HField(NamedTuple):
    h: np.ndarray
    h_p: np.ndarray
    h_theta: np.ndarray
    h_thetatheta: np.ndarray


class Background(NamedTuple):
    f0: np.ndarray
    f0_p: np.ndarray
    f0_theta: np.ndarray
    f0_pp: np.ndarray
    f0_ptheta: np.ndarray
    f0_thetatheta: np.ndarray


class Partials(NamedTuple):
    """f and its analytic partials in (p, theta, phi)."""
    f: np.ndarray
    f_p: np.ndarray
    f_theta: np.ndarray
    f_phi: np.ndarray
    f_phiphi: np.ndarray
    f_thetatheta: np.ndarray
    f_thetaphi: np.ndarray
    f_pphi: np.ndarray
    f_ptheta: np.ndarray
    f_pp: np.ndarray


class OrderPart(NamedTuple):
    """phi-dependent part g = f - f0 at fixed (u, h) and its phi-derivatives."""
    g: np.ndarray
    g_phi: np.ndarray
    g_phiphi: np.ndarray


class VolumeSplit(NamedTuple):
    nu0: np.ndarray
    nu1: np.ndarray
    nu: np.ndarray


class DensitySplit(NamedTuple):
    rho0: np.ndarray
    rho1: np.ndarray
    rho: np.ndarray


def _out(value):
    """Return python floats for 0-d results, arrays otherwise."""
    arr = np.asarray(value, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


# ---------------------------------------------------------------------------
# Quartic building blocks F and G
# ---------------------------------------------------------------------------

def quartic_F(x, u):
    """Double well F(x; u) = x^4/4 - u^2 x^2/2 with minima at x = ±u."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return _out(x2 * x2 / 4.0 - u * u * x2 / 2.0)


def quartic_F_x(x, u):
    x = np.asarray(x, dtype=float)
    return _out(x * (x * x - u * u))


def _quartic_G_value(x, u):
    # sgn(x) * G(|x|), odd to the last bit
    ax = np.abs(x)
    inside = ax <= u
    even = np.where(inside, ax * ax * ax / 3.0 - u * u * ax, -(2.0 / 3.0) * u * u * u)
    return np.sign(x) * even


def quartic_G(x, u):
    """
    Odd C^1 piecewise polynomial G(x; u).

    x^3/3 - u^2 x on |x| <= u, constant -(2/3) sgn(x) u^3 outside.
    """
    x = np.asarray(x, dtype=float)
    return _out(_quartic_G_value(x, u))


def quartic_G_x(x, u):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= u
    return _out(np.where(inside, x * x - u * u, 0.0))


def _quartic_parts(x, u):
    """F, G and all x/u partials needed for the second-order partials of f."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    x2 = x * x
    inside = np.abs(x) <= u
    sgn = np.sign(x)
    return {
        "F": x2 * x2 / 4.0 - u * u * x2 / 2.0,
        "F_x": x * (x2 - u * u),
        "F_xx": 3.0 * x2 - u * u,
        "F_u": -u * x2,
        "F_xu": -2.0 * u * x,
        "F_uu": -x2,
        "G": _quartic_G_value(x, u),
        "G_x": np.where(inside, x2 - u * u, 0.0),
        "G_xx": np.where(inside, 2.0 * x, 0.0),
        "G_u": np.where(inside, -2.0 * u * x, -2.0 * sgn * u * u),
        "G_xu": np.where(inside, -2.0 * u, 0.0),
        "G_uu": np.where(inside, -2.0 * x, -4.0 * sgn * u),
    }


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------

def _check_positive(name, value):
    if np.any(np.asarray(value) <= 0) or np.any(~np.isfinite(np.asarray(value, dtype=float))):
        raise InvalidParams(f"{name} must be > 0 and finite, got {value!r}")


def u_derivatives(model: PotentialModel, theta) -> Schedule:
    """
    Order-parameter scale u(theta) with u' and u''.

    Logarithmic: u = sgn(w) |w|^(2 beta), w = (theta/theta_c)^q - 1, which is
    -[1 - (theta/theta_c)^q]^(2 beta) below theta_c and keeps increasing above.
    Quartic: u = (3 dnu(theta) / 4)^(1/3), with zero derivatives for
    theta >= theta_c (one-sided).
    """
    _check_positive("theta", theta)
    pr = model.params
    theta = np.asarray(theta, dtype=float)
    if model.kind is ModelKind.LOGARITHMIC:
        if pr.q <= 0 or pr.beta <= 0:
            raise InvalidParams("u(theta) needs q > 0 and beta > 0")
        t = theta / pr.theta_c
        w = t ** pr.q - 1.0
        w1 = pr.q * t ** (pr.q - 1.0) / pr.theta_c
        w2 = pr.q * (pr.q - 1.0) * t ** (pr.q - 2.0) / pr.theta_c ** 2
        e = 2.0 * pr.beta
        aw = np.abs(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = np.sign(w) * aw ** e
            d_dw = e * aw ** (e - 1.0)
            if e == 1.0:
                d2_dw2 = np.zeros_like(w)
            else:
                d2_dw2 = e * (e - 1.0) * np.sign(w) * aw ** (e - 2.0)
            d1 = d_dw * w1
            d2 = d2_dw2 * w1 * w1 + d_dw * w2
        return Schedule(_out(value), _out(d1), _out(d2))

    if pr.beta_q <= 0:
        raise InvalidParams("quartic schedule needs beta_q > 0")
    s = 1.0 - theta / pr.theta_c
    below = s > 0
    k = (0.75 * pr.dnu_ref) ** (1.0 / 3.0)
    e = pr.beta_q / 3.0
    s_safe = np.where(below, s, 1.0)
    value = np.where(below, k * s_safe ** e, 0.0)
    d1 = np.where(below, -k * e * s_safe ** (e - 1.0) / pr.theta_c, 0.0)
    d2 = np.where(below, k * e * (e - 1.0) * s_safe ** (e - 2.0) / pr.theta_c ** 2, 0.0)
    return Schedule(_out(value), _out(d1), _out(d2))


def u_schedule(model: PotentialModel, theta):
    """u(theta) for either model (see ``u_derivatives``)."""
    return u_derivatives(model, theta).value


def volume_jump_schedule(model: PotentialModel, theta) -> Schedule:
    """Quartic input schedule dnu(theta) = dnu_ref (1 - theta/theta_c)^beta_q below theta_c."""
    _check_positive("theta", theta)
    pr = model.params
    s = 1.0 - np.asarray(theta, dtype=float) / pr.theta_c
    below = s > 0
    s_safe = np.where(below, s, 1.0)
    b = pr.beta_q
    value = np.where(below, pr.dnu_ref * s_safe ** b, 0.0)
    d1 = np.where(below, -pr.dnu_ref * b * s_safe ** (b - 1.0) / pr.theta_c, 0.0)
    d2 = np.where(below, pr.dnu_ref * b * (b - 1.0) * s_safe ** (b - 2.0) / pr.theta_c ** 2, 0.0)
    return Schedule(_out(value), _out(d1), _out(d2))


def coexistence_pressure_derivatives(model: PotentialModel, theta) -> Schedule:
    """p0(theta) = p_c exp(A (1 - theta_c/theta)) with p0' and p0''."""
    _check_positive("theta", theta)
    pr = model.params
    theta = np.asarray(theta, dtype=float)
    p0 = pr.p_c * np.exp(pr.A * (1.0 - pr.theta_c / theta))
    g = pr.A * pr.theta_c / theta ** 2
    d1 = p0 * g
    d2 = p0 * (g * g - 2.0 * pr.A * pr.theta_c / theta ** 3)
    return Schedule(_out(p0), _out(d1), _out(d2))


def coexistence_pressure(model: PotentialModel, theta):
    return coexistence_pressure_derivatives(model, theta).value


def coexistence_slope(model: PotentialModel, theta):
    """p0'(theta)."""
    return coexistence_pressure_derivatives(model, theta).d1


def h_field(model: PotentialModel, p, theta) -> HField:
    """h = p - p0(theta); h_p = 1, h_theta = -p0'(theta)."""
    _check_positive("p", p)
    p0 = coexistence_pressure_derivatives(model, theta)
    h = np.asarray(p, dtype=float) - p0.value
    ones = np.ones_like(h)
    return HField(_out(h), _out(ones), _out(-p0.d1 * ones), _out(-p0.d2 * ones))


def background_f0(model: PotentialModel, p, theta) -> Background:
    """
    Background equation of state.

    f0 = R theta ln(p/p_ref) - c theta (ln(theta/theta_ref) - 1), i.e. an ideal-gas
    background volume R theta / p and heat capacity c. The model's optional
    ``background_term`` g(theta) is added on top.

    Raises:
        InvalidParams: For non-positive p or theta
    """
    _check_positive("p", p)
    _check_positive("theta", theta)
    pr = model.params
    p = np.asarray(p, dtype=float)
    theta = np.asarray(theta, dtype=float)
    lp = np.log(p / pr.p_ref)
    lt = np.log(theta / pr.theta_ref)
    f0 = pr.R * theta * lp - pr.c * theta * (lt - 1.0)
    f0_p = pr.R * theta / p
    f0_theta = pr.R * lp - pr.c * lt
    f0_pp = -pr.R * theta / p ** 2
    f0_ptheta = pr.R / p
    f0_thetatheta = -pr.c / theta
    extra = model.background_term
    if extra is not None:
        f0 = f0 + extra.value(theta)
        f0_theta = f0_theta + extra.dtheta(theta)
        f0_thetatheta = f0_thetatheta + extra.dtheta2(theta)
    shape = np.broadcast(p, theta).shape
    return Background(*(_out(np.broadcast_to(v, shape)) for v in
                        (f0, f0_p, f0_theta, f0_pp, f0_ptheta, f0_thetatheta)))


# ---------------------------------------------------------------------------
# Order part at fixed (u, h)
# ---------------------------------------------------------------------------

def _check_log_domain(phi):
    if np.any(np.abs(phi) >= 1.0) or np.any(~np.isfinite(phi)):
        raise DomainError(f"logarithmic potential needs |phi| < 1, got {phi!r}")


def order_part(model: PotentialModel, u, h, phi) -> OrderPart:
    """
    g(phi) = f - f0 at fixed (u, h), with g_phi and g_phiphi.

    Raises:
        DomainError: If |phi| >= 1 for the logarithmic model
    """
    phi = np.asarray(phi, dtype=float)
    if model.kind is ModelKind.LOGARITHMIC:
        _check_log_domain(phi)
        a = model.params.a
        one_m = 1.0 - phi * phi
        g = -a * (u + 1.0) * np.log(one_m) - a * phi * phi - 2.0 * h * phi
        g_phi = 2.0 * a * (u + 1.0) * phi / one_m - 2.0 * a * phi - 2.0 * h
        g_phiphi = 2.0 * a * (u + 1.0) * (1.0 + phi * phi) / one_m ** 2 - 2.0 * a
        return OrderPart(_out(g), _out(g_phi), _out(g_phiphi))
    q = _quartic_parts(phi, u)
    return OrderPart(_out(q["F"] + h * q["G"]),
                     _out(q["F_x"] + h * q["G_x"]),
                     _out(q["F_xx"] + h * q["G_xx"]))


# ---------------------------------------------------------------------------
# Full potential
# ---------------------------------------------------------------------------

def potential_eval(model: PotentialModel, p, theta, phi) -> Partials:
    """
    Evaluate f and its first and second partials.

    Args:
        model: The potential model
        p: Pressure (> 0)
        theta: Temperature (> 0)
        phi: Order parameter, |phi| < 1 for the logarithmic model

    Returns:
        Partials(f, f_p, f_theta, f_phi, f_phiphi, f_thetatheta, f_thetaphi,
        f_pphi, f_ptheta, f_pp)

    Raises:
        DomainError: |phi| >= 1 for the logarithmic model
        InvalidParams: Non-positive p or theta
    """
    phi = np.asarray(phi, dtype=float)
    bg = background_f0(model, p, theta)
    us = u_derivatives(model, theta)
    hf = h_field(model, p, theta)
    u, u1, u2 = us
    h, h_p, h_t, h_tt = hf

    if model.kind is ModelKind.LOGARITHMIC:
        _check_log_domain(phi)
        a = model.params.a
        one_m = 1.0 - phi * phi
        log_term = np.log(one_m)
        f = bg.f0 - a * (u + 1.0) * log_term - a * phi * phi - 2.0 * h * phi
        f_p = bg.f0_p - 2.0 * h_p * phi
        f_theta = bg.f0_theta - a * u1 * log_term - 2.0 * h_t * phi
        f_phi = 2.0 * a * (u + 1.0) * phi / one_m - 2.0 * a * phi - 2.0 * h
        f_phiphi = 2.0 * a * (u + 1.0) * (1.0 + phi * phi) / one_m ** 2 - 2.0 * a
        f_thetatheta = bg.f0_thetatheta - a * u2 * log_term - 2.0 * h_tt * phi
        f_thetaphi = 2.0 * a * u1 * phi / one_m - 2.0 * h_t
        f_pphi = -2.0 * h_p * np.ones_like(phi)
        f_ptheta = bg.f0_ptheta + 0.0 * phi
        f_pp = bg.f0_pp + 0.0 * phi
    else:
        q = _quartic_parts(phi, u)
        mix_u = q["F_u"] + h * q["G_u"]
        f = bg.f0 + q["F"] + h * q["G"]
        f_p = bg.f0_p + h_p * q["G"]
        f_theta = bg.f0_theta + u1 * mix_u + h_t * q["G"]
        f_phi = q["F_x"] + h * q["G_x"]
        f_phiphi = q["F_xx"] + h * q["G_xx"]
        f_thetatheta = (bg.f0_thetatheta + u2 * mix_u + u1 * u1 * (q["F_uu"] + h * q["G_uu"])
                        + 2.0 * u1 * h_t * q["G_u"] + h_tt * q["G"])
        f_thetaphi = u1 * (q["F_xu"] + h * q["G_xu"]) + h_t * q["G_x"]
        f_pphi = h_p * q["G_x"]
        f_ptheta = bg.f0_ptheta + h_p * u1 * q["G_u"]
        f_pp = bg.f0_pp + 0.0 * phi

    return Partials(*(_out(v) for v in (f, f_p, f_theta, f_phi, f_phiphi, f_thetatheta,
                                         f_thetaphi, f_pphi, f_ptheta, f_pp)))


def volume_split(model: PotentialModel, p, theta, phi) -> VolumeSplit:
    """
    Split nu = f_p into the background nu0 = (f0)_p and the order part nu1.

    nu1 = h_p G (quartic) or -2 h_p phi (logarithmic); nu0 + nu1 equals f_p
    exactly.

    Raises:
        NonPositiveVolume: If nu <= 0 anywhere
    """
    phi = np.asarray(phi, dtype=float)
    bg = background_f0(model, p, theta)
    hf = h_field(model, p, theta)
    if model.kind is ModelKind.LOGARITHMIC:
        _check_log_domain(phi)
        nu1 = -2.0 * hf.h_p * phi
    else:
        u = u_schedule(model, theta)
        nu1 = hf.h_p * np.asarray(quartic_G(phi, u))
    nu = bg.f0_p + nu1
    if np.any(nu <= 0):
        bad = float(np.min(nu))
        raise NonPositiveVolume(bad, float(np.min(p)), float(np.min(theta)))
    return VolumeSplit(_out(bg.f0_p + 0.0 * nu1), _out(nu1), _out(nu))


def density_split(model: PotentialModel, p, theta, phi) -> DensitySplit:
    """rho0 = 1/nu0, rho1 = 1/nu1 (inf where nu1 = 0) and rho = 1/nu, so 1/rho = 1/rho0 + 1/rho1."""
    split = volume_split(model, p, theta, phi)
    nu1 = np.asarray(split.nu1, dtype=float)
    with np.errstate(divide="ignore"):
        rho1 = np.where(nu1 == 0.0, np.inf, 1.0 / np.where(nu1 == 0.0, 1.0, nu1))
    return DensitySplit(_out(1.0 / np.asarray(split.nu0)), _out(rho1), _out(1.0 / np.asarray(split.nu)))


def thermo_point(model: PotentialModel, p: float, theta: float, phi: float) -> ThermoPoint:
    """
    Build a ThermoPoint; nu and eta are always recomputed from f.

    Raises:
        NonPositiveVolume: If nu <= 0
    """
    d = potential_eval(model, p, theta, phi)
    if d.f_p <= 0:
        raise NonPositiveVolume(d.f_p, p, theta)
    return ThermoPoint(p=p, theta=theta, phi=phi, nu=d.f_p, eta=-d.f_theta,
                       f=d.f, Phi=d.f, psi=d.f - p * d.f_p)
