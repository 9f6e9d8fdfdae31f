#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
equilibrium.py

Stationary points of f in phi and the equilibrium thermodynamics derived
from them: isotherms, volume jump, latent heat, spinodals, hysteresis sweeps
and the minima structure of the (u, h/a) plane.

The phi-dependent part of f depends on (p, theta) only through u(theta) and
h(p, theta), so the structural functions take the reduced pair (u, h). The
model-level wrappers map (p, theta) to (u, h) first.

Phase labels: the negative minimum is the vapour (larger volume) for both
potentials.
"""

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.core.cubic import polish_root, real_cubic_roots
from lvphase.core.potentials import (
    background_f0,
    coexistence_pressure,
    coexistence_slope,
    h_field,
    order_part,
    potential_eval,
    thermo_point,
    u_derivatives,
    u_schedule,
)
from lvphase.exceptions import ModelMismatch, NonPositiveVolume
from lvphase.models.data_models import (
    IsothermCurve,
    IsothermSample,
    PhaseEquilibrium,
    PointKind,
    StationaryPoint,
    ThermoPoint,
)
from lvphase.models.params import ModelKind, PotentialModel

TIE_TOL = 1e-12
DOMAIN_EDGE = 1.0 - 1e-12


class SweepPoint(NamedTuple):
    """One sample of a hysteresis sweep."""
    h: float
    phi: float
    branch: str
    direction: str
    metastable: bool


class WellEntropies(NamedTuple):
    """Quartic entropies at phi = +u and phi = -u, computed and in closed form."""
    eta_plus: float
    eta_minus: float
    closed_plus: float
    closed_minus: float


# ---------------------------------------------------------------------------
# Stationary points at fixed (u, h)
# ---------------------------------------------------------------------------

def _classify(index: int, n_roots: int, curvature: float) -> PointKind:
    """
    Kind of the index-th of n_roots sorted roots of the logarithmic f_phi.

    f_phi = 2a P(phi) / (1 - phi^2) with a monic cubic P, P(-1) < 0 < P(1),
    so simple roots alternate minimum, maximum, minimum. The ordering decides
    whenever |f_phiphi| is below the inflection tolerance; a double root
    (two distinct roots) is an inflection.
    """
    tol = DEFAULT_CONFIG["INFLECTION_TOL"]
    if curvature > tol:
        return PointKind.MINIMUM
    if curvature < -tol:
        return PointKind.MAXIMUM
    if n_roots == 1:
        return PointKind.MINIMUM
    if n_roots == 3:
        return PointKind.MAXIMUM if index == 1 else PointKind.MINIMUM
    return PointKind.INFLECTION


def _logarithmic_roots(model: PotentialModel, u: float, h: float) -> List[float]:
    """Roots of phi^3 + (h/a) phi^2 + u phi - h/a = 0 inside the domain, Newton-polished on f_phi."""
    ha = h / model.params.a
    raw = real_cubic_roots(1.0, ha, u, -ha)

    def g_phi(x):
        return float(order_part(model, u, h, x).g_phi)

    def g_phiphi(x):
        return float(order_part(model, u, h, x).g_phiphi)

    roots: List[float] = []
    for x in raw:
        if not -DOMAIN_EDGE < x < DOMAIN_EDGE:
            continue
        x = polish_root(g_phi, g_phiphi, float(x))
        if any(abs(x - r) < 1e-9 for r in roots):
            continue
        roots.append(x)
    return sorted(roots)


def _quartic_points(u: float, h: float) -> List[Tuple[float, PointKind]]:
    if u <= 0:
        return [(0.0, PointKind.MINIMUM)]
    points = [(-u, PointKind.MINIMUM if h < u else PointKind.INFLECTION)]
    if abs(h) < u:
        points.append((-h, PointKind.MAXIMUM))
    points.append((u, PointKind.MINIMUM if h > -u else PointKind.INFLECTION))
    return sorted(points)


def stationary_points(model: PotentialModel, u: float, h: float) -> PhaseEquilibrium:
    """
    Classified stationary points of f at fixed reduced (u, h).

    f_value carries the order part f - f0.

    Args:
        model: The potential model
        u: Order-parameter scale (signed for the logarithmic potential, >= 0 for the quartic)
        h: Field p - p0(theta)

    Returns:
        PhaseEquilibrium with points sorted by phi and absolute minima flagged
    """
    u = float(u)
    h = float(h)
    if model.kind is ModelKind.LOGARITHMIC:
        roots = _logarithmic_roots(model, u, h)
        pairs = []
        for i, x in enumerate(roots):
            curvature = float(order_part(model, u, h, x).g_phiphi)
            pairs.append((x, _classify(i, len(roots), curvature)))
    else:
        pairs = _quartic_points(u, h)

    values = [float(order_part(model, u, h, x).g) for x, _ in pairs]
    minima_values = [v for (_, kind), v in zip(pairs, values) if kind is PointKind.MINIMUM]
    best = min(minima_values) if minima_values else None

    points = []
    for (x, kind), value in zip(pairs, values):
        points.append(StationaryPoint(
            phi=x,
            kind=kind,
            f_value=value,
            is_absolute_min=kind is PointKind.MINIMUM and value - best <= TIE_TOL,
            residual=abs(float(order_part(model, u, h, x).g_phi)),
        ))
    return PhaseEquilibrium(u=u, h=h, points=points)


def find_stationary_points(model: PotentialModel, p: float, theta: float) -> PhaseEquilibrium:
    """
    Classified stationary points of f(p, theta, .).

    Same as ``stationary_points`` with (u, h) taken from (p, theta); f_value
    carries the full f.

    Raises:
        InvalidParams: For non-positive p or theta
    """
    u = float(u_schedule(model, theta))
    h = float(h_field(model, p, theta).h)
    reduced = stationary_points(model, u, h)
    f0 = float(background_f0(model, p, theta).f0)
    points = [pt.model_copy(update={"f_value": pt.f_value + f0}) for pt in reduced.points]
    return PhaseEquilibrium(p=p, theta=theta, u=u, h=h, points=points)


# ---------------------------------------------------------------------------
# Equilibrium thermodynamics
# ---------------------------------------------------------------------------

def equilibrium_state(model: PotentialModel, p: float, theta: float) -> List[ThermoPoint]:
    """
    (nu_bar, eta_bar, Phi_bar) at every local minimum, sorted by phi.

    Raises:
        NonPositiveVolume: If a phase has nu <= 0
    """
    eq = find_stationary_points(model, p, theta)
    return [thermo_point(model, p, theta, pt.phi) for pt in eq.minima]


def coexistence_phases(model: PotentialModel, theta: float) -> Optional[Tuple[ThermoPoint, ThermoPoint]]:
    """(vapour, liquid) at p = p0(theta), or None when there is a single minimum."""
    p0 = float(coexistence_pressure(model, theta))
    phases = equilibrium_state(model, p0, theta)
    if len(phases) < 2:
        return None
    return phases[0], phases[-1]


def volume_jump(model: PotentialModel, theta: float) -> float:
    """nu_vapour - nu_liquid on the coexistence line; 0 when theta >= theta_c."""
    pair = coexistence_phases(model, theta)
    if pair is None:
        return 0.0
    vapour, liquid = pair
    return vapour.nu - liquid.nu


def volume_jump_closed_form(model: PotentialModel, theta: float) -> float:
    """(4/3) h_p u^3 (quartic) or 4 h_p |u|^(1/2) (logarithmic), 0 above theta_c."""
    u = float(u_schedule(model, theta))
    if model.kind is ModelKind.LOGARITHMIC:
        return 4.0 * np.sqrt(-u) if u < 0 else 0.0
    return 4.0 * u ** 3 / 3.0


def latent_heat_and_clapeyron(model: PotentialModel, theta: float) -> Tuple[float, float]:
    """
    Latent heat L = theta (eta_vapour - eta_liquid) and the Clausius-Clapeyron residual.

    Returns:
        (L, |L - theta p0'(theta) dnu| / max(|L|, eps)); (0, 0) without coexistence
    """
    pair = coexistence_phases(model, theta)
    if pair is None:
        return 0.0, 0.0
    vapour, liquid = pair
    latent = theta * (vapour.eta - liquid.eta)
    clapeyron = theta * float(coexistence_slope(model, theta)) * (vapour.nu - liquid.nu)
    residual = abs(latent - clapeyron) / max(abs(latent), np.finfo(float).tiny)
    return latent, residual


def coexistence_entropies(model: PotentialModel, theta: float) -> Tuple[float, float]:
    """(eta_vapour, eta_liquid) at p0(theta); equal when a single minimum remains."""
    pair = coexistence_phases(model, theta)
    if pair is None:
        p0 = float(coexistence_pressure(model, theta))
        eta = equilibrium_state(model, p0, theta)[0].eta
        return eta, eta
    return pair[0].eta, pair[1].eta


def well_entropies(model: PotentialModel, p: float, theta: float) -> WellEntropies:
    """
    Quartic entropies -f_theta at phi = +u and -u, with the closed form
    eta0 + u_theta u^3 ± (2/3) h_theta u^3 ± 2 h u^2 u_theta, eta0 = -(f0)_theta.

    Raises:
        ModelMismatch: For the logarithmic model
    """
    if model.kind is not ModelKind.QUARTIC:
        raise ModelMismatch("well entropies are defined for the quartic potential only")
    u, u1, _ = u_derivatives(model, theta)
    hf = h_field(model, p, theta)
    eta0 = -float(background_f0(model, p, theta).f0_theta)
    eta_plus = -float(potential_eval(model, p, theta, u).f_theta)
    eta_minus = -float(potential_eval(model, p, theta, -u).f_theta)
    common = eta0 + u1 * u ** 3
    odd = (2.0 / 3.0) * hf.h_theta * u ** 3 + 2.0 * hf.h * u * u * u1
    return WellEntropies(eta_plus, eta_minus, float(common + odd), float(common - odd))


def _branch_label(model: PotentialModel, theta: float, phi: float) -> str:
    if theta >= model.params.theta_c:
        return "fluid"
    return "liquid" if phi >= 0 else "vapour"


def isotherm(model: PotentialModel, theta: float, p_range: Tuple[float, float],
             n_samples: int) -> IsothermCurve:
    """
    Stable-branch isotherm nu(p) at fixed theta.

    Below theta_c, and when p0(theta) lies in p_range, both coexisting
    volumes are added at p0 as "plateau" samples and reported as the plateau.

    Raises:
        ValueError: For an invalid range or n_samples < 2
        NonPositiveVolume: With the offending p
    """
    p_min, p_max = p_range
    if n_samples < 2 or not 0 < p_min < p_max:
        raise ValueError("isotherm needs 0 < p_min < p_max and n_samples >= 2")

    samples: List[IsothermSample] = []
    for p in np.linspace(p_min, p_max, n_samples):
        p = float(p)
        eq = find_stationary_points(model, p, theta)
        stable = eq.stable
        nu = float(potential_eval(model, p, theta, stable.phi).f_p)
        if nu <= 0:
            raise NonPositiveVolume(nu, p, theta)
        samples.append(IsothermSample(p=p, nu=nu, phi=stable.phi,
                                      branch=_branch_label(model, theta, stable.phi)))

    plateau = None
    p0 = float(coexistence_pressure(model, theta))
    if theta < model.params.theta_c and p_min <= p0 <= p_max:
        pair = coexistence_phases(model, theta)
        if pair is not None:
            vapour, liquid = pair
            plateau = (p0, liquid.nu, vapour.nu)
            extra = [IsothermSample(p=p0, nu=liquid.nu, phi=liquid.phi, branch="plateau"),
                     IsothermSample(p=p0, nu=vapour.nu, phi=vapour.phi, branch="plateau")]
            samples = sorted(samples + extra, key=lambda s: (s.p, -s.nu))

    logger.debug(f"Isotherm theta={theta}: {len(samples)} samples, plateau={plateau is not None}")
    return IsothermCurve(theta=theta, samples=samples, plateau=plateau)


def _stable_volume(model: PotentialModel, p: float, theta: float) -> float:
    eq = find_stationary_points(model, p, theta)
    return float(potential_eval(model, p, theta, eq.stable.phi).f_p)


def admissible_pressure_limit(model: PotentialModel, theta: float,
                              p_range: Tuple[float, float], rel_tol: float = 1e-9) -> float:
    """
    Largest pressure in p_range whose stable state still has nu > 0.

    The stable volume is non-increasing in p (the Gibbs envelope is concave),
    so the admissible pressures form an interval starting at p_min.

    Returns:
        p_max when the whole range is admissible, otherwise the bisected edge

    Raises:
        NonPositiveVolume: If already p_min is inadmissible
    """
    p_min, p_max = p_range
    if _stable_volume(model, p_max, theta) > 0:
        return p_max
    nu_min = _stable_volume(model, p_min, theta)
    if nu_min <= 0:
        raise NonPositiveVolume(nu_min, p_min, theta)
    lo, hi = p_min, p_max
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if _stable_volume(model, mid, theta) > 0:
            lo = mid
        else:
            hi = mid
    logger.debug(f"Admissible pressures at theta={theta} end near p={lo:.12g}")
    return lo


# ---------------------------------------------------------------------------
# Metastability
# ---------------------------------------------------------------------------

def count_minima(model: PotentialModel, u: float, h: float) -> int:
    return len(stationary_points(model, u, h).minima)


def spinodal_field(model: PotentialModel, u: float) -> Tuple[float, ...]:
    """
    Fields (-h_bar, +h_bar) at which the metastable minimum disappears.

    Logarithmic: bisection in h/a on the number of minima, bracket [0, 1 + |u|].
    Quartic: h_bar = u. Empty when there is no metastability.
    """
    u = float(u)
    if model.kind is ModelKind.QUARTIC:
        return (-u, u) if u > 0 else ()
    if u >= 0:
        return ()
    a = model.params.a
    lo, hi = 0.0, 1.0 + abs(u)
    tol = DEFAULT_CONFIG["SPINODAL_TOL"]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if count_minima(model, u, mid * a) >= 2:
            lo = mid
        else:
            hi = mid
    h_bar = 0.5 * (lo + hi) * a
    logger.debug(f"Spinodal u={u}: h_bar/a={h_bar / a:.12g}")
    return (-h_bar, h_bar)


def spinodal(model: PotentialModel, theta: float) -> Tuple[float, ...]:
    """Spinodal fields (h_minus, h_plus) at temperature theta; empty above theta_c."""
    return spinodal_field(model, float(u_schedule(model, theta)))


def well_label(model: PotentialModel, u: float, phi: float) -> str:
    """Phase label of a minimum at reduced u; "fluid" where no second well exists."""
    two_wells = u > 0 if model.kind is ModelKind.QUARTIC else u < 0
    if not two_wells:
        return "fluid"
    return "liquid" if phi >= 0 else "vapour"


def hysteresis_sweep_reduced(model: PotentialModel, u: float, h_path: Sequence[float]) -> List[SweepPoint]:
    """
    Follow a local minimum along a path of h values.

    The tracked minimum is the one nearest to the previous phi; the branch
    jumps only when the tracked minimum has vanished. The first point starts
    on the absolute minimum.

    Each point names the tracked well ("liquid", "vapour", or "fluid" while
    only one minimum can exist) and the sweep direction.
    """
    result: List[SweepPoint] = []
    previous_phi = None
    previous_h = None
    direction = "up"
    for h in h_path:
        h = float(h)
        eq = stationary_points(model, u, h)
        minima = eq.minima
        if previous_phi is None:
            tracked = eq.stable
        else:
            tracked = min(minima, key=lambda pt: abs(pt.phi - previous_phi))
        if previous_h is not None and h != previous_h:
            direction = "up" if h > previous_h else "down"
        result.append(SweepPoint(h=h, phi=tracked.phi, branch=well_label(model, u, tracked.phi),
                                 direction=direction,
                                 metastable=not tracked.is_absolute_min))
        previous_phi = tracked.phi
        previous_h = h
    return result


def hysteresis_sweep(model: PotentialModel, theta: float, h_path: Sequence[float]) -> List[SweepPoint]:
    """Hysteresis sweep at temperature theta (u = u(theta))."""
    return hysteresis_sweep_reduced(model, float(u_schedule(model, theta)), h_path)


def minima_structure_map(model: PotentialModel, u_range: Tuple[float, float],
                         h_range: Tuple[float, float], grid: Tuple[int, int]):
    """
    Count local minima over a (u, h/a) grid.

    Returns:
        (u_axis, h_over_a_axis, counts) with counts[i, j] for (u_axis[i], h_over_a_axis[j])
    """
    n_u, n_h = grid
    if n_u < 2 or n_h < 2:
        raise ValueError("minima map needs a grid of at least 2 x 2")
    u_axis = np.linspace(u_range[0], u_range[1], n_u)
    h_axis = np.linspace(h_range[0], h_range[1], n_h)
    a = model.params.a
    counts = np.zeros((n_u, n_h), dtype=int)
    for i, u in enumerate(u_axis):
        for j, h in enumerate(h_axis):
            counts[i, j] = count_minima(model, float(u), float(h) * a)
    return u_axis, h_axis, counts


def state_equation_residual(model: PotentialModel, p: float, theta: float, nu: float) -> float:
    """
    Residual of the logarithmic state equation in X = (f0)_p - nu:
    X^3 + (2 h h_p / a) X^2 + 4 u h_p^2 X - 8 h h_p^3 / a.

    Raises:
        ModelMismatch: For the quartic model
    """
    if model.kind is not ModelKind.LOGARITHMIC:
        raise ModelMismatch("state equation residual is defined for the logarithmic potential only")
    a = model.params.a
    u = float(u_schedule(model, theta))
    hf = h_field(model, p, theta)
    h, hp = float(hf.h), float(hf.h_p)
    x = float(background_f0(model, p, theta).f0_p) - nu
    return x ** 3 + (2.0 * h * hp / a) * x ** 2 + 4.0 * u * hp ** 2 * x - 8.0 * h * hp ** 3 / a
