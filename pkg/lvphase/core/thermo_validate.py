#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
thermo_validate.py

Machine-checkable audits of the thermodynamic structure:

- analytic partials against finite differences
- envelope (Gibbs) relations at equilibria
- Clausius-Clapeyron along the coexistence line
- dissipation and balance identities along trajectories
- entropy regularity near the critical temperature
- cubic-solver minima against dense-grid minimisation
- equivalence with the classical polynomial potential
- two-sided estimates of the absolute minimum and the spinodal bracket

Audits never raise on a failed check; failures are reported in AuditReport.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.core.dynamics import relax_homogeneous
from lvphase.core.equilibrium import (
    coexistence_entropies,
    find_stationary_points,
    latent_heat_and_clapeyron,
    spinodal_field,
    stationary_points,
)
from lvphase.core.potentials import (
    Partials,
    background_f0,
    coexistence_pressure,
    order_part,
    potential_eval,
    thermo_point,
    u_schedule,
)
from lvphase.models.data_models import AuditReport, PointKind, PressureSchedule, Trajectory
from lvphase.models.params import ModelKind, PotentialModel

# (analytic partial, differentiated quantity, variable index into (p, theta, phi))
DERIVATIVE_TABLE = (
    ("f_p", "f", 0),
    ("f_theta", "f", 1),
    ("f_phi", "f", 2),
    ("f_pp", "f_p", 0),
    ("f_ptheta", "f_p", 1),
    ("f_pphi", "f_p", 2),
    ("f_thetatheta", "f_theta", 1),
    ("f_thetaphi", "f_theta", 2),
    ("f_phiphi", "f_phi", 2),
)


def _rel_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1.0, abs(analytic))


def _fd_step(x: float) -> float:
    return DEFAULT_CONFIG["AUDIT_FD_STEP"] * (abs(x) + 1.0)


def _differences(func: Callable[[float], float], x: float, one_sided: bool) -> List[float]:
    """Central difference, plus second-order one-sided differences in both directions."""
    h = _fd_step(x)
    estimates = [(func(x + h) - func(x - h)) / (2.0 * h)]
    if one_sided:
        f0 = func(x)
        estimates.append((-3.0 * f0 + 4.0 * func(x + h) - func(x + 2.0 * h)) / (2.0 * h))
        estimates.append((3.0 * f0 - 4.0 * func(x - h) + func(x - 2.0 * h)) / (2.0 * h))
    return estimates


def as_logarithmic(model: PotentialModel) -> PotentialModel:
    """The logarithmic model sharing this model's parameters."""
    if model.kind is ModelKind.LOGARITHMIC:
        return model
    return model.model_copy(update={"kind": ModelKind.LOGARITHMIC})


# ---------------------------------------------------------------------------
# Derivative consistency
# ---------------------------------------------------------------------------

def _sample_points(model: PotentialModel, n_samples: int, rng: np.random.Generator):
    theta_c = model.params.theta_c
    points = []
    for i in range(n_samples):
        if rng.random() < 0.5:
            theta = theta_c * rng.uniform(0.2, 0.9)
        else:
            theta = theta_c * rng.uniform(1.1, 2.0)
        p = model.params.p_c * rng.uniform(0.2, 2.0)
        if model.kind is ModelKind.LOGARITHMIC:
            phi = rng.uniform(-0.9, 0.9)
            kink = False
        else:
            u = float(u_schedule(model, theta))
            scale = max(u, 0.1)
            if u > 0 and i % 10 == 0:
                phi = u if rng.random() < 0.5 else -u
                kink = True
            else:
                phi = rng.uniform(-2.0 * scale, 2.0 * scale)
                kink = u > 0 and abs(abs(phi) - u) < 1e-4
        points.append((p, theta, phi, kink))
    return points


def check_derivatives(model: PotentialModel, n_samples: int = DEFAULT_CONFIG["AUDIT_SAMPLES"],
                      seed: int = DEFAULT_CONFIG["AUDIT_SEED"]) -> AuditReport:
    """
    Compare every analytic partial of f with finite differences at random points.

    Points at the quartic kinks |phi| = u use one-sided differences (best of
    both directions) and are held to the kink tolerance. The identity
    psi + p nu = Phi is checked on the coexistence line as well.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    tol = DEFAULT_CONFIG["AUDIT_DERIVATIVE_TOL"]
    kink_tol = DEFAULT_CONFIG["AUDIT_KINK_TOL"]
    rng = np.random.default_rng(seed)

    max_abs = max_rel = kink_rel = 0.0
    offending = None
    n_kink = 0
    for p, theta, phi, kink in _sample_points(model, n_samples, rng):
        n_kink += int(kink)
        analytic: Partials = potential_eval(model, p, theta, phi)
        x = [p, theta, phi]
        for name, quantity, index in DERIVATIVE_TABLE:

            def func(value, quantity=quantity, index=index):
                args = list(x)
                args[index] = value
                return float(getattr(potential_eval(model, *args), quantity))

            target = float(getattr(analytic, name))
            estimates = _differences(func, x[index], one_sided=kink)
            errors = [_rel_error(target, est) for est in estimates]
            best = int(np.argmin(errors))
            rel = errors[best]
            if kink:
                kink_rel = max(kink_rel, rel)
                failed = rel > kink_tol
            else:
                if rel > max_rel:
                    max_rel = rel
                    max_abs = abs(target - estimates[best])
                failed = rel > tol
            if failed and offending is None:
                offending = {"p": p, "theta": theta, "phi": phi, "partial": name, "rel_error": rel}

    # psi + p nu = Phi at the stable phase on the coexistence line
    identity_error = 0.0
    for theta in model.params.theta_c * np.linspace(0.3, 0.9, 5):
        p0 = float(coexistence_pressure(model, theta))
        stable = find_stationary_points(model, p0, float(theta)).stable
        point = thermo_point(model, p0, float(theta), stable.phi)
        identity_error = max(identity_error, _rel_error(point.Phi, point.psi + p0 * point.nu))
    if identity_error > tol and offending is None:
        offending = {"identity": "psi + p nu = Phi", "rel_error": identity_error}

    passed = offending is None
    report = AuditReport(
        check="derivatives",
        grid=f"{n_samples} random points, seed={seed}",
        max_abs_error=max_abs,
        max_rel_error=max(max_rel, identity_error),
        tolerance=tol,
        passed=passed,
        offending_point=offending,
        n_checked=n_samples,
        notes=f"{model.kind.value}; {n_kink} kink points, max rel error {kink_rel:.3e} (tol {kink_tol:g})",
    )
    logger.info(f"Audit derivatives ({model.kind.value}): passed={passed}, max_rel_error={report.max_rel_error:.3e}")
    return report


# ---------------------------------------------------------------------------
# Envelope relations
# ---------------------------------------------------------------------------

def _tracked_phi(model: PotentialModel, p: float, theta: float, phi_ref: float) -> Optional[float]:
    minima = find_stationary_points(model, p, theta).minima
    if not minima:
        return None
    nearest = min(minima, key=lambda pt: abs(pt.phi - phi_ref))
    return nearest.phi if abs(nearest.phi - phi_ref) <= 1e-3 else None


def check_gibbs_envelope(model: PotentialModel, theta_grid: Optional[Sequence[float]] = None,
                         p_grid: Optional[Sequence[float]] = None,
                         p_factors: Sequence[float] = (0.5, 0.9, 1.0, 1.1, 2.0)) -> AuditReport:
    """
    Check dPhi_bar/dp = f_p and dPhi_bar/dtheta = f_theta for every local minimum.

    Phi_bar is differentiated numerically with the minimum re-solved at each
    perturbed point and tracked per branch. A point is skipped when the
    tracked minimum disappears under perturbation.

    Args:
        theta_grid: Temperatures (default: a grid below and above theta_c)
        p_grid: Pressures; if omitted, p0(theta) times p_factors is used
    """
    theta_c = model.params.theta_c
    if theta_grid is None:
        theta_grid = [theta_c * s for s in (0.6, 0.7, 0.8, 0.9, 1.2, 1.5)]
    tol = DEFAULT_CONFIG["AUDIT_ENVELOPE_TOL"]

    max_abs = max_rel = 0.0
    offending = None
    skipped: List[Dict[str, float]] = []
    n_checked = 0
    for theta in theta_grid:
        theta = float(theta)
        pressures = p_grid if p_grid is not None else [
            float(coexistence_pressure(model, theta)) * k for k in p_factors]
        for p in pressures:
            p = float(p)
            for minimum in find_stationary_points(model, p, theta).minima:
                phi = minimum.phi
                analytic = potential_eval(model, p, theta, phi)
                checks = []
                ok = True
                for index, target in ((0, float(analytic.f_p)), (1, float(analytic.f_theta))):
                    x = [p, theta]
                    h = _fd_step(x[index])
                    values = []
                    for sign in (1.0, -1.0):
                        args = list(x)
                        args[index] += sign * h
                        tracked = _tracked_phi(model, args[0], args[1], phi)
                        if tracked is None:
                            ok = False
                            break
                        values.append(float(potential_eval(model, args[0], args[1], tracked).f))
                    if not ok:
                        break
                    checks.append((target, (values[0] - values[1]) / (2.0 * h)))
                if not ok:
                    skipped.append({"p": p, "theta": theta, "phi": phi})
                    continue
                n_checked += 1
                for target, numeric in checks:
                    rel = _rel_error(target, numeric)
                    if rel > max_rel:
                        max_rel = rel
                        max_abs = abs(target - numeric)
                    if rel > tol and offending is None:
                        offending = {"p": p, "theta": theta, "phi": phi, "rel_error": rel}

    report = AuditReport(
        check="gibbs_envelope",
        grid=f"{len(theta_grid)} temperatures x {len(p_grid) if p_grid is not None else len(p_factors)} pressures",
        max_abs_error=max_abs,
        max_rel_error=max_rel,
        tolerance=tol,
        passed=offending is None,
        offending_point=offending,
        n_checked=n_checked,
        n_skipped=len(skipped),
        skipped_points=skipped,
        notes=model.kind.value,
    )
    logger.info(f"Audit gibbs_envelope: passed={report.passed}, checked={n_checked}, skipped={len(skipped)}")
    return report


# ---------------------------------------------------------------------------
# Coexistence line
# ---------------------------------------------------------------------------

def check_clausius_clapeyron(model: PotentialModel, theta_grid: Optional[Sequence[float]] = None,
                             tol: float = 1e-8) -> AuditReport:
    """Relative residual |L - theta p0' dnu| / |L| on a temperature grid below theta_c."""
    if theta_grid is None:
        theta_grid = model.params.theta_c * np.linspace(0.5, 0.95, 10)
    worst = 0.0
    offending = None
    for theta in theta_grid:
        latent, residual = latent_heat_and_clapeyron(model, float(theta))
        if residual > worst:
            worst = residual
        if residual > tol and offending is None:
            offending = {"theta": float(theta), "latent_heat": latent, "rel_error": residual}
    return AuditReport(check="clausius_clapeyron", grid=f"{len(theta_grid)} temperatures",
                       max_abs_error=worst, max_rel_error=worst, tolerance=tol,
                       passed=offending is None, offending_point=offending,
                       n_checked=len(theta_grid), notes=model.kind.value)


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------

def check_dissipation(trajectory: Trajectory,
                      factor: float = DEFAULT_CONFIG["AUDIT_BALANCE_FACTOR"]) -> AuditReport:
    """
    Dissipation tau phi'^2 >= 0 at every sample and the balance residual
    within factor times the integrator tolerance.
    """
    tol = trajectory.balance_tolerance(factor)
    dissipation = np.asarray(trajectory.dissipation, dtype=float)
    balance = np.abs(np.asarray(trajectory.balance_residual, dtype=float))
    offending = None
    negative = np.flatnonzero(dissipation < 0)
    if negative.size:
        i = int(negative[0])
        offending = {"index": i, "t": float(trajectory.t[i]), "dissipation": float(dissipation[i])}
    else:
        over = np.flatnonzero(balance > tol)
        if over.size:
            i = int(over[0])
            offending = {"index": i, "t": float(trajectory.t[i]), "balance_residual": float(balance[i])}
    max_abs = float(np.max(balance)) if balance.size else 0.0
    return AuditReport(
        check="dissipation",
        grid=f"{trajectory.mode} trajectory, {len(trajectory.t)} samples",
        max_abs_error=max_abs,
        max_rel_error=max_abs / tol if tol > 0 else 0.0,
        tolerance=tol,
        passed=offending is None,
        offending_point=offending,
        n_checked=len(trajectory.t),
        notes=f"min dissipation {float(np.min(dissipation)):.3e}",
    )


# ---------------------------------------------------------------------------
# Entropy regularity
# ---------------------------------------------------------------------------

def dyadic_grid(theta_c: float, k_max: int = 20) -> np.ndarray:
    """theta_c (1 - 2^-k), k = 1..k_max."""
    return theta_c * (1.0 - 2.0 ** -np.arange(1, k_max + 1, dtype=float))


def expected_entropy_exponent(model: PotentialModel) -> Optional[float]:
    """Divergence exponent of eta_bar - eta0 in (theta_c - theta), None when bounded."""
    if model.kind is ModelKind.LOGARITHMIC:
        return None
    exponent = 4.0 * model.params.beta_q / 3.0 - 1.0
    return exponent if exponent < 0 else None


def entropy_regularity_scan(model: PotentialModel, theta_grid: Optional[Sequence[float]] = None,
                            expected_exponent: Optional[float] = None) -> Tuple[AuditReport, float]:
    """
    Evaluate eta_bar on the coexistence line approaching theta_c and fit the
    exponent of |eta_bar - eta0| against (theta_c - theta).

    With an expected exponent (quartic models with divergent entropy by
    default) the fit must match it; otherwise eta_bar must stay bounded
    (fitted exponent above -tol).

    Returns:
        (AuditReport, fitted exponent)
    """
    theta_c = model.params.theta_c
    grid = np.asarray(theta_grid if theta_grid is not None else dyadic_grid(theta_c), dtype=float)
    if expected_exponent is None:
        expected_exponent = expected_entropy_exponent(model)
    tol = DEFAULT_CONFIG["AUDIT_EXPONENT_TOL"]
    n_fit = min(DEFAULT_CONFIG["AUDIT_FIT_POINTS"], grid.size)

    deviations = []
    sup_eta = 0.0
    for theta in grid:
        eta_vapour, eta_liquid = coexistence_entropies(model, float(theta))
        p0 = float(coexistence_pressure(model, theta))
        eta0 = -float(background_f0(model, p0, theta).f0_theta)
        deviations.append(max(abs(eta_vapour - eta0), abs(eta_liquid - eta0)))
        sup_eta = max(sup_eta, abs(eta_vapour), abs(eta_liquid))
    deviations = np.asarray(deviations)

    x = np.log(theta_c - grid[-n_fit:])
    y = np.log(np.maximum(deviations[-n_fit:], np.finfo(float).tiny))
    exponent = float(np.polyfit(x, y, 1)[0])

    if expected_exponent is not None:
        error = abs(exponent - expected_exponent)
        passed = error <= tol
        notes = f"exponent {exponent:.4f}, expected {expected_exponent:.4f}"
    else:
        error = max(0.0, -exponent)
        passed = error <= tol and np.isfinite(sup_eta)
        notes = f"exponent {exponent:.4f}, bounded, sup|eta| {sup_eta:.6g}"

    report = AuditReport(
        check="entropy_regularity",
        grid=f"{grid.size} temperatures, fit on last {n_fit}",
        max_abs_error=error,
        max_rel_error=error,
        tolerance=tol,
        passed=passed,
        offending_point=None if passed else {"exponent": exponent},
        n_checked=int(grid.size),
        notes=f"{model.kind.value}; {notes}",
    )
    logger.info(f"Audit entropy_regularity ({model.kind.value}): {notes}, passed={passed}")
    return report, exponent


# ---------------------------------------------------------------------------
# Minima structure
# ---------------------------------------------------------------------------

def grid_minima(model: PotentialModel, u: float, h: float, step: float = 1e-5) -> List[float]:
    """Local minima of the logarithmic order part by dense-grid search refined with brentq."""
    phi = np.arange(-1.0 + step, 1.0 - step / 2, step)
    part = order_part(model, u, h, phi)
    g = np.asarray(part.g)
    inner = np.flatnonzero((g[1:-1] < g[:-2]) & (g[1:-1] <= g[2:])) + 1
    minima = []
    for i in inner:
        lo, hi = phi[i - 1], phi[i + 1]

        def g_phi(x):
            return float(order_part(model, u, h, x).g_phi)

        if g_phi(lo) < 0 < g_phi(hi):
            minima.append(brentq(g_phi, lo, hi, xtol=1e-14))
        else:
            minima.append(float(phi[i]))
    return minima


def check_minima_oracle(model: PotentialModel, n_pairs: int = 500,
                        seed: int = DEFAULT_CONFIG["AUDIT_SEED"], tol: float = 1e-6) -> AuditReport:
    """
    Closed-form cubic minima against dense-grid minimisation for random (u, h/a).

    Every pair is compared; a differing number of minima fails the audit.
    """
    model = as_logarithmic(model)
    a = model.params.a
    rng = np.random.default_rng(seed)
    worst = 0.0
    offending = None
    for _ in range(n_pairs):
        u = float(rng.uniform(-0.95, 1.0))
        h = float(rng.uniform(-2.0, 2.0)) * a
        solver = [pt.phi for pt in stationary_points(model, u, h).minima]
        oracle = grid_minima(model, u, h)
        if len(oracle) != len(solver):
            offending = offending or {"u": u, "h_over_a": h / a, "solver": len(solver), "grid": len(oracle)}
            worst = max(worst, 1.0)
            continue
        for x, y in zip(sorted(solver), sorted(oracle)):
            err = abs(x - y)
            worst = max(worst, err)
            if err > tol and offending is None:
                offending = {"u": u, "h_over_a": h / a, "phi": x, "error": err}
    return AuditReport(check="minima_oracle", grid=f"{n_pairs} random (u, h/a) pairs, seed={seed}",
                       max_abs_error=worst, max_rel_error=worst, tolerance=tol,
                       passed=offending is None, offending_point=offending,
                       n_checked=n_pairs, notes="grid step 1e-5")


def check_polynomial_equivalence(model: PotentialModel, n_pairs: int = 200,
                                 seed: int = DEFAULT_CONFIG["AUDIT_SEED"], tol: float = 1e-8) -> AuditReport:
    """
    Stationary points of the logarithmic potential against those of
    phi^4/4 + u phi^2/2 - (h/a)(phi - phi^3/3) inside (-1, 1).

    Both share the cubic phi^3 + (h/a) phi^2 + u phi - h/a = 0; the polynomial
    roots come from numpy's companion-matrix solver and the kinds from the
    sign of its second derivative.
    """
    model = as_logarithmic(model)
    a = model.params.a
    rng = np.random.default_rng(seed)
    worst = 0.0
    offending = None
    skipped = []
    for _ in range(n_pairs):
        u = float(rng.uniform(-0.95, 1.0))
        k = float(rng.uniform(-2.0, 2.0))
        roots = np.roots([1.0, k, u, -k])
        real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9 and abs(r.real) < 1.0)
        curvature = [3.0 * r * r + u + 2.0 * k * r for r in real]
        if any(abs(c) < 1e-3 for c in curvature):
            skipped.append({"u": u, "h_over_a": k})
            continue
        points = stationary_points(model, u, k * a).points
        if len(points) != len(real):
            offending = offending or {"u": u, "h_over_a": k, "log": len(points), "polynomial": len(real)}
            worst = max(worst, 1.0)
            continue
        for pt, r, c in zip(points, real, curvature):
            err = abs(pt.phi - r)
            worst = max(worst, err)
            kind = PointKind.MINIMUM if c > 0 else PointKind.MAXIMUM
            if (err > tol or kind is not pt.kind) and offending is None:
                offending = {"u": u, "h_over_a": k, "phi": pt.phi, "error": err, "kind": pt.kind.value}
    return AuditReport(check="polynomial_equivalence", grid=f"{n_pairs} random (u, h/a) pairs, seed={seed}",
                       max_abs_error=worst, max_rel_error=worst, tolerance=tol,
                       passed=offending is None, offending_point=offending,
                       n_checked=n_pairs - len(skipped), n_skipped=len(skipped),
                       skipped_points=skipped)


def check_minimum_estimates(model: PotentialModel, grid: Tuple[int, int] = (100, 100)) -> AuditReport:
    """
    Two-sided estimate |u|(1-|u|)/(|h|/a+|u|) <= 1 - phi^2 <= (1-|u|)/(|h|/a+1),
    the decoupling bound 1 - phi^2 < (a/|h|)(1 - |u|) for the absolute minimum,
    and the spinodal bracket 2|u/3|^(3/2) < h_bar/a < |u| for u = -0.1, ..., -0.9.
    """
    model = as_logarithmic(model)
    a = model.params.a
    n_u, n_h = grid
    u_axis = np.linspace(-1.0, 0.0, n_u + 2)[1:-1]
    h_axis = np.linspace(-2.0, 2.0, n_h)
    h_axis = h_axis[h_axis != 0.0]
    slack = 1e-12
    violations = 0
    worst = 0.0
    offending = None
    for u in u_axis:
        for k in h_axis:
            phi = stationary_points(model, float(u), float(k) * a).stable.phi
            s = 1.0 - phi * phi
            au, ak = abs(u), abs(k)
            lower = au * (1.0 - au) / (ak + au)
            upper = (1.0 - au) / (ak + 1.0)
            decoupling = (1.0 - au) / ak
            excess = max(lower - s, s - upper, s - decoupling)
            worst = max(worst, excess)
            if excess > slack:
                violations += 1
                if offending is None:
                    offending = {"u": float(u), "h_over_a": float(k), "phi": phi}

    for u in -0.1 * np.arange(1, 10):
        h_bar = spinodal_field(model, float(u))[1] / a
        lower = 2.0 * abs(u / 3.0) ** 1.5
        if not lower < h_bar < abs(u):
            violations += 1
            worst = max(worst, max(lower - h_bar, h_bar - abs(u)))
            if offending is None:
                offending = {"u": float(u), "h_bar_over_a": h_bar}

    return AuditReport(check="minimum_estimates", grid=f"{n_u} x {len(h_axis)} (u, h/a) grid + 9 spinodals",
                       max_abs_error=max(worst, 0.0), max_rel_error=max(worst, 0.0), tolerance=slack,
                       passed=violations == 0, offending_point=offending,
                       n_checked=n_u * len(h_axis) + 9, notes=f"{violations} violations")


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

def canned_trajectory(model: PotentialModel) -> Trajectory:
    """Relaxation from phi0 = 0.1 at p0(0.6 theta_c) used by the default audit suite."""
    theta = 0.6 * model.params.theta_c
    p0 = float(coexistence_pressure(model, theta))
    return relax_homogeneous(model, 0.1, theta, PressureSchedule.constant(p0), t_end=20.0)


def audit_suite(model: PotentialModel, seed: int = DEFAULT_CONFIG["AUDIT_SEED"],
                n_samples: int = DEFAULT_CONFIG["AUDIT_SAMPLES"], n_pairs: int = 500) -> List[AuditReport]:
    """Run every audit for the model; reports are returned in a fixed order."""
    reports = [
        check_derivatives(model, n_samples, seed),
        check_gibbs_envelope(model),
        check_clausius_clapeyron(model),
        check_dissipation(canned_trajectory(model)),
        entropy_regularity_scan(model)[0],
        check_minima_oracle(model, n_pairs, seed),
        check_polynomial_equivalence(model, seed=seed),
        check_minimum_estimates(model),
    ]
    failed = [r.check for r in reports if not r.passed]
    logger.info(f"Audit suite: {len(reports) - len(failed)}/{len(reports)} passed"
                + (f", failed: {', '.join(failed)}" if failed else ""))
    return reports
