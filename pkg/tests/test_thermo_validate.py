#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvphase.core.thermo_validate import (
    as_logarithmic,
    audit_suite,
    canned_trajectory,
    check_clausius_clapeyron,
    check_derivatives,
    check_dissipation,
    check_gibbs_envelope,
    check_minima_oracle,
    check_minimum_estimates,
    check_polynomial_equivalence,
    dyadic_grid,
    entropy_regularity_scan,
    expected_entropy_exponent,
    grid_minima,
)
from lvphase.core.equilibrium import spinodal_field, stationary_points
from lvphase.core.potentials import coexistence_pressure
from lvphase.models.data_models import Trajectory
from lvphase.models.params import ModelKind, make_model


def _trajectory(dissipation, balance):
    n = len(dissipation)
    return Trajectory(t=np.arange(n, dtype=float), phi=np.zeros(n), p=np.ones(n), nu=np.ones(n),
                      f=np.zeros(n), dissipation=np.asarray(dissipation, dtype=float),
                      balance_residual=np.asarray(balance, dtype=float))


@pytest.mark.parametrize("kind", ["logarithmic", "quartic"])
def test_derivatives_match_finite_differences(kind):
    report = check_derivatives(make_model(kind), n_samples=60)
    assert report.passed, report.offending_point
    assert report.n_checked == 60


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["quartic", "logarithmic"])
def test_derivative_audit_at_acceptance_size(kind):
    report = check_derivatives(make_model(kind), n_samples=200)
    assert report.passed, report.offending_point
    assert report.n_checked == 200


def test_derivative_audit_is_deterministic(quartic_model):
    first = check_derivatives(quartic_model, n_samples=20, seed=7)
    second = check_derivatives(quartic_model, n_samples=20, seed=7)
    assert first.model_dump() == second.model_dump()


def test_derivative_audit_needs_samples(log_model):
    with pytest.raises(ValueError):
        check_derivatives(log_model, n_samples=0)


def test_gibbs_envelope(log_model):
    report = check_gibbs_envelope(log_model)
    assert report.passed, report.offending_point
    assert report.n_checked > 0


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.6, max_value=0.95), st.floats(min_value=0.6, max_value=1.6))
def test_quartic_gibbs_envelope(theta_scale, p_factor):
    model = make_model("quartic")
    theta = theta_scale * model.params.theta_c
    p = p_factor * float(coexistence_pressure(model, theta))
    report = check_gibbs_envelope(model, theta_grid=[theta], p_grid=[p])
    assert report.passed, report.offending_point
    assert report.n_checked >= 1


@pytest.mark.parametrize("kind", ["logarithmic", "quartic"])
def test_clausius_clapeyron_audit(kind):
    report = check_clausius_clapeyron(make_model(kind))
    assert report.passed
    assert report.n_checked == 10


def test_dissipation_audit_passes_for_a_relaxation(log_model):
    report = check_dissipation(canned_trajectory(log_model))
    assert report.passed
    assert report.max_abs_error <= report.tolerance


def test_dissipation_audit_flags_negative_dissipation():
    report = check_dissipation(_trajectory([0.0, 0.1, -1e-3, 0.0], [0.0, 0.0, 0.0, 0.0]))
    assert not report.passed
    assert report.offending_point["index"] == 2


def test_dissipation_audit_flags_balance_drift():
    report = check_dissipation(_trajectory([0.0, 0.1, 0.1, 0.0], [0.0, 0.0, 1e-3, 2e-3]))
    assert not report.passed
    assert report.offending_point["index"] == 2
    assert report.max_abs_error == pytest.approx(2e-3)


def test_dyadic_grid():
    np.testing.assert_allclose(dyadic_grid(2.0, k_max=3), [1.0, 1.5, 1.75])


def test_expected_entropy_exponent():
    assert expected_entropy_exponent(make_model("logarithmic")) is None
    assert expected_entropy_exponent(make_model("quartic")) == pytest.approx(-1.0 / 3.0)
    assert expected_entropy_exponent(make_model("quartic", beta_q=1.0)) is None


def test_logarithmic_entropy_is_bounded(log_model):
    report, exponent = entropy_regularity_scan(log_model)
    assert report.passed, report.notes
    assert exponent > -0.05


def test_quartic_entropy_diverges_with_the_expected_exponent(quartic_model):
    report, exponent = entropy_regularity_scan(quartic_model)
    assert report.passed, report.notes
    assert exponent == pytest.approx(-1.0 / 3.0, abs=0.05)


def test_quartic_entropy_bounded_for_steep_volume_jump():
    report, exponent = entropy_regularity_scan(make_model("quartic", beta_q=1.0))
    assert report.passed, report.notes
    assert exponent > -0.05


def test_grid_minima(log_model):
    minima = grid_minima(log_model, -0.4, 0.0)
    np.testing.assert_allclose(minima, [-math.sqrt(0.4), math.sqrt(0.4)], atol=1e-10)
    assert len(grid_minima(log_model, 0.5, 0.3)) == 1


def test_minima_oracle(log_model):
    report = check_minima_oracle(log_model, n_pairs=30)
    assert report.passed, report.offending_point
    assert report.n_checked == 30
    assert report.n_skipped == 0


@pytest.mark.slow
def test_minima_oracle_at_acceptance_size(log_model):
    report = check_minima_oracle(log_model, n_pairs=500)
    assert report.passed, report.offending_point
    assert report.n_checked == 500
    assert report.max_abs_error < 1e-6


def test_grid_minima_resolve_near_spinodal_pairs():
    # u = -0.4 has its spinodal near h/a = 0.114
    model = make_model("logarithmic")
    h = spinodal_field(model, -0.4)[1] - 1e-4
    oracle = grid_minima(model, -0.4, h)
    solver = [pt.phi for pt in stationary_points(model, -0.4, h).minima]
    assert len(oracle) == len(solver) == 2
    np.testing.assert_allclose(sorted(oracle), solver, atol=1e-6)


def test_oracle_runs_on_the_logarithmic_counterpart(quartic_model):
    assert as_logarithmic(quartic_model).kind is ModelKind.LOGARITHMIC
    assert as_logarithmic(quartic_model).params == quartic_model.params
    assert check_minima_oracle(quartic_model, n_pairs=5).passed


def test_polynomial_equivalence(log_model):
    report = check_polynomial_equivalence(log_model, n_pairs=100)
    assert report.passed, report.offending_point


def test_minimum_estimates(log_model):
    report = check_minimum_estimates(log_model, grid=(20, 20))
    assert report.passed, report.offending_point
    assert report.n_checked == 20 * 20 + 9


@pytest.mark.slow
def test_audit_suite_passes(log_model):
    reports = audit_suite(log_model, n_samples=50, n_pairs=50)
    assert [r.check for r in reports] == [
        "derivatives", "gibbs_envelope", "clausius_clapeyron", "dissipation",
        "entropy_regularity", "minima_oracle", "polynomial_equivalence", "minimum_estimates",
    ]
    failed = [r.check for r in reports if not r.passed]
    assert not failed
