#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Shared fixtures: reference models used across the test-suite."""

import pytest

from lvphase.models.params import make_model


@pytest.fixture
def log_model():
    """Logarithmic model with default parameters (u(0.6) = -0.4)."""
    return make_model("logarithmic")


@pytest.fixture
def quartic_model():
    """Quartic model with default parameters (dnu ~ (1 - theta)^(1/2))."""
    return make_model("quartic")


@pytest.fixture
def kink_model():
    """Quartic model with u(0.5) = 1: dnu_ref = 8/3, beta_q = 1."""
    return make_model("quartic", dnu_ref=8.0 / 3.0, beta_q=1.0)


@pytest.fixture
def thermal_model():
    """Logarithmic model with a large background heat capacity."""
    return make_model("logarithmic", c=10.0)


@pytest.fixture
def ramp_model():
    """Logarithmic model with a moderate coexistence pressure for pressure ramps."""
    return make_model("logarithmic", A=2.0, R=10.0)
