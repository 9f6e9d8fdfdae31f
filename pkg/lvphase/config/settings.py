"""
Default configuration settings for lvphase.

This module defines the default configuration settings used throughout
the package. These settings can be overridden by providing a custom
configuration dictionary, by a run file (see ``lvphase.config.parser``)
or, for the logging keys, by environment variables.
"""

import os

from dotenv import load_dotenv

# Optional .env next to the working directory (only logging keys are read from it)
load_dotenv()

# Default configuration, non-dimensional (theta_c = p_c = 1)
DEFAULT_CONFIG = {
    # === MODEL SETTINGS ===
    "MODEL_KIND": "logarithmic",  # logarithmic oder quartic
    "A": 1.0,                     # energy scale a of the logarithmic potential
    "TAU": 1.0,                   # relaxation time
    "KAPPA": 1.0,                 # gradient-energy coefficient
    "THETA_C": 1.0,               # critical temperature
    "P_C": 1.0,                   # critical pressure
    "Q": 1.0,                     # exponent q of u(theta)
    "BETA": 0.5,                  # exponent beta of u(theta)
    "A_SLOPE": 7.0,               # slope A of the coexistence line p0(theta)
    "R": 1.0,                     # background gas constant
    "C": 1.0,                     # background heat capacity
    "P_REF": 1.0,                 # reference pressure of f0
    "THETA_REF": 1.0,             # reference temperature of f0
    "DNU_REF": 1.0,               # quartic volume-jump amplitude
    "BETA_Q": 0.5,                # quartic volume-jump exponent

    # === ODE INTEGRATOR SETTINGS ===
    "ODE_ATOL": 1e-10,            # absolute tolerance
    "ODE_RTOL": 1e-8,             # relative tolerance
    "ODE_H0": None,               # initial step (None = automatic)
    "ODE_H_MIN": 1e-14,           # step underflow -> StepFailure
    "ODE_H_MAX": None,            # maximum step (None = unbounded)
    "ODE_MAX_STEPS": 200000,      # hard cap on accepted + rejected steps

    # === PDE SETTINGS ===
    "PDE_DT_FACTOR": 0.4,         # default dt = factor * dx^2 * tau / kappa
    "PDE_SAFETY": 1.0,            # explicit bound dt <= safety * dx^2 * tau / (2 kappa)
    "PDE_DOMAIN_MARGIN": 1e-10,   # |phi| >= 1 - margin -> DomainError (logarithmic)
    "PDE_ENERGY_SLACK": 1e-12,    # relative slack of the monitored Lyapunov check

    # === EQUILIBRIUM SETTINGS ===
    "INFLECTION_TOL": 1e-9,       # |f_phiphi| below this -> degenerate point
    "SPINODAL_TOL": 1e-10,        # bisection tolerance on h/a

    # === VALIDATION SETTINGS ===
    "AUDIT_SEED": 12345,          # default seed of randomized audits
    "AUDIT_SAMPLES": 200,         # points per derivative audit
    "AUDIT_FD_STEP": 1e-6,        # relative finite-difference step
    "AUDIT_DERIVATIVE_TOL": 1e-6, # relative tolerance of derivative audits
    "AUDIT_KINK_TOL": 1e-5,       # tolerance for one-sided checks at quartic kinks
    "AUDIT_ENVELOPE_TOL": 1e-6,   # relative tolerance of envelope audits
    "AUDIT_BALANCE_FACTOR": 10.0, # balance residual <= factor * integrator tolerance
    "AUDIT_EXPONENT_TOL": 0.05,   # tolerance on fitted entropy exponents
    "AUDIT_FIT_POINTS": 10,       # number of dyadic points used in exponent fits

    # === LOGGING AND DEBUG SETTINGS ===
    "LOG_LEVEL": "INFO",          # Globales Log-Level (DEBUG, INFO, WARNING, ERROR)
    "DEBUG_MODE": False,          # True erzwingt DEBUG
    "LOG_DIR": None,              # Verzeichnis für Logdateien (None = nur stderr)
}


def get_config(user_config=None):
    """
    Get a configuration dictionary with user overrides applied.

    Args:
        user_config: Optional user configuration dictionary to override defaults

    Returns:
        A configuration dictionary with user overrides applied to defaults
    """
    config = DEFAULT_CONFIG.copy()

    # Logging-Schlüssel aus der Umgebung übernehmen
    env_level = os.environ.get("LVPHASE_LOG_LEVEL")
    if env_level:
        config["LOG_LEVEL"] = env_level
    env_dir = os.environ.get("LVPHASE_LOG_DIR")
    if env_dir:
        config["LOG_DIR"] = env_dir

    if user_config:
        config.update(user_config)

    return config
