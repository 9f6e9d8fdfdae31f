"""
lvphase - phase-field model of the liquid-vapour transition.

The package provides two Ginzburg-Landau potentials (piecewise quartic and
logarithmic) with analytic partial derivatives, the equilibrium
thermodynamics derived from their minima (isotherms, volume jump, latent
heat, spinodals, hysteresis), homogeneous and 1-D relaxation dynamics and a
suite of machine-checkable thermodynamic audits.
"""

__version__ = "0.3.0"

# Potentials
from lvphase.models.params import ModelKind, ModelParams, PotentialModel, make_model
from lvphase.core.potentials import (
    potential_eval,
    thermo_point,
    u_schedule,
    volume_split,
)

# Equilibrium
from lvphase.core.equilibrium import (
    find_stationary_points,
    hysteresis_sweep,
    isotherm,
    latent_heat_and_clapeyron,
    spinodal,
    volume_jump,
)

# Dynamics
from lvphase.core.dynamics import relax_homogeneous, relax_thermal_homogeneous
from lvphase.core.pde1d import discrete_free_energy, run_pde1d

# Audits
from lvphase.core.thermo_validate import audit_suite

# Konfigurations-Utility exportieren
from lvphase.config.settings import get_config

__all__ = [
    "ModelKind",
    "ModelParams",
    "PotentialModel",
    "make_model",
    "potential_eval",
    "thermo_point",
    "u_schedule",
    "volume_split",
    "find_stationary_points",
    "hysteresis_sweep",
    "isotherm",
    "latent_heat_and_clapeyron",
    "spinodal",
    "volume_jump",
    "relax_homogeneous",
    "relax_thermal_homogeneous",
    "discrete_free_energy",
    "run_pde1d",
    "audit_suite",
    "get_config",
    "__version__",
]
