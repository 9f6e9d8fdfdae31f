"""
Data models for lvphase.

Parameters and potential models live in ``params``; result containers
shared between the core modules live in ``data_models``.
"""

from lvphase.models.params import ModelKind, ModelParams, PotentialModel
from lvphase.models.data_models import (
    AuditReport,
    BoundaryCondition,
    BoundaryKind,
    DensityMode,
    IsothermCurve,
    IsothermSample,
    PDEResult,
    PhaseEquilibrium,
    PointKind,
    PressureSchedule,
    Profile1D,
    StationaryPoint,
    ThermoPoint,
    Trajectory,
)

__all__ = [
    "ModelKind",
    "ModelParams",
    "PotentialModel",
    "AuditReport",
    "BoundaryCondition",
    "BoundaryKind",
    "DensityMode",
    "IsothermCurve",
    "IsothermSample",
    "PDEResult",
    "PhaseEquilibrium",
    "PointKind",
    "PressureSchedule",
    "Profile1D",
    "StationaryPoint",
    "ThermoPoint",
    "Trajectory",
]
