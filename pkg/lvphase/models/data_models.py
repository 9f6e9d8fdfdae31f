#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Pydantic models for the data structures exchanged between the core modules.

These models define the structure of thermodynamic samples, equilibrium
results, trajectories, profiles and audit reports. They make sure the data
is validated and has a consistent structure before it reaches the CSV writer.
"""

from enum import Enum
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PointKind(str, Enum):
    """Classification of a stationary point of f in phi."""
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    INFLECTION = "inflection"


class ThermoPoint(BaseModel):
    """A state sample (p, theta, phi) with its derived quantities."""
    model_config = ConfigDict(frozen=True)

    p: float
    theta: float
    phi: float
    nu: float
    eta: float
    f: float
    Phi: float
    psi: float


class StationaryPoint(BaseModel):
    """A root of f_phi at fixed (p, theta) or at fixed reduced (u, h)."""
    model_config = ConfigDict(frozen=True)

    phi: float
    kind: PointKind
    f_value: float
    is_absolute_min: bool = False
    residual: float = 0.0


class PhaseEquilibrium(BaseModel):
    """The classified stationary set at one state."""
    model_config = ConfigDict(frozen=True)

    p: Optional[float] = None
    theta: Optional[float] = None
    u: float
    h: float
    points: List[StationaryPoint]

    @model_validator(mode="after")
    def _at_most_two_minima(self):
        if sum(1 for pt in self.points if pt.kind is PointKind.MINIMUM) > 2:
            raise ValueError("more than two local minima")
        return self

    @property
    def minima(self) -> List[StationaryPoint]:
        return [pt for pt in self.points if pt.kind is PointKind.MINIMUM]

    @property
    def maxima(self) -> List[StationaryPoint]:
        return [pt for pt in self.points if pt.kind is PointKind.MAXIMUM]

    @property
    def is_coexistence(self) -> bool:
        """Two minima of equal depth."""
        return len(self.minima) == 2 and all(pt.is_absolute_min for pt in self.minima)

    @property
    def stable(self) -> StationaryPoint:
        """Absolute minimum; on a tie the liquid (larger phi) minimum."""
        best = [pt for pt in self.minima if pt.is_absolute_min]
        return max(best, key=lambda pt: pt.phi)

    @property
    def metastable(self) -> Optional[StationaryPoint]:
        others = [pt for pt in self.minima if not pt.is_absolute_min]
        return others[0] if others else None


class IsothermSample(BaseModel):
    """One row of an equilibrium isotherm."""
    model_config = ConfigDict(frozen=True)

    p: float
    nu: float = Field(gt=0)
    phi: float
    branch: str


class IsothermCurve(BaseModel):
    """Stable-branch isotherm with the optional coexistence plateau (p0, nu_liquid, nu_vapour)."""
    model_config = ConfigDict(frozen=True)

    theta: float
    samples: List[IsothermSample]
    plateau: Optional[Tuple[float, float, float]] = None

    @property
    def plateau_length(self) -> float:
        if self.plateau is None:
            return 0.0
        return self.plateau[2] - self.plateau[1]


class PressureSchedule(BaseModel):
    """Piecewise-linear p(t) through knots (t_i, p_i); constant after the last knot."""
    model_config = ConfigDict(frozen=True)

    points: List[Tuple[float, float]]

    @field_validator("points")
    @classmethod
    def _check_points(cls, points):
        if not points:
            raise ValueError("schedule needs at least one point")
        times = [t for t, _ in points]
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise ValueError("schedule times must be strictly increasing")
        if any(p <= 0 for _, p in points):
            raise ValueError("schedule pressures must be > 0")
        return points

    @classmethod
    def constant(cls, p: float) -> "PressureSchedule":
        return cls(points=[(0.0, p)])

    @property
    def knots(self) -> List[float]:
        return [t for t, _ in self.points]

    def value(self, t: float) -> float:
        times = [pt[0] for pt in self.points]
        values = [pt[1] for pt in self.points]
        return float(np.interp(t, times, values))

    def rate(self, t: float) -> float:
        """Right derivative dp/dt at t."""
        for (t0, p0), (t1, p1) in zip(self.points, self.points[1:]):
            if t0 <= t < t1:
                return (p1 - p0) / (t1 - t0)
        return 0.0


class Trajectory(BaseModel):
    """Time series of a homogeneous relaxation run."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    mode: str = "isothermal"
    t: np.ndarray
    phi: np.ndarray
    p: np.ndarray
    nu: np.ndarray
    f: np.ndarray
    dissipation: np.ndarray
    balance_residual: np.ndarray
    theta: Optional[np.ndarray] = None
    eta: Optional[np.ndarray] = None
    tau: float = 1.0
    atol: float = 1e-10
    rtol: float = 1e-8
    n_accepted: int = 0
    n_rejected: int = 0

    @property
    def columns(self) -> List[str]:
        cols = ["t", "phi", "p", "nu", "f", "dissipation", "balance_residual"]
        if self.theta is not None:
            cols += ["theta", "eta"]
        return cols

    def rows(self):
        arrays = [getattr(self, name) for name in self.columns]
        for i in range(len(self.t)):
            yield [float(arr[i]) for arr in arrays]

    def balance_tolerance(self, factor: float = 10.0) -> float:
        """factor * (atol + rtol * scale), scale = max(1, |f|, |eta|) over the samples."""
        terms = [1.0, float(np.max(np.abs(self.f)))]
        if self.eta is not None:
            terms.append(float(np.max(np.abs(self.eta))))
        return factor * (self.atol + self.rtol * max(terms))


class BoundaryKind(str, Enum):
    NOFLUX = "noflux"
    DIRICHLET = "dirichlet"


class BoundaryCondition(BaseModel):
    """NoFlux, or Dirichlet with the two fixed end values."""
    model_config = ConfigDict(frozen=True)

    kind: BoundaryKind = BoundaryKind.NOFLUX
    phi_left: Optional[float] = None
    phi_right: Optional[float] = None

    @model_validator(mode="after")
    def _dirichlet_values(self):
        if self.kind is BoundaryKind.DIRICHLET and (self.phi_left is None or self.phi_right is None):
            raise ValueError("Dirichlet boundary needs phi_left and phi_right")
        return self

    @classmethod
    def noflux(cls) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.NOFLUX)

    @classmethod
    def dirichlet(cls, phi_left: float, phi_right: float) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.DIRICHLET, phi_left=phi_left, phi_right=phi_right)


class DensityMode(str, Enum):
    CONSTANT_RHO = "constant_rho"
    FROZEN_RHO_FIELD = "frozen_rho_field"


class Profile1D(BaseModel):
    """Order-parameter field on a uniform grid at frozen (p, theta)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    phi: np.ndarray
    dx: float = Field(gt=0)
    x0: float = 0.0
    p: float = Field(gt=0)
    theta: float = Field(gt=0)
    bc: BoundaryCondition = Field(default_factory=BoundaryCondition.noflux)
    density_mode: DensityMode = DensityMode.CONSTANT_RHO
    rho: Optional[np.ndarray] = None

    @field_validator("phi", mode="before")
    @classmethod
    def _as_float_array(cls, phi):
        arr = np.array(phi, dtype=float)
        if arr.ndim != 1 or arr.size < 3:
            raise ValueError("phi must be a 1-D array with at least 3 points")
        return arr

    @property
    def n(self) -> int:
        return int(self.phi.size)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.dx * (self.n - 1)

    def with_phi(self, phi: np.ndarray) -> "Profile1D":
        return self.model_copy(update={"phi": np.array(phi, dtype=float)})


class PDEResult(BaseModel):
    """Outcome of a 1-D gradient-flow run."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    profile: Profile1D
    times: List[float]
    energies: List[float]
    steps: int
    lyapunov_violations: int = 0
    converged: bool = False
    max_phi_t: float = float("nan")

    @property
    def energy_series(self) -> List[Tuple[float, float]]:
        return list(zip(self.times, self.energies))


class AuditReport(BaseModel):
    """Result of one machine-checkable thermodynamic audit."""

    check: str
    grid: str
    max_abs_error: float = 0.0
    max_rel_error: float = 0.0
    tolerance: float
    passed: bool
    offending_point: Optional[Dict[str, Any]] = None
    n_checked: int = 0
    n_skipped: int = 0
    skipped_points: List[Dict[str, Any]] = Field(default_factory=list)
    notes: str = ""

    CSV_COLUMNS: ClassVar[Sequence[str]] = (
        "check", "grid", "max_abs_error", "max_rel_error", "tolerance",
        "pass", "n_checked", "n_skipped", "offending_point", "notes",
    )

    def csv_row(self) -> List[Any]:
        offending = "" if self.offending_point is None else ";".join(
            f"{k}={v}" for k, v in sorted(self.offending_point.items()))
        return [self.check, self.grid, self.max_abs_error, self.max_rel_error,
                self.tolerance, int(self.passed), self.n_checked, self.n_skipped,
                offending, self.notes]
