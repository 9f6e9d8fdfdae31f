#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Pydantic models for the Ginzburg-Landau potential parameters.

A ``PotentialModel`` bundles the potential kind with its ``ModelParams``.
Both are immutable once constructed, so they can be shared freely between
workers.
"""

from enum import Enum
from typing import Any, Dict, Optional, Protocol, runtime_checkable

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.exceptions import InvalidParams


class ModelKind(str, Enum):
    """The two Ginzburg-Landau potentials."""
    QUARTIC = "quartic"
    LOGARITHMIC = "logarithmic"


@runtime_checkable
class BackgroundTerm(Protocol):
    """Extra temperature-only contribution g(theta) added to f0."""

    def value(self, theta: Any) -> Any: ...

    def dtheta(self, theta: Any) -> Any: ...

    def dtheta2(self, theta: Any) -> Any: ...


class ModelParams(BaseModel):
    """Parameters of both potentials, the u(theta) schedule, p0(theta) and f0."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(default=DEFAULT_CONFIG["A"], gt=0)
    tau: float = Field(default=DEFAULT_CONFIG["TAU"], gt=0)
    kappa: float = Field(default=DEFAULT_CONFIG["KAPPA"], ge=0)
    theta_c: float = Field(default=DEFAULT_CONFIG["THETA_C"], gt=0)
    p_c: float = Field(default=DEFAULT_CONFIG["P_C"], gt=0)
    q: float = Field(default=DEFAULT_CONFIG["Q"], gt=0)
    beta: float = Field(default=DEFAULT_CONFIG["BETA"], gt=0)
    A: float = Field(default=DEFAULT_CONFIG["A_SLOPE"], gt=0)
    R: float = Field(default=DEFAULT_CONFIG["R"], gt=0)
    c: float = Field(default=DEFAULT_CONFIG["C"], gt=0)
    p_ref: float = Field(default=DEFAULT_CONFIG["P_REF"], gt=0)
    theta_ref: float = Field(default=DEFAULT_CONFIG["THETA_REF"], gt=0)
    dnu_ref: float = Field(default=DEFAULT_CONFIG["DNU_REF"], ge=0)
    beta_q: float = Field(default=DEFAULT_CONFIG["BETA_Q"], gt=0)


class PotentialModel(BaseModel):
    """A tagged potential: kind plus parameters (plus an optional f0 correction)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: ModelKind
    params: ModelParams = Field(default_factory=ModelParams)
    background_term: Optional[BackgroundTerm] = None

    @property
    def is_logarithmic(self) -> bool:
        return self.kind is ModelKind.LOGARITHMIC

    @property
    def is_quartic(self) -> bool:
        return self.kind is ModelKind.QUARTIC


def _constraint_of(error: Dict[str, Any]) -> str:
    """Render a pydantic error entry as a short constraint like '> 0'."""
    ctx = error.get("ctx") or {}
    symbols = {
        "greater_than": (">", "gt"),
        "greater_than_equal": (">=", "ge"),
        "less_than": ("<", "lt"),
        "less_than_equal": ("<=", "le"),
    }
    if error.get("type") in symbols:
        symbol, key = symbols[error["type"]]
        bound = ctx.get(key)
        if isinstance(bound, (int, float)) and not isinstance(bound, bool):
            return f"{symbol} {bound:g}"
        return f"{symbol} {bound}"
    return error.get("msg", "valid")


def make_model(kind, background_term: Optional[BackgroundTerm] = None, **params) -> PotentialModel:
    """
    Build a validated PotentialModel.

    Args:
        kind: ModelKind or its string value ("quartic", "logarithmic")
        background_term: Optional correction added to f0
        **params: Any ModelParams field

    Returns:
        The immutable PotentialModel

    Raises:
        InvalidParams: If a parameter violates its invariant or is unknown
    """
    try:
        model_kind = ModelKind(kind)
        return PotentialModel(kind=model_kind, params=ModelParams(**params),
                              background_term=background_term)
    except ValueError as exc:
        if isinstance(exc, PydanticValidationError):
            first = exc.errors()[0]
            key = ".".join(str(part) for part in first.get("loc", ()))
            raise InvalidParams(f"{key} must be {_constraint_of(first)}") from exc
        raise InvalidParams(str(exc)) from exc
