#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exception hierarchy for lvphase.

Library code raises these; only the command line front-end turns them into
exit codes.
"""

from typing import Optional, Sequence


class PhaseFieldError(Exception):
    """Base class for all lvphase errors."""


class InvalidParams(PhaseFieldError, ValueError):
    """Model parameters violate their invariants."""


class DomainError(PhaseFieldError, ArithmeticError):
    """An order parameter or state left the admissible domain."""


class NonPositiveVolume(PhaseFieldError, ArithmeticError):
    """The specific volume f_p evaluated to a non-positive value."""

    def __init__(self, nu: float, p: Optional[float] = None, theta: Optional[float] = None):
        self.nu = nu
        self.p = p
        self.theta = theta
        where = ""
        if p is not None:
            where = f" at p={p!r}, theta={theta!r}"
        super().__init__(f"non-positive specific volume nu={nu!r}{where}")


class ModelMismatch(PhaseFieldError, TypeError):
    """Operation is not defined for the given potential kind."""


class StepFailure(PhaseFieldError, RuntimeError):
    """The adaptive integrator could not make progress."""


class SingularHeatCapacity(PhaseFieldError, ArithmeticError):
    """theta * eta_theta vanished along a thermal trajectory."""


class StabilityViolation(PhaseFieldError, ValueError):
    """Explicit PDE time step exceeds the stability bound."""


class ParseError(PhaseFieldError, ValueError):
    """Syntax error in a run configuration file."""

    def __init__(self, line: int, reason: str, lines: Optional[Sequence[int]] = None):
        self.line = line
        self.reason = reason
        self.lines = tuple(lines) if lines else (line,)
        super().__init__(f"line {line}: {reason}")


class ValidationError(PhaseFieldError, ValueError):
    """A configuration value violates its constraint."""

    def __init__(self, key: str, constraint: str):
        self.key = key
        self.constraint = constraint
        super().__init__(f"{key}: must be {constraint}")
