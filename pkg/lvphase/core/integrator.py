#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
integrator.py

Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.

The 5th order solution is propagated (local extrapolation) and the
difference to the embedded 4th order solution gives the local error
estimate. Stage evaluations that leave the admissible domain (DomainError)
reject the step and shrink it.
"""

from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.exceptions import DomainError, StepFailure

# Butcher table
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

# PI controller (order 5)
ALPHA = 0.7 / 5.0
BETA = 0.4 / 5.0
SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 5.0


class IntegrationResult(NamedTuple):
    t: np.ndarray
    y: np.ndarray
    n_accepted: int
    n_rejected: int
    last_h: float


class DormandPrince:
    """
    Adaptive explicit integrator for y' = rhs(t, y).

    Args:
        rhs: Right-hand side returning a 1-D array
        atol: Absolute tolerance
        rtol: Relative tolerance
        h_min: Smallest admissible step; below it StepFailure is raised
        h_max: Largest step (None = unbounded)
        max_steps: Cap on accepted plus rejected steps
    """

    def __init__(self, rhs: Callable[[float, np.ndarray], np.ndarray],
                 atol: float = DEFAULT_CONFIG["ODE_ATOL"],
                 rtol: float = DEFAULT_CONFIG["ODE_RTOL"],
                 h_min: float = DEFAULT_CONFIG["ODE_H_MIN"],
                 h_max: Optional[float] = DEFAULT_CONFIG["ODE_H_MAX"],
                 max_steps: int = DEFAULT_CONFIG["ODE_MAX_STEPS"]):
        self.rhs = rhs
        self.atol = atol
        self.rtol = rtol
        self.h_min = h_min
        self.h_max = h_max
        self.max_steps = max_steps

    def _error_norm(self, err: np.ndarray, y: np.ndarray, y_new: np.ndarray) -> float:
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.sqrt(np.mean((err / scale) ** 2)))

    def _initial_step(self, t0: float, y0: np.ndarray, f0: np.ndarray, span: float) -> float:
        scale = self.atol + self.rtol * np.abs(y0)
        d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
        d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, span)
        if self.h_max is not None:
            h = min(h, self.h_max)
        return max(h, self.h_min)

    def _stages(self, t: float, y: np.ndarray, h: float,
                k0: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = [k0]
        for i in range(1, 7):
            dy = sum(a * kj for a, kj in zip(A[i], k))
            k.append(np.asarray(self.rhs(t + C[i] * h, y + h * dy), dtype=float))
        ks = np.array(k)
        y_new = y + h * (B5 @ ks)
        err = h * (E @ ks)
        return y_new, err, ks[6]

    def integrate(self, y0, t0: float, t1: float, h0: Optional[float] = None) -> IntegrationResult:
        """
        Integrate from t0 to t1, recording every accepted step.

        Returns:
            IntegrationResult with times, states (one row per sample) and step counts

        Raises:
            StepFailure: If the step size underflows h_min or max_steps is exceeded
        """
        y = np.array(y0, dtype=float)
        t = float(t0)
        span = float(t1) - t
        times: List[float] = [t]
        states: List[np.ndarray] = [y.copy()]
        if span <= 0:
            return IntegrationResult(np.array(times), np.array(states), 0, 0, h0 or 0.0)

        k0 = np.asarray(self.rhs(t, y), dtype=float)
        h = h0 if h0 is not None else self._initial_step(t, y, k0, span)
        err_prev = 1.0
        n_accepted = 0
        n_rejected = 0

        while t < t1:
            if n_accepted + n_rejected >= self.max_steps:
                raise StepFailure(f"step limit {self.max_steps} reached at t={t:.6g}")
            if h < self.h_min:
                raise StepFailure(f"step size {h:.3g} below h_min={self.h_min:.3g} at t={t:.6g}")
            last = t + h >= t1
            h_try = t1 - t if last else h

            try:
                y_new, err, k_last = self._stages(t, y, h_try, k0)
                err_norm = self._error_norm(err, y, y_new)
                if not np.all(np.isfinite(y_new)) or not np.isfinite(err_norm):
                    raise DomainError("non-finite stage value")
            except DomainError as exc:
                n_rejected += 1
                logger.debug(f"Stage left the domain at t={t:.6g}, h={h_try:.3g}: {exc}")
                h = 0.25 * h_try
                continue

            if err_norm <= 1.0:
                t = t1 if last else t + h_try
                y = y_new
                k0 = k_last
                times.append(t)
                states.append(y.copy())
                n_accepted += 1
                if err_norm == 0.0:
                    fac = FAC_MAX
                else:
                    fac = SAFETY * err_norm ** (-ALPHA) * err_prev ** BETA
                fac = min(FAC_MAX, max(FAC_MIN, fac))
                h = (max(h_try, h) if last else h_try) * fac
                err_prev = max(err_norm, 1e-4)
            else:
                n_rejected += 1
                fac = max(FAC_MIN, SAFETY * err_norm ** (-1.0 / 5.0))
                h = h_try * fac
            if self.h_max is not None:
                h = min(h, self.h_max)

        return IntegrationResult(np.array(times), np.array(states), n_accepted, n_rejected, h)
