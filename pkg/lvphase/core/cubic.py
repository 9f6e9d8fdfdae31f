#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
cubic.py

Real roots of a cubic a x^3 + b x^2 + c x + d = 0 in closed form.

Three real roots are taken from the trigonometric form, one real root from
Cardano's formula. Used by the equilibrium solver for the stationary points
of the logarithmic potential.
"""

import numpy as np

from lvphase.exceptions import InvalidParams

_EPS = 2.220446049250313e-16


def real_cubic_roots(a: float, b: float, c: float, d: float) -> np.ndarray:
    """
    Solve a x^3 + b x^2 + c x + d = 0.

    Args:
        a: Leading coefficient (must be non-zero)
        b, c, d: Remaining coefficients

    Returns:
        Sorted array of the distinct real roots (one to three entries)

    Raises:
        InvalidParams: If a == 0
    """
    if a == 0:
        raise InvalidParams("leading coefficient of a cubic must be non-zero")

    inv_a = 1.0 / a
    b_a = inv_a * b
    b_a2 = b_a * b_a
    c_a = inv_a * c
    d_a = inv_a * d

    Q = (3.0 * c_a - b_a2) / 9.0
    R = (9.0 * b_a * c_a - 27.0 * d_a - 2.0 * b_a * b_a2) / 54.0
    Q3 = Q * Q * Q
    D = Q3 + R * R
    shift = b_a / 3.0

    if abs(Q) <= _EPS * max(1.0, b_a2):
        if abs(R) <= _EPS * max(1.0, abs(b_a) * b_a2):
            return np.array([-shift])
        return np.array([np.cbrt(2.0 * R) - shift])

    if D <= 0:
        # Q < 0 here, three real roots
        ratio = np.clip(R / np.sqrt(-Q3), -1.0, 1.0)
        angle = np.arccos(ratio)
        sqrt_q = np.sqrt(-Q)
        roots = np.array([
            2.0 * sqrt_q * np.cos(angle / 3.0) - shift,
            2.0 * sqrt_q * np.cos((angle + 2.0 * np.pi) / 3.0) - shift,
            2.0 * sqrt_q * np.cos((angle + 4.0 * np.pi) / 3.0) - shift,
        ])
        return np.unique(np.sort(roots))

    AD = 0.0
    BD = 0.0
    if abs(R) > _EPS:
        AD = np.cbrt(abs(R) + np.sqrt(D))
        AD = AD if R >= 0 else -AD
        BD = -Q / AD
    return np.array([AD + BD - shift])


def polish_root(func, dfunc, x: float, steps: int = 2) -> float:
    """
    Newton-polish a root; a step is kept only if it reduces |func|.

    Args:
        func: Function whose root is sought
        dfunc: Its derivative
        x: Starting root estimate
        steps: Maximum number of Newton steps

    Returns:
        The polished root
    """
    best = float(x)
    best_res = abs(func(best))
    for _ in range(steps):
        slope = dfunc(best)
        if slope == 0 or not np.isfinite(slope):
            break
        candidate = best - func(best) / slope
        try:
            res = abs(func(candidate))
        except ArithmeticError:
            break
        if not np.isfinite(res) or res >= best_res:
            break
        best, best_res = candidate, res
    return best
