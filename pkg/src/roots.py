# -*- coding: utf-8 -*-
"""
Root finding helpers
====================

- real_roots(): real roots of a low-degree polynomial (numpy.polynomial)
- quadratic_roots(): same, from coefficients a*x^2 + b*x + c
- first_drop(): scan a residual from the right and locate where it first
  turns negative, refined with Brent's method
- sign_changes(): every sign change of a function on an interval
"""

from __future__ import annotations
import logging
from typing import Callable, List, Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy import optimize as opt

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

Residual = Callable[[float], Optional[float]]


def real_roots(poly: Polynomial, imag_tol: float = 1e-9) -> List[float]:
    """Real roots in ascending order; vanishing leading coefficients are trimmed."""
    coef = np.asarray(poly.coef, dtype=float)
    scale = float(np.max(np.abs(coef))) if coef.size else 0.0
    if scale == 0.0:
        return []
    coef = coef / scale
    while coef.size > 1 and abs(coef[-1]) <= 1e-14:
        coef = coef[:-1]
    if coef.size <= 1:
        return []
    roots = Polynomial(coef).roots()
    out = [float(r.real) for r in roots if abs(r.imag) <= imag_tol * max(1.0, abs(r.real))]
    return sorted(out)


def quadratic_roots(a: float, b: float, c: float) -> List[float]:
    return real_roots(Polynomial([c, b, a]))


def first_drop(
    func: Residual,
    hi: float,
    lo: float,
    samples: int,
    tol: float = 0.0,
) -> Optional[float]:
    """
    Largest x in [lo, hi] where ``func`` turns negative when scanning leftwards.

    ``func`` returns None where the condition it encodes is not applicable;
    such samples count as non-negative. A value below ``-tol`` at ``hi`` means
    the drop has already happened and ``hi`` is returned.
    """
    if hi < lo:
        return None
    xs = np.linspace(hi, lo, samples + 1)
    prev_x, prev_v = float(xs[0]), func(float(xs[0]))
    if prev_v is not None and prev_v < -tol:
        return prev_x
    for x in xs[1:]:
        x = float(x)
        v = func(x)
        if v is not None and v < 0.0:
            if prev_v is not None and prev_v > 0.0:
                try:
                    return float(opt.brentq(_nan_guard(func), x, prev_x, xtol=1e-14, rtol=4 * np.finfo(float).eps))
                except ValueError:
                    logger.debug("brentq failed on [%r, %r], using sample", x, prev_x)
                    return x
            return prev_x if prev_v is not None else x
        prev_x, prev_v = x, v
    return None


def sign_changes(func: Callable[[float], float], lo: float, hi: float, samples: int) -> List[float]:
    """Roots of ``func`` at every sign change between consecutive samples."""
    if not hi > lo:
        return []
    xs = np.linspace(lo, hi, samples + 1)
    vals = [func(float(x)) for x in xs]
    out: List[float] = []
    for k in range(samples):
        a, b = vals[k], vals[k + 1]
        if a == 0.0:
            out.append(float(xs[k]))
        elif a * b < 0.0:
            out.append(float(opt.brentq(func, float(xs[k]), float(xs[k + 1]), xtol=1e-14)))
    if vals[-1] == 0.0:
        out.append(float(xs[-1]))
    return out


def _nan_guard(func: Residual) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        v = func(x)
        return 1.0 if v is None else v
    return wrapped
