"""Quadrature primitives: refined circle trapezoid, Gauss-Legendre, tails.

The circle rule accumulates in log space because the integrands carry
exp(n*F) factors spanning hundreds of orders of magnitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import NonConvergenceError
from .logcomplex import LogComplex, log_sum_arrays, rel_diff


@dataclass(frozen=True)
class QuadratureSpec:
    """Refinement policy: double the abscissa count until two successive
    estimates agree to rel_tol, giving up after max_refinements doublings."""

    abscissa_count: int = 64
    rel_tol: float = 1e-10
    max_refinements: int = 8

    def __post_init__(self):
        if self.abscissa_count < 1 or self.max_refinements < 1 or self.rel_tol <= 0:
            raise ValueError("invalid QuadratureSpec")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _leggauss(m: int):
    return np.polynomial.legendre.leggauss(m)


def circle_trapezoid(f: Callable[[complex], LogComplex], radius: float,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> LogComplex:
    """(1/2 pi i) * contour integral of f over |s| = radius, log-accumulated.

    Equally spaced trapezoid nodes; spectrally convergent for integrands
    analytic in an annulus around the circle.  The running maximum
    log-modulus is subtracted before summation.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    m = spec.abscissa_count
    prev = None
    for _ in range(spec.max_refinements + 1):
        theta = 2.0 * math.pi * np.arange(m) / m
        nodes = radius * np.exp(1j * theta)
        logs = np.empty(m)
        phasors = np.empty(m, dtype=complex)
        for k, s in enumerate(nodes):
            v = f(complex(s)) * LogComplex.from_complex(s)
            logs[k] = v.log_mod
            phasors[k] = cmath.exp(1j * v.phase) if not v.is_zero else 0.0
        est = log_sum_arrays(logs, phasors) * LogComplex.from_complex(1.0 / m)
        if prev is not None:
            if est.is_zero and prev.is_zero:
                return est
            # summing nodes of size exp(max log) down to exp(est log) costs
            # exp(gap) in relative accuracy; refining cannot beat this floor
            gap = float(np.max(logs[np.isfinite(logs)])) - est.log_mod
            floor = 64.0 * np.finfo(float).eps * math.exp(min(gap, 60.0))
            if rel_diff(est, prev) < max(spec.rel_tol, floor):
                return est
        prev = est
        m *= 2
    raise NonConvergenceError(
        "circle_trapezoid did not converge",
        radius=radius, node_count=m // 2, rel_tol=spec.rel_tol)


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   spec: QuadratureSpec = DEFAULT_SPEC):
    """Gauss-Legendre integral of f over [a, b] with order doubling.

    f must accept an ndarray of nodes and return values elementwise.
    """
    m = spec.abscissa_count
    prev = None
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    for _ in range(spec.max_refinements + 1):
        x, w = _leggauss(m)
        est = half * np.sum(w * np.asarray(f(mid + half * x)))
        if prev is not None:
            if abs(est - prev) <= spec.rel_tol * max(abs(est), 1e-300):
                return est
        prev = est
        m *= 2
    raise NonConvergenceError("gauss_legendre did not converge",
                              interval=(a, b), node_count=m // 2)


def semi_infinite(f: Callable[[np.ndarray], np.ndarray], a: float,
                  decay_hint: Callable[[float], float],
                  spec: QuadratureSpec = DEFAULT_SPEC,
                  panel_width: float = 2.0, max_panels: int = 200):
    """Integral of f over [a, infinity), truncated by an envelope bound.

    decay_hint(t) must bound |f| on [t, infinity) by an integrable envelope;
    panels are appended until the envelope estimate of the remaining tail
    drops below rel_tol times the accumulated value.
    """
    total = 0.0
    t = a
    for _ in range(max_panels):
        part = gauss_legendre(f, t, t + panel_width, spec)
        total = total + part
        t += panel_width
        e0, e1 = decay_hint(t), decay_hint(t + panel_width)
        if e0 <= 0:
            return total
        ratio = min(e1 / e0, 0.999) if e0 > 0 else 0.0
        tail_bound = e0 * panel_width / max(1.0 - ratio, 1e-3)
        if tail_bound <= spec.rel_tol * max(abs(total), 1e-300):
            return total
    raise NonConvergenceError("semi_infinite tail did not fall below tolerance",
                              start=a, panels=max_panels)
