"""Log-scaled complex arithmetic.

Kernel evaluations carry factors like exp(n*F(s)) whose magnitudes span
hundreds of orders; values are therefore stored as (log-modulus, phase)
pairs and only converted to plain complex when safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
NEG_INF = float("-inf")


def wrap_phase(p: float) -> float:
    """Wrap a phase into (-pi, pi]."""
    p = math.fmod(p, TWO_PI)
    if p > math.pi:
        p -= TWO_PI
    elif p <= -math.pi:
        p += TWO_PI
    return p


@dataclass(frozen=True)
class LogComplex:
    """Complex value stored as (log-modulus, phase).

    ``log_mod = -inf`` encodes zero; the phase convention is (-pi, pi],
    re-wrapped after every multiplication.
    """

    log_mod: float
    phase: float = 0.0

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LogComplex":
        return LogComplex(NEG_INF, 0.0)

    @staticmethod
    def one() -> "LogComplex":
        return LogComplex(0.0, 0.0)

    @staticmethod
    def from_complex(w: complex) -> "LogComplex":
        w = complex(w)
        if w == 0:
            return LogComplex.zero()
        return LogComplex(math.log(abs(w)), cmath.phase(w))

    @staticmethod
    def from_exponent(w: complex) -> "LogComplex":
        """The value exp(w) for a complex exponent w."""
        w = complex(w)
        return LogComplex(w.real, wrap_phase(w.imag))

    @staticmethod
    def from_polar(log_mod: float, phase: float) -> "LogComplex":
        if log_mod == NEG_INF:
            return LogComplex.zero()
        return LogComplex(log_mod, wrap_phase(phase))

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.log_mod == NEG_INF

    def to_complex(self) -> complex:
        """Best-effort plain complex; overflows to inf beyond ~1e308."""
        if self.is_zero:
            return 0.0 + 0.0j
        if self.log_mod > 709.0:
            m = math.inf
        else:
            m = math.exp(self.log_mod)
        return complex(m * math.cos(self.phase), m * math.sin(self.phase))

    def to_real(self, phase_tol: float = 1e-8) -> float:
        """Plain real value; the phase must be ~0 or ~pi."""
        if self.is_zero:
            return 0.0
        if abs(self.phase) < phase_tol:
            sign = 1.0
        elif abs(abs(self.phase) - math.pi) < phase_tol:
            sign = -1.0
        else:
            raise ValueError(f"value is not real (phase={self.phase:.3g})")
        return sign * math.exp(self.log_mod) if self.log_mod <= 709.0 else sign * math.inf

    # -- arithmetic ------------------------------------------------------

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mod + other.log_mod,
                          wrap_phase(self.phase + other.phase))

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        if other.is_zero:
            raise ZeroDivisionError("LogComplex division by zero")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mod - other.log_mod,
                          wrap_phase(self.phase - other.phase))

    def __add__(self, other: "LogComplex") -> "LogComplex":
        # Rescale by the larger log-modulus, add in the rescaled frame.
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        ref = max(self.log_mod, other.log_mod)
        w = (cmath.exp(complex(self.log_mod - ref, self.phase))
             + cmath.exp(complex(other.log_mod - ref, other.phase)))
        if w == 0:
            return LogComplex.zero()
        return LogComplex(ref + math.log(abs(w)), cmath.phase(w))

    def __sub__(self, other: "LogComplex") -> "LogComplex":
        return self + (-other)

    def __neg__(self) -> "LogComplex":
        if self.is_zero:
            return self
        return LogComplex(self.log_mod, wrap_phase(self.phase + math.pi))

    def conjugate(self) -> "LogComplex":
        if self.is_zero:
            return self
        return LogComplex(self.log_mod, wrap_phase(-self.phase))

    def __pow__(self, k: float) -> "LogComplex":
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("0 ** nonpositive power")
            return self
        return LogComplex(k * self.log_mod, wrap_phase(k * self.phase))

    def scaled(self, c: complex) -> "LogComplex":
        """Multiply by a plain complex factor."""
        return self * LogComplex.from_complex(c)


def log_sum(values: np.ndarray | list) -> LogComplex:
    """Sum LogComplex values by rescaling with the maximum log-modulus."""
    vals = [v for v in values if not v.is_zero]
    if not vals:
        return LogComplex.zero()
    logs = np.array([v.log_mod for v in vals])
    phases = np.array([v.phase for v in vals])
    ref = logs.max()
    total = np.sum(np.exp(logs - ref) * np.exp(1j * phases))
    if total == 0:
        return LogComplex.zero()
    return LogComplex(ref + math.log(abs(total)), cmath.phase(complex(total)))


def log_sum_arrays(log_mods: np.ndarray, phasors: np.ndarray) -> LogComplex:
    """Sum of exp(log_mods) * phasors, with phasors unit-modulus complex."""
    mask = np.isfinite(log_mods)
    if not mask.any():
        return LogComplex.zero()
    logs = log_mods[mask]
    ref = logs.max()
    total = complex(np.sum(np.exp(logs - ref) * phasors[mask]))
    if total == 0:
        return LogComplex.zero()
    return LogComplex(ref + math.log(abs(total)), cmath.phase(total))


def rel_diff(a: LogComplex, b: LogComplex) -> float:
    """|a/b - 1|, guarded against overflow when the logs are far apart."""
    if b.is_zero:
        return 0.0 if a.is_zero else math.inf
    if a.is_zero:
        return 1.0
    dlog = a.log_mod - b.log_mod
    if dlog > 50.0:
        return math.inf
    if dlog < -50.0:
        return 1.0
    return abs(cmath.exp(complex(dlog, a.phase - b.phase)) - 1.0)
