"""Scaled special functions: weighted Hermite sequences, Bessel, Airy, Gamma.

Only the functions the kernel formulas actually need are provided; this is
not a general special-function library.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError, NonConvergenceError
from .logcomplex import LogComplex

_RESCALE_HI = 1e120
_RESCALE_LO = 1e-120


def _hermite_weighted_arrays(x: complex, tau: float, n: int):
    """Internal array form of hermite_weighted_seq.

    Returns (log_mods, phasors) for t_j(x) = sqrt((tau/2)^j / j!) * H_j(x),
    j = 0..n-1, computed by the coefficient-fused three-term recurrence
        t_{j+1} = sqrt(2 tau/(j+1)) x t_j - tau sqrt(j/(j+1)) t_{j-1}
    with running-exponent rescaling so intermediates never overflow.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    x = complex(x)
    logs = np.empty(n)
    phasors = np.empty(n, dtype=complex)

    shift = 0.0          # cumulative log of the removed scale
    prev = 0.0 + 0.0j    # t_{j-1} in the rescaled frame
    cur = 1.0 + 0.0j     # t_0 = 1
    for j in range(n):
        a = abs(cur)
        if a == 0.0:
            logs[j] = -math.inf
            phasors[j] = 1.0
        else:
            logs[j] = shift + math.log(a)
            phasors[j] = cur / a
        if j == n - 1:
            break
        nxt = math.sqrt(2.0 * tau / (j + 1)) * x * cur \
            - tau * math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        m = max(abs(cur), abs(prev))
        if m > _RESCALE_HI or (0.0 < m < _RESCALE_LO):
            shift += math.log(m)
            cur /= m
            prev /= m
    return logs, phasors


def hermite_weighted_seq(x: complex, tau: float, n: int) -> list[LogComplex]:
    """t_j(x) = sqrt((tau/2)^j / j!) H_j(x) for j = 0..n-1, log-scaled.

    H_j is the physicists' Hermite polynomial; the square-root coefficient
    is fused into the recurrence, which halves the dynamic range of the
    intermediates.  Safe for |x| <= 1e3 and n <= 1e4.
    """
    logs, phasors = _hermite_weighted_arrays(x, tau, n)
    return [LogComplex.from_polar(l, cmath.phase(p)) for l, p in zip(logs, phasors)]


def _hermite_function_arrays(x: float, n: int):
    """Log-scaled oscillator eigenfunctions psi_j(x), j = 0..n-1, real x.

    psi_j(x) = H_j(x) exp(-x^2/2) / sqrt(2^j j! sqrt(pi)), by the recurrence
    psi_{j+1} = x sqrt(2/(j+1)) psi_j - sqrt(j/(j+1)) psi_{j-1}.
    Returns (log_mods, signs).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    x = float(x)
    logs = np.empty(n)
    signs = np.empty(n)

    # log-scale the Gaussian seed so large |x| cannot underflow
    shift = -0.5 * x * x - 0.25 * math.log(math.pi)
    prev = 0.0
    cur = 1.0
    for j in range(n):
        a = abs(cur)
        if a == 0.0:
            logs[j] = -math.inf
            signs[j] = 1.0
        else:
            logs[j] = shift + math.log(a)
            signs[j] = 1.0 if cur > 0 else -1.0
        if j == n - 1:
            break
        nxt = x * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        m = max(abs(cur), abs(prev))
        if m > _RESCALE_HI or (0.0 < m < _RESCALE_LO):
            shift += math.log(m)
            cur /= m
            prev /= m
    return logs, signs


def bessel_j_hat(nu: float, w: complex) -> complex:
    """The even Bessel variant Jhat_nu(w) = sum_k (-w/4)^k / (k! Gamma(nu+k+1)).

    Jhat_nu(z^2) = (2/z)^nu J_nu(z); as a function of w = z^2 it is entire,
    so the output depends on w only and never on a square root of w.
    """
    if nu < -0.5:
        raise DomainError(f"nu must be >= -1/2, got {nu}")
    w = complex(w)
    term = 1.0 / math.gamma(nu + 1.0)
    total = term
    q = -w / 4.0
    small = 0
    for k in range(500):
        term = term * q / ((k + 1.0) * (nu + k + 1.0))
        total += term
        if abs(term) <= 1e-15 * max(abs(total), 1e-300):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise NonConvergenceError("Jhat series did not reach 1e-15 in 500 terms",
                              nu=nu, w=w)


# ---------------------------------------------------------------------------
# Airy function and its tail integral
# ---------------------------------------------------------------------------

_AIRY_SWITCH = 6.0   # series below, asymptotics above; seam cross-checked in tests
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)     # Ai(0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)  # Ai'(0)


def _airy_u_coeffs(count: int = 40) -> np.ndarray:
    u = np.empty(count)
    u[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    return u


_AIRY_U = _airy_u_coeffs()


def _airy_series(x: np.ndarray) -> np.ndarray:
    # Maclaurin pair f, g with a_{k+1} = a_k x^3/((3k+2)(3k+3)) etc.
    x3 = x * x * x
    f = np.ones_like(x)
    g = x.copy()
    af = np.ones_like(x)
    ag = x.copy()
    for k in range(0, 60):
        af = af * x3 / ((3 * k + 2) * (3 * k + 3))
        ag = ag * x3 / ((3 * k + 3) * (3 * k + 4))
        f += af
        g += ag
        if max(np.max(np.abs(af)), np.max(np.abs(ag))) < 1e-18 * max(1.0, np.max(np.abs(f))):
            break
    return _AI0 * f + _AIP0 * g


def _airy_asym_pos(x: np.ndarray) -> np.ndarray:
    zeta = (2.0 / 3.0) * x ** 1.5
    out = np.zeros_like(x)
    for i, z in enumerate(zeta):
        s = 0.0
        term_prev = math.inf
        sign = 1.0
        for k, u in enumerate(_AIRY_U):
            term = u / z ** k
            if term > term_prev:   # divergent tail reached, stop at smallest term
                break
            s += sign * term
            sign = -sign
            term_prev = term
        out[i] = math.exp(-z) * s / (2.0 * math.sqrt(math.pi) * x[i] ** 0.25)
    return out


def _airy_asym_neg(x: np.ndarray) -> np.ndarray:
    t = -x
    zeta = (2.0 / 3.0) * t ** 1.5
    out = np.zeros_like(x)
    for i, z in enumerate(zeta):
        ce = 0.0   # even-u cosine series
        se = 0.0   # odd-u sine series
        sign = 1.0
        kmax = 0
        for k in range(0, len(_AIRY_U) // 2):
            term = _AIRY_U[2 * k] / z ** (2 * k)
            if 2 * k > 0 and term > abs(_AIRY_U[2 * (k - 1)] / z ** (2 * (k - 1))):
                break
            ce += sign * term
            kmax = k
            sign = -sign
        sign = 1.0
        for k in range(0, kmax + 1):
            se += sign * _AIRY_U[2 * k + 1] / z ** (2 * k + 1)
            sign = -sign
        phi = z - 0.25 * math.pi
        out[i] = (math.cos(phi) * ce + math.sin(phi) * se) / (math.sqrt(math.pi) * t[i] ** 0.25)
    return out


def _airy_ai_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lo = x < -_AIRY_SWITCH
    hi = x > _AIRY_SWITCH
    mid = ~(lo | hi)
    if mid.any():
        out[mid] = _airy_series(x[mid])
    if hi.any():
        out[hi] = _airy_asym_pos(x[hi])
    if lo.any():
        out[lo] = _airy_asym_neg(x[lo])
    return out


def airy_ai(x: float) -> float:
    """Ai(x) for x in [-20, 40]: Maclaurin series for |x| <= 6, asymptotics beyond."""
    if not (-20.0 <= x <= 40.0):
        raise DomainError(f"airy_ai supports x in [-20, 40], got {x}")
    return float(_airy_ai_array(np.array([x]))[0])


# fixed composite Gauss-Legendre rule for the Ai tail integral
_AI1_NODES, _AI1_WEIGHTS = np.polynomial.legendre.leggauss(16)
_AI1_T = 18.0          # exp(-(2/3) T^{3/2}) < 1e-22: discarded tail negligible
_AI1_STEP = 0.5        # short against the Ai oscillation scale down to -20
_ai1_cum: np.ndarray | None = None
_ai1_edges: np.ndarray | None = None


def _panel_integral(a: float, b: float) -> float:
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * _AI1_NODES
    return half * float(np.dot(_AI1_WEIGHTS, _airy_ai_array(nodes)))


def _ai1_table():
    # cumulative integral of Ai from each panel edge up to T, cached
    global _ai1_cum, _ai1_edges
    if _ai1_cum is None:
        edges = np.arange(-20.0, _AI1_T + _AI1_STEP / 2, _AI1_STEP)
        parts = np.array([_panel_integral(a, b)
                          for a, b in zip(edges[:-1], edges[1:])])
        cum = np.concatenate([np.cumsum(parts[::-1])[::-1], [0.0]])
        _ai1_edges, _ai1_cum = edges, cum
    return _ai1_edges, _ai1_cum


def airy_ai_integral(zeta: float) -> float:
    """Integrated Airy tail Ai_1(zeta) = int_zeta^infty Ai(s) ds.

    Composite Gauss-Legendre on [zeta, T] with panels short against the
    local oscillation; T comes from the superexponential bound
    Ai(s) <= exp(-(2/3) s^{3/2}) for s > 1, which makes the discarded tail
    negligible.  The panel cumulative is cached, so repeated evaluation
    (edge-kernel quadratures) costs one fractional panel per call.
    """
    if not (-20.0 <= zeta <= 40.0):
        raise DomainError(f"airy_ai_integral supports zeta in [-20, 40], got {zeta}")
    if zeta >= _AI1_T - 1.0:
        return _panel_integral(zeta, zeta + 8.0)
    edges, cum = _ai1_table()
    k = int(np.searchsorted(edges, zeta, side="left"))
    if k >= len(edges):
        k = len(edges) - 1
    return _panel_integral(zeta, float(edges[k])) + float(cum[k])


def gamma_fn(x: float) -> float:
    """Gamma(x) on (0, 50], relative error well below 1e-12."""
    if not (0.0 < x <= 50.0):
        raise DomainError(f"gamma_fn supports x in (0, 50], got {x}")
    return math.gamma(x)
