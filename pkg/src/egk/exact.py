"""Exact finite-n kernel evaluation by independent routes.

Three paths are provided: the weighted Hermite (multi-)sum, a single contour
integral, and the Hermitian-limit fermion kernel (itself with two paths).
Mutual agreement of these routes is the ground truth for every asymptotic
formula in the package.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError, ResourceError
from .logcomplex import LogComplex, log_sum_arrays
from .model import (KernelParams, as_point, fermi_reduce, log_weight_omega,
                    reduce_to_scalar)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, circle_trapezoid
from .saddle import PhaseContext, saddle_points
from .special import _hermite_function_arrays, _hermite_weighted_arrays

_N_LIMIT = 2000


def _check_size(n: int, d: int):
    limit = _N_LIMIT if d == 1 else _N_LIMIT // d
    if n > limit:
        raise ResourceError(f"n = {n} at d = {d} exceeds the supported "
                            f"envelope (n <= {limit})")


# ---------------------------------------------------------------------------
# log-domain degree convolution for the total-degree cut-off
# ---------------------------------------------------------------------------

def _pair_logs(u: complex, v: complex, tau: float, n: int):
    """One coordinate's degree vector t_j(u) * conj(t_j(v)), log-scaled."""
    lu, pu = _hermite_weighted_arrays(u, tau, n)
    lv, pv = _hermite_weighted_arrays(v, tau, n)
    return lu + lv, pu * np.conj(pv)


def _convolve_truncated(la, pa, lb, pb, n: int):
    """Degree-wise product sum c_m = sum_{i+j=m} a_i b_j for m < n,
    accumulated in log space per output degree."""
    lc = np.empty(n)
    pc = np.empty(n, dtype=complex)
    for m in range(n):
        logs = la[: m + 1] + lb[m::-1]
        ref = logs.max()
        if not np.isfinite(ref):
            lc[m] = -math.inf
            pc[m] = 1.0
            continue
        tot = complex(np.sum(np.exp(logs - ref) * pa[: m + 1] * pb[m::-1]))
        if tot == 0:
            lc[m] = -math.inf
            pc[m] = 1.0
        else:
            lc[m] = ref + math.log(abs(tot))
            pc[m] = tot / abs(tot)
    return lc, pc


def kernel_hermite_sum(params: KernelParams, Z, Zp) -> LogComplex:
    """The finite-n kernel as the weighted Hermite multi-sum.

    For d > 1 the total-degree cut-off |j| < n is realized by convolving the
    per-coordinate degree vectors, which costs O(d n^2) instead of O(n^d).
    """
    if params.tau >= 1.0:
        raise DomainError("tau = 1 is served by kernel_fermi")
    _check_size(params.n, params.d)
    Zv = as_point(Z).array
    Zpv = as_point(Zp).array
    if len(Zv) != params.d or len(Zpv) != params.d:
        raise DomainError("point dimension does not match params.d")
    n, d, tau = params.n, params.d, params.tau
    scale = math.sqrt(params.n) if params.rescaled else 1.0
    c = 1.0 / math.sqrt(2.0 * tau)

    acc = None
    log_w = 0.0
    for k in range(d):
        u = scale * c * Zv[k]
        v = scale * c * Zpv[k]
        lk, pk = _pair_logs(u, v, tau, n)
        acc = (lk, pk) if acc is None else _convolve_truncated(*acc, lk, pk, n)
        log_w += 0.5 * (log_weight_omega(scale * Zv[k], tau)
                        + log_weight_omega(scale * Zpv[k], tau))

    total = log_sum_arrays(acc[0], acc[1])
    log_pref = (log_w - d * math.log(math.pi)
                - 0.5 * d * math.log(1.0 - tau * tau))
    if params.rescaled:
        log_pref += d * math.log(n)
    return total * LogComplex(log_pref, 0.0)


# ---------------------------------------------------------------------------
# contour route
# ---------------------------------------------------------------------------

def _contour_radius(z: complex, zp: complex) -> float:
    """Pass near the dominant saddle 1/a, clamped into (0.1, 0.95); the form
    of the integrand is radius-independent analytically."""
    ss = saddle_points(z, zp)
    return min(max(1.0 / abs(ss.a), 0.1), 0.95)


def make_In_integrand(n: int, d: int, tau: float, z: complex, zp: complex):
    """Integrand factory for the n-th contour kernel integral

        (1/2 pi i) oint e^{n F0(s)} (1 - (tau/s)^n)/(s - tau)
                        ds / (1 - s^2)^{d/2},

    which is entire except at {0, +-1}: the pole at s = tau is removable
    (limit n/tau), so any radius in (0, 1) yields the same value."""
    p2 = (z + zp) ** 2
    m2 = (z - zp) ** 2
    log_tau = math.log(tau)

    def f(s: complex) -> LogComplex:
        F0 = s * p2 / (2.0 * (1.0 + s)) - s * m2 / (2.0 * (1.0 - s))
        main = LogComplex.from_exponent(n * F0)
        # (1 - (tau/s)^n)/(s - tau): entire off 0, removable at s = tau
        if abs(s - tau) < 1e-8 * tau:
            eps = (s - tau) / tau
            q = LogComplex.from_complex(n / tau * (1.0 - 0.5 * (n + 1) * eps))
        else:
            pw = LogComplex.from_exponent(n * (log_tau - cmath.log(s)))
            q = (LogComplex.one() - pw) / LogComplex.from_complex(s - tau)
        den = cmath.exp(-0.5 * d * cmath.log(1.0 - s * s))
        return main * q * LogComplex.from_complex(den)

    return f


def In_contour(n: int, d: int, tau: float, z: complex, zp: complex,
               spec: QuadratureSpec = DEFAULT_SPEC,
               radius: float | None = None) -> LogComplex:
    """I_n(d, tau; z, z') by the refined circle trapezoid rule."""
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    if radius is None:
        radius = _contour_radius(z, zp)
    if not (0.0 < radius < 1.0):
        raise DomainError("contour radius must lie in (0, 1)")
    return circle_trapezoid(make_In_integrand(n, d, tau, z, zp), radius, spec)


def kernel_contour(params: KernelParams, Z, Zp,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> LogComplex:
    """The finite-n kernel through its single contour-integral representation.

    Agrees with kernel_hermite_sum to quadrature tolerance; the two routes
    share no code beyond the weights.
    """
    if params.tau >= 1.0:
        raise DomainError("tau = 1 is served by kernel_fermi")
    Zv = as_point(Z).array
    Zpv = as_point(Zp).array
    if len(Zv) != params.d or len(Zpv) != params.d:
        raise DomainError("point dimension does not match params.d")
    n, d, tau = params.n, params.d, params.tau
    # in the contour frame the arguments enter through the n-free scalar
    # pair (z, z'); all n-dependence sits in exp(n F) and the weights
    rt = math.sqrt(n)
    Y = Zv if params.rescaled else Zv / rt
    Yp = Zpv if params.rescaled else Zpv / rt
    z, zp = reduce_to_scalar(tuple(Y), tuple(Yp), tau)

    log_w = 0.0
    for k in range(d):
        log_w += 0.5 * (log_weight_omega(complex(rt * Y[k]), tau)
                        + log_weight_omega(complex(rt * Yp[k]), tau))
    In = In_contour(n, d, tau, z, zp, spec)
    log_pref = (log_w - d * math.log(math.pi)
                - 0.5 * d * math.log(1.0 - tau * tau))
    if params.rescaled:
        log_pref += d * math.log(n)
    return In * LogComplex(log_pref, 0.0)


# ---------------------------------------------------------------------------
# Hermitian limit: the fermion kernel
# ---------------------------------------------------------------------------

def kernel_fermi(n: int, d: int, X, Xp, spec: QuadratureSpec = DEFAULT_SPEC,
                 method: str = "sum") -> float:
    """Rescaled fermion kernel on R^d at the Hermitian point tau = 1.

    method="sum": direct oscillator-eigenfunction sum over total degree < n
    (sqrt(n)-scaled arguments), via the same degree convolution as the
    planar kernel.  method="contour": the tau = 1 contour route, whose
    pole factor (1 - s^{-n})/(s - 1) is entire off 0.
    """
    _check_size(n, d)
    Xv = np.asarray(as_point(X).array.real, dtype=float)
    Xpv = np.asarray(as_point(Xp).array.real, dtype=float)
    if len(Xv) != d or len(Xpv) != d:
        raise DomainError("point dimension does not match d")
    if np.any(np.abs(np.asarray(as_point(X).array.imag)) > 0) or \
       np.any(np.abs(np.asarray(as_point(Xp).array.imag)) > 0):
        raise DomainError("the fermion kernel takes real arguments")

    if method == "sum":
        rt = math.sqrt(n)
        acc = None
        for k in range(d):
            lu, su = _hermite_function_arrays(rt * Xv[k], n)
            lv, sv = _hermite_function_arrays(rt * Xpv[k], n)
            lk, pk = lu + lv, (su * sv).astype(complex)
            acc = (lk, pk) if acc is None else _convolve_truncated(*acc, lk, pk, n)
        total = log_sum_arrays(acc[0], acc[1])
        value = total * LogComplex(0.5 * d * math.log(n), 0.0)
        return value.to_real(phase_tol=1e-6)
    if method == "contour":
        z, zp = fermi_reduce(X, Xp)
        In = In_contour(n, d, 1.0, z, zp, spec)
        pref = LogComplex(0.5 * d * math.log(n / math.pi)
                          - 0.5 * n * (z * z + zp * zp), 0.0)
        return (pref * In).to_real(phase_tol=1e-6)
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# cocycle-stripped comparisons
# ---------------------------------------------------------------------------

def apply_cocycles(value: LogComplex, cocycles, Z, Zp,
                   inverse: bool = True) -> LogComplex:
    """Divide (default) or multiply a kernel value by unit-modulus cocycles,
    so comparisons can be made on cocycle-invariant quantities."""
    out = value
    for c in cocycles:
        w = c.evaluate(Z, Zp)
        out = out * LogComplex.from_complex(1.0 / w if inverse else w)
    return out
