"""Limiting and asymptotic kernels, cocycles, and convergence-rate studies.

Every formula here is an evaluable function of its scaling variables; the
companion convergence_study measures its approach to the exact finite-n
kernels.  All exact-vs-asymptotic comparisons are made on cocycle-invariant
quantities (moduli or 2x2 determinants), since correlation kernels are only
defined up to a cocycle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .exact import kernel_fermi, kernel_hermite_sum
from .logcomplex import LogComplex
from .model import (KernelParams, as_point, in_ellipsoid, log_weight_omega,
                    to_elliptic, xi_tau)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_legendre
from .saddle import PhaseContext, g_eval, saddle_contribution
from .special import airy_ai_integral, bessel_j_hat, gamma_fn
from .special import _airy_ai_array  # vectorized Ai for the weighted tail


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cocycle:
    """Unit-modulus factor c(Z,Z') with c(Z,Z') c(Z',Z) = 1, so it cancels
    in every correlation determinant.

    Kinds: "C_tau_n" (bulk, attached to the Ginibre term), "D_tau_n" (edge
    term, d = 1), "C_X" (weak bulk), "C_Omega_n" (weak edge).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def evaluate(self, Z, Zp) -> complex:
        p = self.params
        if self.kind == "C_tau_n":
            n, tau = p["n"], p["tau"]
            zs = as_point(Z).vec_square
            zps = as_point(Zp).vec_square
            return cmath.exp(-1j * n * tau * (zs - zps).imag / (2.0 * (1.0 - tau ** 2)))
        if self.kind == "D_tau_n":
            n, tau = p["n"], p["tau"]
            c = to_elliptic(complex(as_point(Z).coords[0]), tau)
            cp = to_elliptic(complex(as_point(Zp).coords[0]), tau)
            arg = (c.eta - cp.eta
                   - 0.5 * math.exp(-2.0 * c.xi) * math.sin(2.0 * c.eta)
                   + 0.5 * math.exp(-2.0 * cp.xi) * math.sin(2.0 * cp.eta))
            return cmath.exp(1j * n * arg)
        if self.kind == "C_X":
            X = np.asarray(p["X"], dtype=float)
            d = len(X)
            nu = weak_density(X)
            dU = as_point(Z).array - as_point(Zp).array
            return cmath.exp(0.5j * nu ** (-1.0 / d) * float(np.dot(X, dU.imag)))
        if self.kind == "C_Omega_n":
            Om = np.asarray(p["omega"], dtype=float)
            n = p["n"]
            dU = as_point(Z).array - as_point(Zp).array
            return cmath.exp(1j * n ** (1.0 / 3.0) * float(np.dot(Om, dU.imag)))
        raise DomainError(f"unknown cocycle kind {self.kind!r}")


# ---------------------------------------------------------------------------
# strong non-Hermiticity, d = 1
# ---------------------------------------------------------------------------

def ginibre_inf_kernel(rho: float, Z: complex, Zp: complex) -> complex:
    """Infinite Ginibre kernel with density rho, including its standard
    unit-modulus factor for rho >= 1."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    Z = complex(Z)
    Zp = complex(Zp)
    w = -rho * (abs(Z) ** 2 + abs(Zp) ** 2 - 2.0 * Z * Zp.conjugate()) / 2.0
    if rho >= 1.0:
        w += -1j * math.sqrt(rho * (rho - 1.0)) * (Z * Z - Zp * Zp).imag / 2.0
    return rho / math.pi * cmath.exp(w)


def _log_ginibre_bulk_term(params: KernelParams, Z: complex, Zp: complex) -> LogComplex:
    """n * K^infty_{1/(1-tau^2)}(sqrt(n) Z, sqrt(n) Z') in log form."""
    n, tau = params.n, params.tau
    rho = 1.0 / (1.0 - tau ** 2)
    w = -n * rho * (abs(Z) ** 2 + abs(Zp) ** 2 - 2.0 * Z * Zp.conjugate()) / 2.0
    w += -1j * n * math.sqrt(rho * (rho - 1.0)) * (Z * Z - Zp * Zp).imag / 2.0
    return LogComplex.from_exponent(w + math.log(n * rho / math.pi))


def kn_asymptotic_d1(params: KernelParams, Z: complex, Zp: complex) -> LogComplex:
    """Bulk-plus-edge asymptotic form of the rescaled d = 1 kernel.

    The bulk term is the indicator-weighted infinite Ginibre kernel; the
    edge term is assembled from the dominant saddle contribution, which
    carries its cocycle and sign automatically.
    """
    if params.d != 1:
        raise DomainError("kn_asymptotic_d1 is the d = 1 formula")
    if params.tau >= 1.0:
        raise DomainError("needs tau < 1")
    n, tau = params.n, params.tau
    Z = complex(Z)
    Zp = complex(Zp)
    c = to_elliptic(Z, tau)
    cp = to_elliptic(Zp, tau)
    if c.xi <= 0 or cp.xi <= 0:
        raise DomainError("both points must lie off the motherbody (xi > 0)")
    xt = xi_tau(tau)
    xp = 0.5 * (c.xi + cp.xi)
    if (xp - xt) ** 2 + (c.eta - cp.eta) ** 2 <= 0:
        raise DomainError("coincident boundary points are excluded")

    bulk = LogComplex.zero()
    if xp < xt:
        bulk = _log_ginibre_bulk_term(params, Z, Zp)

    rt = math.sqrt(n)
    ctx = PhaseContext(tau, Z / math.sqrt(2.0 * tau),
                       Zp.conjugate() / math.sqrt(2.0 * tau))
    contrib = saddle_contribution(ctx, "a_inv", n, 1)
    log_w = 0.5 * (log_weight_omega(rt * Z, tau) + log_weight_omega(rt * Zp, tau))
    pref = LogComplex(math.log(n / (math.pi * math.sqrt(1.0 - tau ** 2))) + log_w, 0.0)
    return bulk + pref * contrib


def cluster2(params: KernelParams, Z: complex, Zp: complex) -> float:
    """Leading form of the two-point cluster function -|K_n(Z,Z')|^2 for
    distinct points near the droplet boundary."""
    if params.d != 1 or params.tau >= 1.0:
        raise DomainError("cluster2 is the d = 1, tau < 1 formula")
    n, tau = params.n, params.tau
    c = to_elliptic(complex(Z), tau)
    cp = to_elliptic(complex(Zp), tau)
    xt = xi_tau(tau)
    if abs(c.eta - cp.eta) < 1e-12 and abs(c.xi - cp.xi) < 1e-12:
        raise DomainError("coincident points are excluded")
    xp = 0.5 * (c.xi + cp.xi)
    den = (math.cosh(2.0 * (xp - xt)) - math.cos(c.eta - cp.eta))
    sh = abs(cmath.sinh(complex(c.xi, c.eta)) * cmath.sinh(complex(cp.xi, cp.eta)))
    expo = (-2.0 * n * (c.xi - xt) ** 2 * g_eval(c.xi, c.eta, tau)
            - 2.0 * n * (cp.xi - xt) ** 2 * g_eval(cp.xi, cp.eta, tau))
    return -n / (16.0 * tau * math.pi ** 3 * (1.0 - tau ** 2)) \
        * math.exp(expo) / (den * sh)


def cluster2_with_exact(params: KernelParams, Z: complex, Zp: complex):
    """(leading formula, exact -|K_n|^2) for convergence comparisons."""
    formula = cluster2(params, Z, Zp)
    k = kernel_hermite_sum(params, Z, Zp)
    exact = -math.exp(2.0 * k.log_mod)
    return formula, exact


@lru_cache(maxsize=1)
def circle_weight_constant() -> float:
    """K = (1/pi) * int_0^pi dt / sqrt(2 sin t), about 1.18034.

    The endpoint singularities are removed by the substitution t = u^2.
    """
    def f(u):
        return 2.0 * u / np.sqrt(2.0 * np.sin(u * u))
    half = gauss_legendre(f, 0.0, math.sqrt(math.pi / 2.0),
                          QuadratureSpec(64, 1e-13, 6))
    return float(2.0 * half / math.pi)


def uniform_bound_d1(params: KernelParams, Z: complex, Zp: complex,
                     log: bool = False) -> float:
    """All-n upper bound on |K_n - bulk term| for d = 1.

    Returns the bound itself, or its natural log when log=True (the bound
    underflows in double precision deep in the bulk).
    """
    if params.d != 1 or params.tau >= 1.0:
        raise DomainError("uniform_bound_d1 is the d = 1, tau < 1 bound")
    n, tau = params.n, params.tau
    c = to_elliptic(complex(Z), tau)
    cp = to_elliptic(complex(Zp), tau)
    xt = xi_tau(tau)
    xp = 0.5 * (c.xi + cp.xi)
    K = circle_weight_constant()
    lb = (math.log(K / (2.0 * math.pi * math.sqrt(1.0 - tau ** 2)))
          + math.log(n) - math.log(abs(1.0 - math.exp(2.0 * (xp - xt))))
          - n * (c.xi - xt) ** 2 * g_eval(c.xi, c.eta, tau)
          - n * (cp.xi - xt) ** 2 * g_eval(cp.xi, cp.eta, tau))
    return lb if log else math.exp(min(lb, 700.0))


def uniform_bound_dd(params: KernelParams, Z, Zp, log: bool = False) -> float:
    """d-dimensional analogue of the uniform bound, phrased through the
    elliptic coordinates of the reduced scalar pair."""
    if params.tau >= 1.0:
        raise DomainError("needs tau < 1")
    from .model import reduce_to_scalar
    n, d, tau = params.n, params.d, params.tau
    z, zp = reduce_to_scalar(Z, Zp, tau)
    cz = to_elliptic(math.sqrt(2.0 * tau) * z, tau)
    czp = to_elliptic(math.sqrt(2.0 * tau) * zp, tau)
    xt = xi_tau(tau)
    xp = 0.5 * (cz.xi + czp.xi)
    if xp <= 0:
        raise DomainError("the bound needs xi_+ > 0")
    lb = (d * math.log(n)
          - math.log(abs(1.0 - math.exp(-2.0 * (xp - xt))))
          + d * math.log(tau / (math.pi * (1.0 - tau ** 2) * math.sqrt(math.sinh(xp))))
          - n * (cz.xi - xt) ** 2 * g_eval(cz.xi, cz.eta, tau)
          - n * (czp.xi - xt) ** 2 * g_eval(czp.xi, czp.eta, tau))
    return lb if log else math.exp(min(lb, 700.0))


# ---------------------------------------------------------------------------
# one-point functions
# ---------------------------------------------------------------------------

def one_point_d1(params: KernelParams, Z: complex) -> float:
    """(1/n) K_n(Z, Z) with its first correction, d = 1.

    Three branches: off the motherbody, on the open motherbody (oscillatory
    correction), and at the motherbody endpoints (n^{-1/6} correction).
    Points on the droplet boundary are rejected: no formula holds there.
    """
    if params.d != 1 or params.tau >= 1.0:
        raise DomainError("one_point_d1 is the d = 1, tau < 1 formula")
    n, tau = params.n, params.tau
    Z = complex(Z)
    f = 2.0 * math.sqrt(tau)
    c = to_elliptic(Z, tau)
    xt = xi_tau(tau)
    lead = (1.0 if in_ellipsoid(Z, tau) else 0.0) / (math.pi * (1.0 - tau ** 2))

    if abs(Z.imag) < 1e-12 and abs(abs(Z.real) - f) < 1e-9:
        # motherbody endpoint: degenerate saddle, n^{-1/6} correction
        g0 = g_eval(0.0, 0.0, tau)
        corr = -(gamma_fn(1.0 / 6.0)
                 / (math.pi ** 2 * 2.0 ** (7.0 / 6.0) * 3.0 ** (1.0 / 3.0)
                    * n ** (1.0 / 6.0))
                 / math.sqrt(1.0 - tau ** 2) / (1.0 - tau)
                 * math.exp(-2.0 * n * xt ** 2 * g0))
        return 1.0 / (math.pi * (1.0 - tau ** 2)) + corr

    if abs(Z.imag) < 1e-12 and abs(Z.real) < f:
        # open motherbody: oscillatory correction
        eta = c.eta
        geta = g_eval(0.0, eta, tau)
        if abs(Z.real) < 1e-12:
            fn = -1.0 / (1.0 - tau) + (-1.0) ** n / (1.0 + tau)
        else:
            sign = 1.0 if Z.real > 0 else -1.0
            theta = n * (2.0 * eta - math.sin(2.0 * eta)) - sign * math.pi / 4.0
            den = 1.0 + tau ** 2 - 2.0 * tau * math.cos(2.0 * eta)
            fn = (-1.0 / (1.0 - tau)
                  + ((1.0 - tau) * math.cos(eta) * math.sin(theta)
                     + (1.0 + tau) * math.sin(eta) * math.cos(theta)) / den)
        corr = (fn / math.sqrt(2.0 * math.pi ** 3 * n)
                / math.sqrt(1.0 - tau ** 2) / math.sin(eta)
                * math.exp(-2.0 * n * xt ** 2 * geta))
        return 1.0 / (math.pi * (1.0 - tau ** 2)) + corr

    if abs(c.xi - xt) < 1e-9:
        raise DomainError("no one-point formula on the droplet boundary")
    gz = g_eval(c.xi, c.eta, tau)
    corr = (1.0 / math.sqrt(32.0 * math.pi ** 3 * n)
            / math.sqrt(tau * (1.0 - tau ** 2))
            * math.exp(-2.0 * n * (c.xi - xt) ** 2 * gz)
            / (math.sinh(c.xi - xt) * abs(cmath.sinh(complex(c.xi, c.eta)))))
    return lead + corr


def one_point_dd(params: KernelParams, Z) -> tuple[float, float]:
    """(leading density, error envelope) of K_n(Z, Z) for general d.

    The envelope is n^{d + gamma/2} exp(-2 n (xi - xi_tau)^2 g), with gamma
    graded by the position of Z relative to the real focal ball.
    """
    if params.tau >= 1.0:
        raise DomainError("needs tau < 1")
    n, d, tau = params.n, params.d, params.tau
    P = as_point(Z)
    if len(P) != d:
        raise DomainError("point dimension does not match params.d")
    re = math.sqrt(float(np.sum(P.re ** 2)))
    im = math.sqrt(float(np.sum(P.im ** 2)))
    # on the diagonal the scalar reduction is |Re Z| + i |Im Z| (up to sign)
    w = complex(re, im)
    c = to_elliptic(w, tau)
    xt = xi_tau(tau)
    if abs(c.xi - xt) < 1e-9:
        raise DomainError("no formula on the droplet boundary")
    lead = (n ** d if in_ellipsoid(P, tau) else 0.0) \
        / (math.pi ** d * (1.0 - tau ** 2) ** d)
    ball = 2.0 * math.sqrt(tau)
    if im > 1e-12 or re > ball + 1e-12:
        gamma = -1.0
    elif abs(re - ball) <= 1e-9:
        gamma = float(d)
    else:
        gamma = float(d - 2)
    envelope = (n ** (d + gamma / 2.0)
                * math.exp(-2.0 * n * (c.xi - xt) ** 2 * g_eval(c.xi, c.eta, tau)))
    return lead, envelope


# ---------------------------------------------------------------------------
# fermions on R^d
# ---------------------------------------------------------------------------

def fermi_bulk_density(n: int, d: int, X) -> float:
    """Limit of K^Fermi_n(X,X) d!/n^d: the d-dimensional semicircle profile
    inside |X| < sqrt(2), zero (exponentially small) outside."""
    Xv = np.asarray(as_point(X).array.real, dtype=float)
    r = float(np.linalg.norm(Xv))
    if abs(r - math.sqrt(2.0)) < 1e-9:
        raise DomainError("the bulk density formula excludes |X| = sqrt(2)")
    if r > math.sqrt(2.0):
        return 0.0
    return (math.factorial(d) / (2.0 ** d * math.pi ** (0.5 * d))
            * (2.0 - r * r) ** (0.5 * d) / gamma_fn(0.5 * d + 1.0))


def fermi_bulk_kernel(d: int, U, V) -> float:
    """Bulk scaling limit J_{d/2}(2|U-V|) / (pi |U-V|)^{d/2}, evaluated
    through the even Bessel variant so it is smooth at U = V."""
    Uv = np.asarray(as_point(U).array.real, dtype=float)
    Vv = np.asarray(as_point(V).array.real, dtype=float)
    r2 = float(np.sum((Uv - Vv) ** 2))
    return float(bessel_j_hat(0.5 * d, 4.0 * r2).real) / math.pi ** (0.5 * d)


def _weighted_airy_tail(A: float, beta: float = 0.0) -> float:
    """int_0^infty e^{beta s} Ai(A + s) ds; converges because the Airy decay
    beats any fixed exponential."""
    T = max(25.0, (1.5 * (abs(beta) + 3.0)) ** 2 + 5.0) - A
    T = max(T, 4.0)
    x, wts = np.polynomial.legendre.leggauss(64)
    edges = np.linspace(0.0, T, max(3, int(T / 4.0) + 2))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        s = 0.5 * (a + b) + half * x
        total += half * float(np.dot(wts, np.exp(beta * s) * _airy_ai_array(
            np.clip(A + s, -20.0, 40.0))))
    return total


def fermi_edge_kernel(d: int, X, U, V,
                      spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Edge scaling limit at |X| = sqrt(2): the d-dimensional integrated-Airy
    kernel, reduced to a single radial integral.

    The plane-wave factor exp(-i<Q, U-V>) integrates against the radially
    symmetric integrand via q^{d-1} Jhat_{d/2-1}(q^2 |U-V|^2), and the inner
    s-integral is the Airy tail Ai_1(2^{2/3} |Q|^2 + <U+V, X>/(2^{1/3}|X|)).
    """
    Xv = np.asarray(as_point(X).array.real, dtype=float)
    if abs(float(np.linalg.norm(Xv)) - math.sqrt(2.0)) > 1e-9:
        raise DomainError("X must lie on the sphere of radius sqrt(2)")
    Uv = np.asarray(as_point(U).array.real, dtype=float)
    Vv = np.asarray(as_point(V).array.real, dtype=float)
    c = float(np.dot(Uv + Vv, Xv)) / (2.0 ** (1.0 / 3.0) * float(np.linalg.norm(Xv)))
    r2 = float(np.sum((Uv - Vv) ** 2))

    # Ai_1 argument exceeds ~12 -> integrand negligible
    qmax = math.sqrt(max(4.0, (14.0 + abs(c))) / 2.0 ** (2.0 / 3.0))

    def integrand(q):
        q = np.asarray(q)
        out = np.empty_like(q)
        for i, qi in enumerate(q):
            out[i] = (qi ** (d - 1)
                      * float(bessel_j_hat(0.5 * d - 1.0, qi * qi * r2).real)
                      * airy_ai_integral(min(2.0 ** (2.0 / 3.0) * qi * qi + c, 40.0)))
        return out

    val = gauss_legendre(integrand, 0.0, qmax,
                         QuadratureSpec(max(spec.abscissa_count, 96),
                                        max(spec.rel_tol, 1e-9),
                                        spec.max_refinements))
    return 2.0 * (4.0 * math.pi) ** (-0.5 * d) * float(val)


# ---------------------------------------------------------------------------
# strong non-Hermiticity in C^d
# ---------------------------------------------------------------------------

def bulk_product_kernel(tau: float, d: int, Z, U, V) -> LogComplex:
    """Bulk limit in C^d: a product of one-dimensional Ginibre kernels with
    density 1/(1 - tau^2) per coordinate (cocycle attachable separately)."""
    if not (0.0 < tau < 1.0):
        raise DomainError("needs tau in (0, 1)")
    if not in_ellipsoid(Z, tau):
        raise DomainError("Z must lie inside the droplet")
    Uv = as_point(U).array
    Vv = as_point(V).array
    if len(Uv) != d or len(Vv) != d:
        raise DomainError("U, V must have dimension d")
    s = 1.0 - tau ** 2
    w = complex(np.sum(-(np.abs(Uv) ** 2 + np.abs(Vv) ** 2
                         - 2.0 * Uv * np.conj(Vv)) / (2.0 * s)))
    return LogComplex.from_exponent(w - d * math.log(math.pi * s))


# ---------------------------------------------------------------------------
# weak non-Hermiticity
# ---------------------------------------------------------------------------

def weak_density(X) -> float:
    """nu(X) = (2 pi)^{-d} (4 - |X|^2)^{d/2} on |X| < 2."""
    Xv = np.asarray(as_point(X).array.real, dtype=float)
    d = len(Xv)
    r2 = float(np.sum(Xv ** 2))
    if r2 >= 4.0:
        raise DomainError("weak-regime bulk points need |X| < 2")
    return (2.0 * math.pi) ** (-d) * (4.0 - r2) ** (0.5 * d)


def weak_bulk_t_integral(d: int, kappa: float, w2: complex,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """int_0^1 e^{-kappa pi^2 t^2} t^{d-1} Jhat_{d/2-1}(w2 pi^2 t^2) dt,
    the interpolating profile of the weak-non-Hermiticity bulk kernel."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")

    def f(t):
        t = np.asarray(t)
        out = np.empty(len(t), dtype=complex)
        for i, ti in enumerate(t):
            out[i] = (math.exp(-kappa * math.pi ** 2 * ti * ti) * ti ** (d - 1)
                      * bessel_j_hat(0.5 * d - 1.0, w2 * math.pi ** 2 * ti * ti))
        return out

    return complex(gauss_legendre(f, 0.0, 1.0, spec))


def weak_bulk_kernel(d: int, kappa: float, X, U, V,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Weak-non-Hermiticity bulk limit (cocycle C_X not included):

        e^{-(|Im U|^2 + |Im V|^2)/(2 kappa)} / (4 kappa)^{d/2}
            * 4 * int_0^1 e^{-kappa pi^2 t^2} t^{d-1}
                          Jhat_{d/2-1}((U - conj(V))^2 pi^2 t^2) dt.

    (U - conj(V))^2 is the vector square sum_k (U_k - conj(V_k))^2.
    """
    weak_density(X)          # validates |X| < 2
    Uv = as_point(U).array
    Vv = as_point(V).array
    if len(Uv) != d or len(Vv) != d:
        raise DomainError("U, V must have dimension d")
    w2 = complex(np.sum((Uv - np.conj(Vv)) ** 2))
    T = weak_bulk_t_integral(d, kappa, w2, spec)
    damp = math.exp(-(float(np.sum(Uv.imag ** 2)) + float(np.sum(Vv.imag ** 2)))
                    / (2.0 * kappa))
    return damp / (4.0 * kappa) ** (0.5 * d) * 4.0 * T


def weak_edge_kernel(d: int, kappa: float, omega, U, V,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Weak-non-Hermiticity edge limit (cocycle C_Omega^n not included):

        (kappa pi)^{-d/2} (2 pi)^{-d} e^{-(|Im U|^2+|Im V|^2)/(2 kappa)}
          e^{kappa^3/6 + kappa <U + conj(V), Omega>/2}
          * int_{R^d} e^{-i Q (U - conj(V))}
              int_0^infty e^{2^{-2/3} kappa s}
                  Ai(2^{2/3}|Q|^2 + 2^{-4/3}(kappa^2 + 2 Omega(U + conj(V))) + s) ds dQ.

    The s-integral converges because the Airy decay beats the exponential.
    The Q-integral reduces radially when U - conj(V) is a real vector; a
    d-fold tensor rule covers complex separations for d <= 2.  The Airy
    argument must be real (Omega(U + conj(V)) real).
    """
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    Om = np.asarray(as_point(omega).array.real, dtype=float)
    if abs(float(np.linalg.norm(Om)) - 1.0) > 1e-9:
        raise DomainError("omega must be a unit vector")
    Uv = as_point(U).array
    Vv = as_point(V).array
    if len(Uv) != d or len(Vv) != d or len(Om) != d:
        raise DomainError("U, V, omega must have dimension d")
    sum_uv = complex(np.dot(Om, Uv + np.conj(Vv)))
    if abs(sum_uv.imag) > 1e-10:
        raise DomainError("complex Airy arguments are unsupported: "
                          "Omega(U + conj(V)) must be real")
    A0 = 2.0 ** (-4.0 / 3.0) * (kappa ** 2 + 2.0 * sum_uv.real)
    beta = 2.0 ** (-2.0 / 3.0) * kappa
    r = Uv - np.conj(Vv)

    # Ai argument beyond ~ (1.5(beta+4))^{2/3} + margin kills the integrand
    Amax = (1.5 * (beta + 4.0)) ** 2 + 10.0
    qmax = math.sqrt(max(Amax - A0, 4.0) / 2.0 ** (2.0 / 3.0))

    if float(np.max(np.abs(r.imag))) < 1e-12:
        rr2 = float(np.sum(r.real ** 2))

        def radial(q):
            q = np.asarray(q)
            out = np.empty(len(q))
            for i, qi in enumerate(q):
                out[i] = (qi ** (d - 1)
                          * float(bessel_j_hat(0.5 * d - 1.0, qi * qi * rr2).real)
                          * _weighted_airy_tail(2.0 ** (2.0 / 3.0) * qi * qi + A0, beta))
            return out

        qint = 2.0 * (4.0 * math.pi) ** (-0.5 * d) * (2.0 * math.pi) ** d \
            * gauss_legendre(radial, 0.0, qmax,
                             QuadratureSpec(max(spec.abscissa_count, 96),
                                            max(spec.rel_tol, 1e-8),
                                            spec.max_refinements))
        qint = complex(qint)
    elif d <= 2:
        m = 96
        x, wts = np.polynomial.legendre.leggauss(m)
        qs = qmax * x
        ws = qmax * wts

        def one_axis_phase(qk, rk):
            return np.exp(-1j * qk * rk)

        if d == 1:
            vals = np.array([one_axis_phase(q, complex(r[0]))
                             * _weighted_airy_tail(2.0 ** (2.0 / 3.0) * q * q + A0, beta)
                             for q in qs])
            qint = complex(np.sum(ws * vals))
        else:
            tail = np.array([[_weighted_airy_tail(
                2.0 ** (2.0 / 3.0) * (q1 * q1 + q2 * q2) + A0, beta)
                for q2 in qs] for q1 in qs])
            ph1 = one_axis_phase(qs, complex(r[0]))
            ph2 = one_axis_phase(qs, complex(r[1]))
            qint = complex(np.einsum("i,j,ij->", ws * ph1, ws * ph2, tail))
    else:
        raise DomainError("d >= 3 with a fully complex separation is not supported")

    damp = math.exp(-(float(np.sum(Uv.imag ** 2)) + float(np.sum(Vv.imag ** 2)))
                    / (2.0 * kappa))
    pref = ((kappa * math.pi) ** (-0.5 * d) * (2.0 * math.pi) ** (-d)
            * damp * cmath.exp(kappa ** 3 / 6.0 + 0.5 * kappa * sum_uv))
    return pref * qint


# ---------------------------------------------------------------------------
# convergence studies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    """Per-n error table with a least-squares rate fit.

    fit="power": errors ~ C n^p, p from log-error vs log n.
    fit="exponential": errors ~ C e^{p n}, p from log-error vs n.
    """

    target: str
    points: dict
    n_values: tuple[int, ...]
    errors: tuple[float, ...]
    fitted_exponent: float
    fit_residual: float
    fit: str = "power"

    def to_dict(self) -> dict:
        return {"target": self.target, "points": self.points,
                "n": list(self.n_values), "error": list(self.errors),
                "fitted_exponent": self.fitted_exponent,
                "fit_residual": self.fit_residual}


def fit_rate(n_values, errors, fit: str = "power") -> tuple[float, float]:
    """Least-squares slope of log error against log n (power) or n
    (exponential); returns (slope, rms residual)."""
    n = np.asarray(n_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    if np.any(e <= 0):
        raise DomainError("errors must be strictly positive for a rate fit")
    x = np.log(n) if fit == "power" else n
    y = np.log(e)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((y - A @ coef) ** 2)))
    return float(coef[0]), resid


def _study_pair(target: str, point_spec: dict, n: int) -> tuple[float, float]:
    """(exact, formula) cocycle-invariant magnitudes for one n."""
    tau = point_spec.get("tau", 0.5)
    if target == "thm1":
        th, thp = point_spec.get("theta", 0.4), point_spec.get("theta_p", 1.9)
        rts = 2.0 * math.sqrt(tau)
        xt = xi_tau(tau)
        Z = rts * cmath.cosh(complex(xt, th))
        Zp = rts * cmath.cosh(complex(xt, thp))
        p = KernelParams(n, 1, tau)
        ex = kernel_hermite_sum(p, Z, Zp)
        fo = kn_asymptotic_d1(p, Z, Zp)
        return math.exp(ex.log_mod), math.exp(fo.log_mod)
    if target == "thm2":
        th, thp = point_spec.get("theta", 0.4), point_spec.get("theta_p",
                                                               0.4 + math.pi / 2)
        rts = 2.0 * math.sqrt(tau)
        xt = xi_tau(tau)
        Z = rts * cmath.cosh(complex(xt, th))
        Zp = rts * cmath.cosh(complex(xt, thp))
        p = KernelParams(n, 1, tau)
        fo, ex = cluster2_with_exact(p, Z, Zp)
        return abs(ex), abs(fo)
    if target == "onepoint":
        Z = complex(point_spec.get("z", 1.0))
        p = KernelParams(n, 1, tau)
        ex = math.exp(kernel_hermite_sum(p, Z, Z).log_mod) / n
        fo = one_point_d1(p, Z)
        return ex, fo
    if target == "fermi-bulk":
        d = point_spec.get("d", 1)
        X = point_spec.get("x", [0.5] + [0.0] * (d - 1))
        ex = kernel_fermi(n, d, X, X) * math.factorial(d) / n ** d
        fo = fermi_bulk_density(n, d, X)
        return ex, fo
    if target == "fermi-edge":
        d = point_spec.get("d", 1)
        X = np.array(point_spec.get("x", [math.sqrt(2.0)] + [0.0] * (d - 1)))
        U = np.array(point_spec.get("u", [0.0] * d))
        V = np.array(point_spec.get("v", [0.0] * d))
        h = n ** (2.0 / 3.0) * math.sqrt(2.0)
        ex = kernel_fermi(n, d, X + U / h, X + V / h) / h ** d
        fo = fermi_edge_kernel(d, X, U, V)
        return ex, fo
    if target == "cd-bulk":
        d = point_spec.get("d", 2)
        U = np.array(point_spec.get("u", [0.1 + 0.2j] * d))
        V = np.array(point_spec.get("v", [-0.3 + 0.1j] * d))
        p = KernelParams(n, d, tau)
        ex = math.exp(kernel_hermite_sum(p, U / math.sqrt(n),
                                         V / math.sqrt(n)).log_mod) / n ** d
        fo = math.exp(bulk_product_kernel(tau, d, [0.0] * d, U, V).log_mod)
        return ex, fo
    if target == "weak-bulk":
        d = point_spec.get("d", 1)
        kappa = point_spec.get("kappa", 0.5)
        X = np.array(point_spec.get("x", [0.0] * d))
        U = np.array(point_spec.get("u", [0.3] * d), dtype=complex)
        V = np.array(point_spec.get("v", [-0.2] * d), dtype=complex)
        nu = weak_density(X)
        h = nu ** (1.0 / d) * n
        tau_n = 1.0 - kappa / h
        p = KernelParams(n, d, tau_n)
        ex = math.exp(kernel_hermite_sum(p, X + U / h, X + V / h).log_mod) \
            / (nu ** 2 * float(n) ** (2 * d))
        fo = abs(weak_bulk_kernel(d, kappa, X, U, V))
        return ex, fo
    if target == "weak-edge":
        d = point_spec.get("d", 1)
        kappa = point_spec.get("kappa", 0.5)
        Om = np.array(point_spec.get("omega", [1.0] + [0.0] * (d - 1)))
        U = np.array(point_spec.get("u", [0.0] * d), dtype=complex)
        V = np.array(point_spec.get("v", [0.0] * d), dtype=complex)
        tau_n = 1.0 - kappa * n ** (-1.0 / 3.0)
        X = (1.0 + tau_n) * Om
        h = n ** (2.0 / 3.0)
        p = KernelParams(n, d, tau_n)
        ex = math.exp(kernel_hermite_sum(p, X + U / h, X + V / h).log_mod) \
            / float(n) ** (4.0 * d / 3.0)
        fo = abs(weak_edge_kernel(d, kappa, Om, U, V))
        return ex, fo
    raise DomainError(f"unknown study target {target!r}")


STUDY_TARGETS = ("thm1", "thm2", "onepoint", "fermi-bulk", "fermi-edge",
                 "cd-bulk", "weak-bulk", "weak-edge")


def convergence_study(target: str, point_spec: dict | None, n_list,
                      metric: str = "relative",
                      fit: str = "power") -> ConvergenceReport:
    """Measure exact-vs-formula errors over n_list and fit the decay rate.

    metric="relative": |exact - formula| / |formula| of the cocycle-invariant
    magnitudes; metric="absolute": plain difference of magnitudes.
    """
    point_spec = dict(point_spec or {})
    errors = []
    for n in n_list:
        ex, fo = _study_pair(target, point_spec, int(n))
        err = abs(ex - fo)
        if metric == "relative":
            err /= max(abs(fo), 1e-300)
        errors.append(err)
    slope, resid = fit_rate(n_list, errors, fit)
    return ConvergenceReport(target=target, points=point_spec,
                             n_values=tuple(int(n) for n in n_list),
                             errors=tuple(errors), fitted_exponent=slope,
                             fit_residual=resid, fit=fit)
