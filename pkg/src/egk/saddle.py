"""Phase function F, its saddle points, auxiliary functions g and h, the
maximum-on-circle inequality, and generic saddle/endpoint contributions.

All quantities live in the scalar coordinates (z, z') produced by
model.reduce_to_scalar, where z = sqrt(2) cosh(xi + i eta).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .logcomplex import LogComplex
from .model import EllipticCoord, elliptic_coords, xi_tau

SQRT2 = math.sqrt(2.0)
DEGENERACY_TOL = 1e-9

SADDLE_LABELS = ("a", "a_inv", "b", "b_inv")


def _on_cut(z: complex, tol: float = DEGENERACY_TOL) -> bool:
    """Membership of the focal segment [-sqrt(2), sqrt(2)]."""
    return abs(z.imag) <= tol and abs(z.real) <= SQRT2 + tol


def _at_vertex(z: complex, tol: float = DEGENERACY_TOL) -> bool:
    return min(abs(z - SQRT2), abs(z + SQRT2)) <= tol


@dataclass(frozen=True)
class PhaseContext:
    """(tau, z, z'): everything needed to evaluate F and its saddles."""

    tau: float
    z: complex
    zp: complex

    def __post_init__(self):
        if not (0.0 < self.tau <= 1.0):
            raise DomainError(f"tau must be in (0, 1], got {self.tau}")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "zp", complex(self.zp))

    @cached_property
    def coord(self) -> EllipticCoord:
        return elliptic_coords(self.z, SQRT2)

    @cached_property
    def coord_p(self) -> EllipticCoord:
        return elliptic_coords(self.zp, SQRT2)

    @cached_property
    def saddles(self) -> "SaddleSet":
        return saddle_points(self.z, self.zp)

    @property
    def xi_tau(self) -> float:
        return xi_tau(self.tau)


@dataclass(frozen=True)
class SaddleSet:
    """The four candidate saddle values, the degeneracy class, and the
    contributing subset for the circle |s| = |a|^{-1}."""

    a: complex
    a_inv: complex
    b: complex
    b_inv: complex
    case_tag: str                     # generic | z_eq_pm_zp | z_on_cut |
                                      # zp_on_cut | vertex_degenerate | none
    contributing: tuple[str, ...]     # labels of true saddles on the contour
    endpoints: tuple[int, ...] = ()   # subset of {-1, +1} active on the
                                      # diagonal/anti-diagonal over the cut
    near_degenerate: bool = False     # within 10x of the classification tol

    def value(self, label: str) -> complex:
        return {"a": self.a, "a_inv": self.a_inv,
                "b": self.b, "b_inv": self.b_inv}[label]


# ---------------------------------------------------------------------------
# the phase function
# ---------------------------------------------------------------------------

def F_eval(ctx: PhaseContext, s: complex) -> complex:
    """F(s) = s(z+z')^2/(2(1+s)) - s(z-z')^2/(2(1-s)) - Log s + Log tau.

    Principal logarithm; only Re F and exp(n F) are consumed downstream, so
    the branch is immaterial there.
    """
    s = complex(s)
    if s == 0 or s == 1 or s == -1:
        raise DomainError("F has singularities at s in {0, 1, -1}")
    p2 = (ctx.z + ctx.zp) ** 2
    m2 = (ctx.z - ctx.zp) ** 2
    return (s * p2 / (2.0 * (1.0 + s)) - s * m2 / (2.0 * (1.0 - s))
            - cmath.log(s) + math.log(ctx.tau))


def F_deriv(ctx: PhaseContext, s: complex, order: int = 1) -> complex:
    """Closed-form rational derivatives of F of order 1, 2 or 3."""
    s = complex(s)
    if s == 0 or s == 1 or s == -1:
        raise DomainError("F' has singularities at s in {0, 1, -1}")
    p2 = (ctx.z + ctx.zp) ** 2
    m2 = (ctx.z - ctx.zp) ** 2
    if order == 1:
        return p2 / (2.0 * (1.0 + s) ** 2) - m2 / (2.0 * (1.0 - s) ** 2) - 1.0 / s
    if order == 2:
        return -p2 / (1.0 + s) ** 3 - m2 / (1.0 - s) ** 3 + 1.0 / s ** 2
    if order == 3:
        return 3.0 * p2 / (1.0 + s) ** 4 - 3.0 * m2 / (1.0 - s) ** 4 - 2.0 / s ** 3
    raise DomainError(f"order must be 1, 2 or 3, got {order}")


def saddle_quartic(z: complex, zp: complex, s: complex) -> complex:
    """s^4 - 2 z z' s^3 + 2(z^2 + z'^2 - 1) s^2 - 2 z z' s + 1, whose roots
    are the saddle points."""
    zz = z * zp
    return (s ** 4 - 2.0 * zz * s ** 3 + 2.0 * (z * z + zp * zp - 1.0) * s ** 2
            - 2.0 * zz * s + 1.0)


# ---------------------------------------------------------------------------
# saddle points and classification
# ---------------------------------------------------------------------------

def saddle_points(z: complex, zp: complex, tol: float = DEGENERACY_TOL) -> SaddleSet:
    """Saddle values a, 1/a, b, 1/b from elliptic coordinates, classified.

    a = exp((xi+xi') + i(eta+eta')) and b = exp((xi-xi') + i(eta-eta')), so
    1/a is always the closest value to the origin.  Degenerate situations
    (z or z' at a focal endpoint, z = +-z', z = z' = 0) are tagged; the
    contributing set lists the genuine saddles whose circle contributions
    have to be summed, and `endpoints` the active branch points when the
    pair sits on the diagonal/anti-diagonal over the cut.
    """
    z = complex(z)
    zp = complex(zp)
    c = elliptic_coords(z, SQRT2)
    cp = elliptic_coords(zp, SQRT2)
    a = cmath.exp(complex(c.xi + cp.xi, c.eta + cp.eta))
    b = cmath.exp(complex(c.xi - cp.xi, c.eta - cp.eta))
    a_inv = 1.0 / a
    b_inv = 1.0 / b

    z_vertex = _at_vertex(z, tol)
    zp_vertex = _at_vertex(zp, tol)
    z_cut = _on_cut(z, tol)
    zp_cut = _on_cut(zp, tol)
    equal = abs(z - zp) <= tol or abs(z + zp) <= tol
    near = (min(abs(z - zp), abs(z + zp)) <= 10 * tol
            or min(abs(abs(z.real) - SQRT2), abs(abs(zp.real) - SQRT2)) <= 10 * tol)

    endpoints: tuple[int, ...] = ()
    if abs(z) <= tol and abs(zp) <= tol:
        # no saddle points at all; both branch points carry the integral
        tag = "none"
        contributing: tuple[str, ...] = ()
        endpoints = (-1, 1)
    elif z_vertex and zp_vertex:
        # single saddle of order 2 sitting on the branch point +-1;
        # no closed-form contribution is provided for it
        tag = "vertex_degenerate"
        contributing = ()
    elif z_vertex:
        tag = "z_on_cut"                   # order-2 pair a_inv = b
        contributing = ()
    elif zp_vertex:
        tag = "zp_on_cut"                  # order-2 pair a_inv = b_inv
        contributing = ()
    elif equal:
        tag = "z_eq_pm_zp"
        # exactly one elliptic label pair collapses onto the branch point
        # +1 (diagonal) or -1 (anti-diagonal); the other pair holds the
        # two genuine saddles.  Off the cut only the inner one contributes.
        if min(abs(a - 1.0), abs(a + 1.0)) <= tol:
            contributing = ("b", "b_inv") if z_cut else ("a_inv",)
            if z_cut:
                endpoints = (1,) if abs(a - 1.0) <= tol else (-1,)
        else:
            contributing = ("a_inv", "a") if z_cut else ("a_inv",)
            if z_cut:
                endpoints = (1,) if abs(b - 1.0) <= tol else (-1,)
    else:
        tag = "generic"
        if z_cut and zp_cut:
            contributing = ("a_inv", "a", "b", "b_inv")
        elif z_cut:
            contributing = ("a_inv", "b")
        elif zp_cut:
            contributing = ("a_inv", "b_inv")
        else:
            contributing = ("a_inv",)

    return SaddleSet(a=a, a_inv=a_inv, b=b, b_inv=b_inv, case_tag=tag,
                     contributing=contributing, endpoints=endpoints,
                     near_degenerate=near)


# ---------------------------------------------------------------------------
# values at the saddles
# ---------------------------------------------------------------------------

def _F_exponent_at_saddle(ctx: PhaseContext, label: str) -> complex:
    """Closed-form F at a saddle in elliptic coordinates (mod 2 pi i)."""
    A = ctx.coord.w
    B = ctx.coord_p.w
    lt = math.log(ctx.tau)
    if label == "a":
        return 1.0 + lt - A - B + 0.5 * cmath.exp(2.0 * A) + 0.5 * cmath.exp(2.0 * B)
    if label == "a_inv":
        return 1.0 + lt + A + B + 0.5 * cmath.exp(-2.0 * A) + 0.5 * cmath.exp(-2.0 * B)
    if label == "b":
        return 1.0 + lt - A + B + 0.5 * cmath.exp(2.0 * A) + 0.5 * cmath.exp(-2.0 * B)
    if label == "b_inv":
        return 1.0 + lt + A - B + 0.5 * cmath.exp(-2.0 * A) + 0.5 * cmath.exp(2.0 * B)
    raise DomainError(f"unknown saddle label {label!r}")


def exp_F_at_saddle(ctx: PhaseContext, which: str) -> LogComplex:
    """exp(F) at a saddle; returning the exponential sidesteps the 2 pi i
    ambiguity of F itself."""
    return LogComplex.from_exponent(_F_exponent_at_saddle(ctx, which))


def F2_at_saddle(ctx: PhaseContext, which: str) -> complex:
    """F'' at a saddle from the closed elliptic-coordinate forms."""
    A = ctx.coord.w
    B = ctx.coord_p.w
    sA = cmath.sinh(A)
    sB = cmath.sinh(B)
    ss = ctx.saddles
    if which in ("a", "a_inv"):
        den = cmath.sinh(A + B)
        if abs(den) < 1e-13 or (abs(sA) < 1e-13 and abs(sB) < 1e-13):
            raise DomainError(f"F'' not well-defined at {which} (case {ss.case_tag})")
        q = sA * sB / den
        return -2.0 * ss.a ** (-2) * q if which == "a" else 2.0 * ss.a ** 2 * q
    if which in ("b", "b_inv"):
        den = cmath.sinh(A - B)
        if abs(den) < 1e-13:
            raise DomainError(f"F'' not well-defined at {which} (case {ss.case_tag})")
        q = sA * sB / den
        return 2.0 * ss.b ** (-2) * q if which == "b" else -2.0 * ss.b ** 2 * q
    raise DomainError(f"unknown saddle label {which!r}")


# ---------------------------------------------------------------------------
# the decay profile g
# ---------------------------------------------------------------------------

def _G(xi: float, eta: float, tau: float) -> float:
    xt = xi_tau(tau)
    return (0.5 + xi - xt + 0.5 * math.exp(-2.0 * xi) * math.cos(2.0 * eta)
            - 2.0 * tau * (math.cosh(xi) * math.cos(eta)) ** 2 / (1.0 + tau)
            - 2.0 * tau * (math.sinh(xi) * math.sin(eta)) ** 2 / (1.0 - tau))


def g_eval(xi: float, eta: float, tau: float, band: float = 1e-4) -> float:
    """The strictly positive profile g with
    |sqrt(omega omega') e^{n F(1/a)}| = exp(-n (xi-xi_tau)^2 g) per point.

    Away from xi = xi_tau the defining quotient -G/(xi-xi_tau)^2 is used;
    inside a band of width `band` the removable singularity is patched by
    the quadratic limit (1 + tau^2 - 2 tau cos 2 eta)/(1 - tau^2) plus its
    exact linear correction 2(xi - xi_tau)/3.
    """
    if xi < 0:
        raise DomainError("xi must be >= 0")
    if not (0.0 < tau < 1.0):
        raise DomainError(f"g_eval needs tau in (0, 1), got {tau}")
    h = xi - xi_tau(tau)
    if abs(h) >= band:
        return -_G(xi, eta, tau) / h ** 2
    # G(xi_tau) = G'(xi_tau) = 0, G''(xi_tau) = -2(1+tau^2-2 tau cos 2eta)/(1-tau^2),
    # and G'''(xi_tau) = -4 identically.
    g0 = (1.0 + tau * tau - 2.0 * tau * math.cos(2.0 * eta)) / (1.0 - tau * tau)
    return g0 + 2.0 * h / 3.0


# ---------------------------------------------------------------------------
# the circle profile h and its coefficients
# ---------------------------------------------------------------------------

def alpha_beta(ctx: PhaseContext, route: str = "definition") -> tuple[complex, complex]:
    """Coefficients of the numerator of h.

    route="definition": alpha = (z^2+z'^2)/2 - Re F(1/a) + log tau + log|a|,
    beta = 2 alpha + conj(z z' / a) - a z z'.
    route="elliptic": 2 alpha = sinh(2 xi) e^{2 i eta} + sinh(2 xi') e^{2 i eta'},
    beta = -(a / conj(a)) sinh(2 xi + 2 xi').
    """
    ss = ctx.saddles
    if route == "definition":
        reF = _F_exponent_at_saddle(ctx, "a_inv").real
        alpha = (0.5 * (ctx.z ** 2 + ctx.zp ** 2) - reF
                 + math.log(ctx.tau) + math.log(abs(ss.a)))
        beta = 2.0 * alpha + (ctx.z * ctx.zp / ss.a).conjugate() - ss.a * ctx.z * ctx.zp
        return alpha, beta
    if route == "elliptic":
        c, cp = ctx.coord, ctx.coord_p
        alpha = 0.5 * (math.sinh(2 * c.xi) * cmath.exp(2j * c.eta)
                       + math.sinh(2 * cp.xi) * cmath.exp(2j * cp.eta))
        beta = -(ss.a / ss.a.conjugate()) * math.sinh(2.0 * (c.xi + cp.xi))
        return alpha, beta
    raise DomainError(f"unknown route {route!r}")


def h_eval(ctx: PhaseContext, zeta: complex) -> complex:
    """h(zeta) with Re F(zeta/a) = Re F(1/a) + h(zeta) on |zeta| = 1.

    Real-valued on the unit circle; returned as complex so callers can
    assert the vanishing imaginary part.
    """
    zeta = complex(zeta)
    a = ctx.saddles.a
    ac = a.conjugate()
    for pole in (a, -a, 1.0 / ac, -1.0 / ac):
        if abs(zeta - pole) < 1e-12:
            raise DomainError("h is singular at +-a and +-1/conj(a)")
    alpha, beta = alpha_beta(ctx)
    num = (zeta - 1.0) ** 2 * (alpha * zeta ** 2 + beta * zeta
                               + (a ** 2 / ac ** 2) * alpha.conjugate())
    den = (zeta ** 2 - a ** 2) * (zeta ** 2 - ac ** (-2))
    return num / den


# ---------------------------------------------------------------------------
# maximum-on-circle verification and the landscape scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxInequalityReport:
    max_excess: float                  # max Re F on circle minus Re F(1/a)
    equality_angles: tuple[float, ...]
    expected_labels: tuple[str, ...]
    matched: bool
    constant_on_circle: bool
    circle_variation: float


def verify_max_inequality(ctx: PhaseContext, grid_size: int = 2048,
                          tol: float = 1e-10) -> MaxInequalityReport:
    """Sample Re F on |s| = 1/|a| and locate where the maximum is attained.

    The maximum must not exceed Re F(1/a); the equality locus is matched
    against the contributing saddles predicted by cut membership.
    """
    ss = ctx.saddles
    r = 1.0 / abs(ss.a)
    theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
    vals = np.array([F_eval(ctx, r * cmath.exp(1j * t)).real for t in theta])
    ref = _F_exponent_at_saddle(ctx, "a_inv").real
    variation = float(vals.max() - vals.min())
    constant = variation <= tol

    scale = max(1.0, abs(ref))
    near_max = theta[vals >= vals.max() - 1e-6 * scale]
    # cluster wrapped angles
    clusters: list[float] = []
    for t in near_max:
        if not clusters or min(abs(t - c) for c in clusters) > 20 * math.pi / grid_size:
            clusters.append(float(t))

    # the theorem's equality locus is driven by cut membership alone
    expected = ["a_inv"]
    if _on_cut(ctx.z) and _on_cut(ctx.zp):
        expected = ["a_inv", "a", "b", "b_inv"]
    elif _on_cut(ctx.z):
        expected.append("b")
    elif _on_cut(ctx.zp):
        expected.append("b_inv")
    if constant:
        matched = True
    else:
        matched = True
        for t in clusters:
            s = r * cmath.exp(1j * t)
            ok = any(abs(s - ss.value(lbl)) < 16.0 * math.pi * r / grid_size
                     for lbl in expected)
            matched = matched and ok
    return MaxInequalityReport(
        max_excess=float(vals.max() - ref),
        equality_angles=tuple(clusters),
        expected_labels=tuple(expected),
        matched=matched,
        constant_on_circle=constant,
        circle_variation=variation)


def region_scan(ctx: PhaseContext, window: tuple[float, float, float, float],
                resolution: tuple[int, int] = (200, 200),
                level_ref: float | None = None):
    """Indicator grid of Re F(s) >= level over a rectangle of the s-plane.

    level defaults to Re F(1/a).  Returns (xs, ys, grid) with grid[i, j]
    for s = xs[j] + i ys[i]; rows are independent and safe to parallelize.
    """
    xmin, xmax, ymin, ymax = window
    nx, ny = resolution
    if level_ref is None:
        level_ref = _F_exponent_at_saddle(ctx, "a_inv").real
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    grid = np.zeros((ny, nx), dtype=bool)
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            s = complex(x, y)
            if s == 0 or abs(s - 1.0) < 1e-12 or abs(s + 1.0) < 1e-12:
                grid[i, j] = True      # Re F -> +inf at 0; poles treated as high
                continue
            grid[i, j] = F_eval(ctx, s).real >= level_ref
    return xs, ys, grid


# ---------------------------------------------------------------------------
# steepest-descent building blocks
# ---------------------------------------------------------------------------

def _inv_sqrt_one_minus_s2_pow_d(s: complex, d: int) -> complex:
    """(1 - s^2)^{-d/2} with cut (-inf, -1] u [1, inf), positive on (-1, 1)."""
    w = 1.0 - s * s
    return cmath.exp(-0.5 * d * cmath.log(w))


def saddle_contribution(ctx: PhaseContext, which: str, n: int, d: int) -> LogComplex:
    """Leading contribution of a simple saddle s0 to I_n:

        -(1/2 pi) * s0 * sqrt(2 pi / (n * s0^2 F''(s0))) * e^{n F(s0)}
                  / ((s0 - tau) (1 - s0^2)^{d/2}).

    The square root is the principal branch of s0^2 F''(s0) = -f''(0) for
    f(t) = F(s0 e^{it}); on the circle contour -f''(0) has nonnegative real
    part at every contributing saddle, which fixes the overall sign
    constructively (no case table needed).
    """
    ss = ctx.saddles
    if which not in ss.contributing:
        raise DomainError(f"saddle {which!r} is not in the contributing set "
                          f"(case {ss.case_tag})")
    s0 = ss.value(which)
    if abs(s0 - ctx.tau) < 1e-12:
        raise DomainError("saddle coincides with the pole at tau")
    f2 = F2_at_saddle(ctx, which)
    mihalf = s0 * s0 * f2              # -f''(0)
    if mihalf.real < -1e-9 * abs(mihalf):
        raise DomainError(f"-f''(0) not in the right half-plane at {which}; "
                          "the circle is not a descent direction here")
    amp = cmath.sqrt(2.0 * math.pi / (n * mihalf))
    pref = (-s0 * amp / (2.0 * math.pi * (s0 - ctx.tau))
            * _inv_sqrt_one_minus_s2_pow_d(s0, d))
    return LogComplex.from_exponent(n * _F_exponent_at_saddle(ctx, which)) \
        * LogComplex.from_complex(pref)


def endpoint_contribution(ctx: PhaseContext, endpoint: int, n: int, d: int,
                          hermitian: bool = False) -> LogComplex:
    """Branch-point contribution at s = +-1 for pairs on the diagonal or
    anti-diagonal over the cut.

    tau < 1 (or endpoint -1 at tau = 1):
        -e^{n F(s)} |2 n F'(s)|^{d/2-1} / ((s - tau) 2^{d-1} Gamma(d/2));
    tau = 1, endpoint +1 (pole merges with the branch point):
        +e^{n F(1)} |2 n F'(1)|^{d/2} / (2^d Gamma(d/2 + 1)).
    """
    if endpoint not in (-1, 1):
        raise DomainError("endpoint must be -1 or +1")
    ss = ctx.saddles
    if endpoint not in ss.endpoints:
        raise DomainError(f"endpoint {endpoint} is not active for this pair "
                          f"(case {ss.case_tag})")
    s = float(endpoint)
    # F has a removable direction here only through the vanishing quadratic
    # factor; F itself and F' stay finite because (z -+ z')^2 kills the pole.
    Fs = _limit_F_at_pm1(ctx, endpoint)
    F1 = _limit_F1_at_pm1(ctx, endpoint)
    if abs(F1) < 1e-10:
        raise DomainError("branch-point formula breaks down at the droplet "
                          "vertex (F'(+-1) = 0); only exact evaluation applies")
    if hermitian and endpoint == 1:
        mag = abs(2.0 * n * F1) ** (0.5 * d)
        pref = mag / (2.0 ** d * math.gamma(0.5 * d + 1.0))
        return LogComplex.from_exponent(n * Fs) * LogComplex.from_complex(pref)
    mag = abs(2.0 * n * F1) ** (0.5 * d - 1.0)
    pref = -mag / ((s - ctx.tau) * 2.0 ** (d - 1) * math.gamma(0.5 * d))
    return LogComplex.from_exponent(n * Fs) * LogComplex.from_complex(pref)


def _limit_F_at_pm1(ctx: PhaseContext, endpoint: int) -> complex:
    """F at s = +-1; finite on the diagonal/anti-diagonal where the matching
    quadratic factor vanishes."""
    z, zp, tau = ctx.z, ctx.zp, ctx.tau
    p2 = (z + zp) ** 2
    m2 = (z - zp) ** 2
    if endpoint == 1:
        if abs(m2) > 1e-18:
            raise DomainError("F(1) is infinite unless z = z'")
        return p2 / 4.0 - cmath.log(1.0 + 0.0j) + math.log(tau)
    if abs(p2) > 1e-18:
        raise DomainError("F(-1) is infinite unless z = -z'")
    return m2 / 4.0 - cmath.log(-1.0 + 0.0j) + math.log(tau)


def _limit_F1_at_pm1(ctx: PhaseContext, endpoint: int) -> complex:
    z, zp = ctx.z, ctx.zp
    p2 = (z + zp) ** 2
    m2 = (z - zp) ** 2
    if endpoint == 1:
        return p2 / 8.0 - 1.0          # = z^2/2 - 1 on the diagonal
    return -m2 / 8.0 + 1.0             # mirror case at s = -1


def residue_term(ctx: PhaseContext, n: int, d: int) -> LogComplex:
    """e^{n F(tau)} (1 - tau^2)^{-d/2} when 1/|a| > tau, else zero."""
    ss = ctx.saddles
    if 1.0 / abs(ss.a) <= ctx.tau:
        return LogComplex.zero()
    Ftau = F_eval(ctx, ctx.tau)
    pref = (1.0 - ctx.tau ** 2) ** (-0.5 * d)
    return LogComplex.from_exponent(n * Ftau) * LogComplex.from_complex(pref)


def in_approximation(ctx: PhaseContext, n: int, d: int) -> LogComplex:
    """Residue plus all contributing saddle and endpoint terms: the
    steepest-descent approximation of I_n."""
    total = residue_term(ctx, n, d)
    for lbl in ctx.saddles.contributing:
        total = total + saddle_contribution(ctx, lbl, n, d)
    for ep in ctx.saddles.endpoints:
        total = total + endpoint_contribution(ctx, ep, n, d,
                                              hermitian=(ctx.tau == 1.0))
    return total
