"""Ensemble parameters, weights, elliptic coordinates, and the reduction of
d-dimensional argument pairs to a scalar pair.

Throughout, the "vector square" of w in C^d means sum_k w_k^2, not |w|^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .logcomplex import LogComplex


@dataclass(frozen=True)
class KernelParams:
    """Identifies a finite-n kernel: cut-off n, complex dimension d,
    ellipticity tau, and whether arguments are sqrt(n)-rescaled."""

    n: int
    d: int = 1
    tau: float = 0.5
    rescaled: bool = True

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise DomainError("n and d must be positive integers")
        if not (0.0 < self.tau <= 1.0):
            raise DomainError(f"tau must be in (0, 1], got {self.tau}")
        # tau = 1 is the Hermitian limit; only the fermion path supports it.


@dataclass(frozen=True)
class EllipticCoord:
    """(xi, eta) with Z = scale * cosh(xi + i eta), xi >= 0.

    eta lies in (-pi, pi] when xi > 0 and in [0, pi] on the focal segment
    xi = 0.
    """

    xi: float
    eta: float

    @property
    def w(self) -> complex:
        return complex(self.xi, self.eta)


@dataclass(frozen=True)
class PointCd:
    """A point of C^d stored as a tuple of coordinates."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=complex)

    @property
    def re(self) -> np.ndarray:
        return self.array.real

    @property
    def im(self) -> np.ndarray:
        return self.array.imag

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.array) ** 2))

    @property
    def vec_square(self) -> complex:
        """sum_k Z_k^2 (not the squared norm)."""
        return complex(np.sum(self.array ** 2))

    def conj(self) -> "PointCd":
        return PointCd(tuple(np.conj(self.array)))


def as_point(Z) -> PointCd:
    if isinstance(Z, PointCd):
        return Z
    if isinstance(Z, (complex, float, int)):
        return PointCd((complex(Z),))
    return PointCd(tuple(Z))


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def log_weight_omega(Z: complex, tau: float) -> float:
    """log of omega(Z) = exp(-(Re Z)^2/(1+tau) - (Im Z)^2/(1-tau))."""
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    Z = complex(Z)
    if tau == 1.0:
        if Z.imag != 0.0:
            raise DomainError("tau = 1 requires a real argument")
        return -Z.real ** 2 / 2.0
    return -Z.real ** 2 / (1.0 + tau) - Z.imag ** 2 / (1.0 - tau)


def weight_omega(Z: complex, tau: float) -> LogComplex:
    """The planar Gaussian weight omega(Z), as a positive log-scaled value."""
    return LogComplex(log_weight_omega(Z, tau), 0.0)


# ---------------------------------------------------------------------------
# elliptic coordinates
# ---------------------------------------------------------------------------

def elliptic_coords(Z: complex, scale: float) -> EllipticCoord:
    """Solve Z = scale * cosh(xi + i eta) with the range convention of
    EllipticCoord."""
    u = complex(Z) / scale
    w = np.arccosh(u)       # principal branch: Re >= 0
    xi = float(w.real)
    eta = float(w.imag)
    if xi < 0.0:            # guard against -0.0 and rounding
        xi = 0.0
    if xi == 0.0:
        if eta < 0.0:
            eta = -eta
    else:
        if eta <= -math.pi:
            eta += 2.0 * math.pi
    return EllipticCoord(xi, eta)


def from_elliptic_coords(c: EllipticCoord, scale: float) -> complex:
    return scale * cmath.cosh(complex(c.xi, c.eta))


def xi_tau(tau: float) -> float:
    """Droplet boundary level xi_tau = -log(tau)/2."""
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    return -0.5 * math.log(tau)


def to_elliptic(Z: complex, tau: float) -> EllipticCoord:
    """Elliptic coordinates of Z with foci at +-2 sqrt(tau)."""
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    return elliptic_coords(Z, 2.0 * math.sqrt(tau))


def from_elliptic(c: EllipticCoord, tau: float) -> complex:
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    return from_elliptic_coords(c, 2.0 * math.sqrt(tau))


def conformal_phi(Z: complex, tau: float) -> complex:
    """Exterior conformal map phi(Z) = (Z + sqrt(Z^2 - 4 tau))/2, the branch
    with |phi| >= sqrt(tau).

    Rejected on the open focal segment (-2 sqrt(tau), 2 sqrt(tau)), where the
    two branches have equal modulus and no canonical choice exists.
    """
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    Z = complex(Z)
    f = 2.0 * math.sqrt(tau)
    if Z.imag == 0.0 and abs(Z.real) < f:
        raise DomainError("conformal_phi is single-valued only off the focal segment")
    r = cmath.sqrt(Z * Z - 4.0 * tau)
    p1 = 0.5 * (Z + r)
    p2 = 0.5 * (Z - r)
    return p1 if abs(p1) >= abs(p2) else p2


# ---------------------------------------------------------------------------
# reduction of C^d argument pairs to the scalar pair (z, z')
# ---------------------------------------------------------------------------

def reduce_to_scalar(Z, Zp, tau: float) -> tuple[complex, complex]:
    """Scalars (z, z') with (z +- z')^2 = (Z +- conj(Z'))^2 / (2 tau).

    Principal square roots fix the (z, z') vs (-z, -z') ambiguity, which is
    immaterial: everything downstream depends only on the two squares.
    """
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must be in (0, 1], got {tau}")
    Zv = as_point(Z).array
    Zpv = as_point(Zp).array
    if Zv.shape != Zpv.shape:
        raise DomainError("Z and Z' must have the same dimension")
    plus2 = complex(np.sum((Zv + np.conj(Zpv)) ** 2)) / (2.0 * tau)
    minus2 = complex(np.sum((Zv - np.conj(Zpv)) ** 2)) / (2.0 * tau)
    p = cmath.sqrt(plus2)
    m = cmath.sqrt(minus2)
    return 0.5 * (p + m), 0.5 * (p - m)


def fermi_reduce(X, Xp) -> tuple[float, float]:
    """Real reduction z +- z' = |X +- X'| used on the Hermitian line."""
    Xv = np.asarray(as_point(X).array.real, dtype=float)
    Xpv = np.asarray(as_point(Xp).array.real, dtype=float)
    s = float(np.linalg.norm(Xv + Xpv))
    dlt = float(np.linalg.norm(Xv - Xpv))
    return 0.5 * (s + dlt), 0.5 * (s - dlt)


# ---------------------------------------------------------------------------
# droplet geometry and point counts
# ---------------------------------------------------------------------------

def in_ellipsoid(Z, tau: float) -> bool:
    """Membership of the droplet |Re Z|^2/(1+tau)^2 + |Im Z|^2/(1-tau)^2 < 1."""
    P = as_point(Z)
    re2 = float(np.sum(P.re ** 2))
    im2 = float(np.sum(P.im ** 2))
    if tau == 1.0:
        return im2 == 0.0 and re2 < 4.0
    return re2 / (1.0 + tau) ** 2 + im2 / (1.0 - tau) ** 2 < 1.0


def count_points(n: int, d: int) -> int:
    """Total number of points of the process: binomial(n + d - 1, d)."""
    if n < 1 or d < 1:
        raise DomainError("n and d must be positive")
    return math.comb(n + d - 1, d)
