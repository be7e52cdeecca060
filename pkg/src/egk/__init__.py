"""Elliptic Ginibre correlation kernels in d complex dimensions.

Exact finite-n evaluation (Hermite sums, contour integrals, the Hermitian
fermion limit), the saddle-point machinery behind their asymptotics, every
limiting kernel, a matrix sampler, and convergence-rate measurement tools.
"""

from .errors import DomainError, EgkError, NonConvergenceError, ResourceError
from .logcomplex import LogComplex, rel_diff
from .model import (EllipticCoord, KernelParams, PointCd, conformal_phi,
                    count_points, from_elliptic, in_ellipsoid,
                    reduce_to_scalar, to_elliptic, weight_omega, xi_tau)
from .quadrature import QuadratureSpec, circle_trapezoid, gauss_legendre, semi_infinite
from .special import (airy_ai, airy_ai_integral, bessel_j_hat, gamma_fn,
                      hermite_weighted_seq)

__all__ = [
    "DomainError", "EgkError", "NonConvergenceError", "ResourceError",
    "LogComplex", "rel_diff",
    "EllipticCoord", "KernelParams", "PointCd", "conformal_phi",
    "count_points", "from_elliptic", "in_ellipsoid", "reduce_to_scalar",
    "to_elliptic", "weight_omega", "xi_tau",
    "QuadratureSpec", "circle_trapezoid", "gauss_legendre", "semi_infinite",
    "airy_ai", "airy_ai_integral", "bessel_j_hat", "gamma_fn",
    "hermite_weighted_seq",
]

__version__ = "0.1.0"
