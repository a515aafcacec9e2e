"""
Special Functions

Bessel J0/J1, the first positive zero j_{0,1} and the Gamma function on
(0, inf). Evaluation goes through scipy.special (Cephes); this module adds the
domain checks and the root finding the eigenvalue constants depend on.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import optimize, special

from .errors import ConvergenceError, DomainError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BesselZero:
    """First positive zero of J0 (dimensionless)."""

    value: float

    @property
    def squared(self) -> float:
        """lambda_1 of the unit disc."""
        return self.value * self.value


def _require_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} requires a finite argument, got {x}")
    return x


def bessel_j0(x: float) -> float:
    """
    Bessel function of the first kind of order zero.

    Args:
        x: Finite real argument

    Returns:
        J0(x)

    Raises:
        DomainError: If x is not finite
    """
    return float(special.j0(_require_finite(x, "bessel_j0")))


def bessel_j1(x: float) -> float:
    """
    Bessel function of the first kind of order one.

    Args:
        x: Finite real argument

    Returns:
        J1(x)

    Raises:
        DomainError: If x is not finite
    """
    return float(special.j1(_require_finite(x, "bessel_j1")))


def bessel_j0_derivative(x: float) -> float:
    """J0'(x) = -J1(x)."""
    return -bessel_j1(x)


@lru_cache(maxsize=1)
def bessel_j0_first_zero() -> BesselZero:
    """
    First positive zero of J0.

    Bisection on [2, 3] brackets the root, Newton's method on J0 with the
    exact derivative -J1 polishes the last digits.

    Returns:
        BesselZero with J0(value) = 0 to within 1e-12
    """
    bracketed = optimize.bisect(bessel_j0, 2.0, 3.0, xtol=1e-10)
    root = optimize.newton(bessel_j0, bracketed, fprime=bessel_j0_derivative, tol=1e-15, maxiter=50)
    root = float(root)

    if not 2.40 < root < 2.41 or abs(bessel_j0(root)) > 1e-12:
        raise ConvergenceError(f"j_0,1 root finding returned an invalid value {root!r}")

    logger.debug(f"j_0,1 = {root:.15f}")
    return BesselZero(value=root)


def gamma_fn(x: float) -> float:
    """
    Gamma function on the positive half-line.

    Args:
        x: Positive finite argument

    Returns:
        Gamma(x)

    Raises:
        DomainError: If x <= 0 or not finite
    """
    x = _require_finite(x, "gamma_fn")
    if x <= 0.0:
        raise DomainError(f"gamma_fn is only defined here for x > 0, got {x}")
    return float(special.gamma(x))


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = _require_finite(x, "log_gamma")
    if x <= 0.0:
        raise DomainError(f"log_gamma is only defined here for x > 0, got {x}")
    return float(special.gammaln(x))


def disc_eigenvalue(radius: float = 1.0) -> float:
    """First Dirichlet Laplacian eigenvalue of a disc, j_{0,1}^2 / R^2."""
    if radius <= 0.0:
        raise DomainError(f"disc radius must be positive, got {radius}")
    return bessel_j0_first_zero().squared / (radius * radius)
