"""
Beltrami Correspondence

Converts between symmetric det = 1 coefficient matrices A and complex
dilatations mu, evaluates the quasiconformality coefficient K, and provides
the built-in coefficient fields (identity, spiral, ellipse_affine, petal and
the general family mu(z) = c * (z / conj z)^m).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.stats import qmc

from .errors import (
    DomainError,
    EllipticityViolationError,
    InvalidMatrixError,
    SingularPointError,
)


logger = logging.getLogger(__name__)

DET_TOLERANCE = 1e-10
MU_LIMIT = 1.0 - 1e-12
SINGULAR_RADIUS = 1e-14


@dataclass(frozen=True)
class CoefficientMatrix:
    """Symmetric 2x2 matrix; a21 = a12 is implied."""

    a11: float
    a12: float
    a22: float

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a12

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])


@dataclass(frozen=True)
class Dilatation:
    """Value of mu at a point."""

    re: float
    im: float

    def __post_init__(self):
        if abs(complex(self.re, self.im)) >= MU_LIMIT:
            raise EllipticityViolationError(
                f"|mu| = {abs(complex(self.re, self.im)):.15g} is not strictly below 1"
            )

    @classmethod
    def from_complex(cls, mu: complex) -> "Dilatation":
        return cls(re=float(mu.real), im=float(mu.imag))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)


def matrix_eigenvalues(A: CoefficientMatrix) -> Tuple[float, float]:
    """Closed-form eigenvalues (ascending) of a symmetric 2x2 matrix."""
    half_trace = 0.5 * A.trace
    radius = math.hypot(0.5 * (A.a11 - A.a22), A.a12)
    return half_trace - radius, half_trace + radius


def dilatation_from_matrix(A: CoefficientMatrix) -> Dilatation:
    """
    Complex dilatation induced by a coefficient matrix.

    mu = (a22 - a11 - 2i a12) / det(I + A)

    Args:
        A: Symmetric matrix with det A = 1 and a11 > 0

    Returns:
        Dilatation with |mu| < 1

    Raises:
        InvalidMatrixError: If det A differs from 1 or a11 <= 0
        EllipticityViolationError: If |mu| >= 1
    """
    if not all(math.isfinite(v) for v in (A.a11, A.a12, A.a22)):
        raise InvalidMatrixError(f"matrix entries must be finite: {A}")
    if abs(A.det - 1.0) > DET_TOLERANCE:
        raise InvalidMatrixError(f"det A = {A.det:.15g}, expected 1")
    if A.a11 <= 0.0:
        raise InvalidMatrixError(f"a11 = {A.a11} must be positive")

    # det(I + A) = 1 + tr A + det A
    denominator = 1.0 + A.trace + A.det
    mu = complex(A.a22 - A.a11, -2.0 * A.a12) / denominator
    return Dilatation.from_complex(mu)


def matrix_from_dilatation(mu) -> CoefficientMatrix:
    """
    Coefficient matrix agreed with a dilatation.

    Args:
        mu: Dilatation or complex number with |mu| < 1

    Returns:
        CoefficientMatrix with det = 1

    Raises:
        EllipticityViolationError: If |mu| >= 1
    """
    value = mu.value if isinstance(mu, Dilatation) else complex(mu)
    modulus_sq = value.real * value.real + value.imag * value.imag
    if math.sqrt(modulus_sq) >= MU_LIMIT:
        raise EllipticityViolationError(f"|mu| = {math.sqrt(modulus_sq):.15g} is not strictly below 1")

    scale = 1.0 - modulus_sq
    return CoefficientMatrix(
        a11=abs(1.0 - value) ** 2 / scale,
        a12=-2.0 * value.imag / scale,
        a22=abs(1.0 + value) ** 2 / scale,
    )


def ellipticity_constant(mu_sup: float) -> float:
    """
    Quasiconformality coefficient K = (1 + |mu|_inf) / (1 - |mu|_inf).

    Raises:
        EllipticityViolationError: If mu_sup >= 1
        DomainError: If mu_sup is negative
    """
    mu_sup = float(mu_sup)
    if mu_sup < 0.0:
        raise DomainError(f"sup |mu| cannot be negative, got {mu_sup}")
    if mu_sup >= 1.0:
        raise EllipticityViolationError(f"sup |mu| = {mu_sup} must be below 1")
    return (1.0 + mu_sup) / (1.0 - mu_sup)


def dilatation_bound(K: float) -> float:
    """(K - 1) / (K + 1), the largest |mu| compatible with K."""
    if K < 1.0:
        raise DomainError(f"K must be >= 1, got {K}")
    return (K - 1.0) / (K + 1.0)


@dataclass(frozen=True)
class CoefficientField:
    """
    Coefficient field A(z) defined through its dilatation
    mu(z) = coefficient * (z / conj z)^winding.

    Fields with nonzero winding are undefined at the origin.
    """

    kind: str
    coefficient: complex = 0j
    winding: int = 0
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if abs(self.coefficient) >= MU_LIMIT:
            raise EllipticityViolationError(
                f"field '{self.kind}' has sup |mu| = {abs(self.coefficient):.15g} >= 1"
            )

    @property
    def mu_sup(self) -> float:
        return abs(self.coefficient)

    @property
    def K(self) -> float:
        return ellipticity_constant(self.mu_sup)

    @property
    def is_singular_at_origin(self) -> bool:
        return self.winding != 0

    @property
    def is_identity(self) -> bool:
        return self.coefficient == 0

    def mu(self, z: complex) -> complex:
        z = complex(z)
        if self.winding == 0:
            return self.coefficient
        if abs(z) < SINGULAR_RADIUS:
            raise SingularPointError(f"field '{self.kind}' is undefined at z = {z}")
        return self.coefficient * (z / z.conjugate()) ** self.winding

    def eval(self, z: complex) -> CoefficientMatrix:
        return matrix_from_dilatation(self.mu(z))

    def mu_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorized mu over an array of complex points."""
        points = np.asarray(points, dtype=complex)
        if self.winding == 0:
            return np.full(points.shape, self.coefficient, dtype=complex)
        modulus = np.abs(points)
        if np.any(modulus < SINGULAR_RADIUS):
            bad = points[modulus < SINGULAR_RADIUS][0]
            raise SingularPointError(f"field '{self.kind}' is undefined at z = {bad}")
        phase = points / modulus
        return self.coefficient * phase ** (2 * self.winding)

    def matrix_array(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized (a11, a12, a22) over an array of complex points."""
        mu = self.mu_array(points)
        scale = 1.0 - np.abs(mu) ** 2
        a11 = np.abs(1.0 - mu) ** 2 / scale
        a12 = -2.0 * mu.imag / scale
        a22 = np.abs(1.0 + mu) ** 2 / scale
        return a11, a12, a22

    def describe(self) -> Dict[str, Any]:
        description: Dict[str, Any] = {"kind": self.kind}
        description.update(self.params)
        if self.kind == "from_dilatation":
            description.update({
                "re": self.coefficient.real,
                "im": self.coefficient.imag,
                "winding": self.winding,
            })
        return description


BUILTIN_FIELDS = ("identity", "spiral", "ellipse_affine", "petal")


def coefficient_field(name: str, **params) -> CoefficientField:
    """
    Look up a coefficient field by name.

    Args:
        name: One of identity, spiral, ellipse_affine, petal, from_dilatation
        **params: a for ellipse_affine; re, im, winding for from_dilatation

    Returns:
        CoefficientField

    Raises:
        DomainError: For unknown names or invalid parameters
    """
    if name == "identity":
        return CoefficientField(kind="identity")
    if name == "spiral":
        return CoefficientField(kind="spiral", coefficient=(1 + 1j) / 2, winding=1)
    if name == "ellipse_affine":
        a = float(params.get("a", 0.0))
        if a < 0.0:
            raise DomainError(f"ellipse_affine requires a >= 0, got {a}")
        return CoefficientField(
            kind="ellipse_affine",
            coefficient=complex(-a / math.sqrt(a * a + 1.0), 0.0),
            params={"a": a},
        )
    if name == "petal":
        return CoefficientField(kind="petal", coefficient=complex(-1.0 / 3.0, 0.0), winding=1)
    if name == "from_dilatation":
        winding = params.get("winding", 0)
        if int(winding) != winding:
            raise DomainError(f"winding must be an integer, got {winding}")
        return CoefficientField(
            kind="from_dilatation",
            coefficient=complex(float(params.get("re", 0.0)), float(params.get("im", 0.0))),
            winding=int(winding),
        )
    raise DomainError(f"unknown coefficient field '{name}'")


def spiral_polar_matrix(theta: float) -> CoefficientMatrix:
    """Spiral field in polar form: 3I + 2 sqrt2 [[-cos, -sin], [-sin, cos]](2 theta + pi/4)."""
    angle = 2.0 * theta + math.pi / 4.0
    c = 2.0 * math.sqrt(2.0)
    return CoefficientMatrix(
        a11=3.0 - c * math.cos(angle),
        a12=-c * math.sin(angle),
        a22=3.0 + c * math.cos(angle),
    )


def petal_polar_matrix(theta: float) -> CoefficientMatrix:
    """Petal field in polar form."""
    cos_sq = math.cos(theta) ** 2
    sin_sq = math.sin(theta) ** 2
    return CoefficientMatrix(
        a11=2.0 * cos_sq + 0.5 * sin_sq,
        a12=0.75 * math.sin(2.0 * theta),
        a22=0.5 * cos_sq + 2.0 * sin_sq,
    )


@dataclass
class FieldValidationReport:
    """Outcome of sampling a coefficient field over a domain."""

    passed: bool
    K: float
    samples: int
    worst_det_error: float
    worst_eigenvalue_violation: float
    worst_point: Optional[complex]
    errors: list = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "K": self.K,
            "samples": self.samples,
            "worst_det_error": self.worst_det_error,
            "worst_eigenvalue_violation": self.worst_eigenvalue_violation,
            "worst_point": None if self.worst_point is None else [self.worst_point.real, self.worst_point.imag],
            "errors": list(self.errors),
        }


def validate_field(A: CoefficientField, domain, samples: int, seed: Optional[int] = None) -> FieldValidationReport:
    """
    Check det = 1 and the ellipticity bounds 1/K <= eig <= K at quasi-random
    points of a domain.

    Args:
        A: Coefficient field
        domain: Object providing contains(points) and bounding_box()
        samples: Number of interior sample points (>= 1)
        seed: Scrambling seed for the Halton sequence; None gives the plain sequence

    Returns:
        FieldValidationReport (failures are reported, not raised)
    """
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")

    K = A.K
    xmin, xmax, ymin, ymax = domain.bounding_box()
    sampler = qmc.Halton(d=2, scramble=seed is not None, seed=seed)

    collected = []
    remaining = samples
    while remaining > 0:
        unit = sampler.random(max(2 * remaining, 16))
        points = (xmin + (xmax - xmin) * unit[:, 0]) + 1j * (ymin + (ymax - ymin) * unit[:, 1])
        points = points[domain.contains(points)]
        if A.is_singular_at_origin:
            points = points[np.abs(points) >= 1e-12]
        collected.append(points[:remaining])
        remaining -= len(collected[-1])
    points = np.concatenate(collected)

    a11, a12, a22 = A.matrix_array(points)
    det_error = np.abs(a11 * a22 - a12 * a12 - 1.0)
    half_trace = 0.5 * (a11 + a22)
    radius = np.hypot(0.5 * (a11 - a22), a12)
    eig_min = half_trace - radius
    eig_max = half_trace + radius
    violation = np.maximum.reduce([1.0 / K - eig_min, eig_max - K, np.zeros_like(eig_min)])

    errors = []
    if np.any(a11 <= 0.0):
        errors.append("a11 is not positive at some sample")
    if det_error.max() > DET_TOLERANCE:
        errors.append(f"det A deviates from 1 by {det_error.max():.3e}")
    if violation.max() > 1e-9 * K:
        errors.append(f"eigenvalues leave [1/K, K] by {violation.max():.3e}")

    worst_index = int(np.argmax(violation + det_error))
    report = FieldValidationReport(
        passed=not errors,
        K=K,
        samples=len(points),
        worst_det_error=float(det_error.max()),
        worst_eigenvalue_violation=float(violation.max()),
        worst_point=complex(points[worst_index]),
        errors=errors,
    )
    logger.info(
        f"Validated field '{A.kind}' on {len(points)} samples: "
        f"{'PASS' if report.passed else 'FAIL'} (K = {K:.6g})"
    )
    return report
