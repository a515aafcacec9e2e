"""
Eigenvalue Bounds

Every bound evaluator returns a BoundResult carrying the value, whether it
bounds from above or below, which eigenvalue it constrains (the Laplacian
lambda_1(Omega) or the divergence-form lambda_1(A, Omega)), an echo of its
inputs and the hypotheses it rests on.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from .constants import (
    LogValue,
    PoincareConstantQuery,
    QuasidiscConstantQuery,
    bounded_jacobian_poincare_constant,
    m_beta_minimum,
    poincare_constant_upper,
    stability_constant,
)
from .errors import DomainError, QuadratureError
from .geometry import (
    QCMapDescriptor,
    a_energy_density,
    composed_gradient,
    jacobian_array,
    polar_rule,
    test_function,
)
from .specfun import bessel_j0_first_zero, bessel_j1


logger = logging.getLogger(__name__)

UPPER = "upper"
LOWER = "lower"
LAPLACIAN = "laplacian"
COEFFICIENT = "coefficient"

AREA_PI_ASSUMPTION = "theorem is stated for area pi; evaluated at area {area:.12g}"


@dataclass
class BoundResult:
    """
    One evaluated bound.

    Attributes:
        name: Bound identifier (payne_weinberger, rfk, ...)
        kind: upper or lower
        value: Float, or LogValue when the bound overflows double precision
        inputs: Parameters exactly as passed
        assumptions: Hypotheses the bound depends on
        operator: laplacian or coefficient
        details: Auxiliary quantities (minimizers, constants)
    """

    name: str
    kind: str
    value: Union[float, LogValue]
    inputs: Dict[str, Any]
    assumptions: List[str]
    operator: str = COEFFICIENT
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_log(self) -> bool:
        return isinstance(self.value, LogValue)

    @property
    def log10_value(self) -> float:
        if self.is_log:
            return self.value.log10_magnitude
        return math.log10(self.value) if self.value > 0.0 else -math.inf

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"name": self.name, "kind": self.kind, "operator": self.operator}
        if self.is_log:
            result["log10_value"] = self.value.log10_magnitude
        else:
            result["value"] = self.value
        result["inputs"] = dict(self.inputs)
        result["assumptions"] = list(self.assumptions)
        if self.details:
            result["details"] = dict(self.details)
        return result


def _j0_squared() -> float:
    return bessel_j0_first_zero().squared


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive, got {value}")


def _require_nonnegative(name: str, value: float) -> None:
    if not value >= 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be nonnegative, got {value}")


def _require_K(K: float) -> None:
    if not K >= 1.0 or not math.isfinite(K):
        raise DomainError(f"K must be >= 1, got {K}")


def _require_beta(beta: float) -> None:
    if not beta > 1.0 or not math.isfinite(beta):
        raise DomainError(f"beta must exceed 1, got {beta}")


def _area_assumptions(area: float, name: str) -> List[str]:
    if math.isclose(area, math.pi, rel_tol=1e-12):
        return []
    logger.warning(f"{name}: theorem hypothesis is area pi, got {area:.12g}")
    return [AREA_PI_ASSUMPTION.format(area=area)]


def payne_weinberger_upper(area: float, perimeter: float) -> BoundResult:
    """
    Payne-Weinberger upper bound on the Laplacian lambda_1 from area and perimeter.

    Raises:
        DomainError: If perimeter^2 < 4 pi area (no such planar domain)
    """
    _require_positive("area", area)
    _require_positive("perimeter", perimeter)
    isoperimetric_ratio = perimeter ** 2 / (4.0 * math.pi * area)
    if isoperimetric_ratio < 1.0 - 1e-12:
        raise DomainError(
            f"perimeter {perimeter} and area {area} violate the isoperimetric inequality"
        )

    j = bessel_j0_first_zero().value
    deficit = max(isoperimetric_ratio - 1.0, 0.0)
    factor = 1.0 / bessel_j1(j) ** 2 - 1.0
    value = math.pi * j * j / area * (1.0 + factor * deficit)
    return BoundResult(
        name="payne_weinberger",
        kind=UPPER,
        value=value,
        inputs={"area": area, "perimeter": perimeter},
        assumptions=["simply connected domain", "rectifiable boundary"],
        operator=LAPLACIAN,
    )


def rfk_lower(area: float) -> BoundResult:
    """Rayleigh-Faber-Krahn: lambda_1(Omega) >= j^2 / R*^2 with pi R*^2 = area."""
    _require_positive("area", area)
    radius_sq = area / math.pi
    return BoundResult(
        name="rfk",
        kind=LOWER,
        value=_j0_squared() / radius_sq,
        inputs={"area": area},
        assumptions=["bounded planar domain"],
        operator=LAPLACIAN,
    )


def makai_hayman_lower(rho: float, alpha: float) -> BoundResult:
    _require_positive("rho", rho)
    _require_positive("alpha", alpha)
    return BoundResult(
        name="makai_hayman",
        kind=LOWER,
        value=alpha / (rho * rho),
        inputs={"rho": rho, "alpha": alpha},
        assumptions=["simply connected domain", "alpha supplied externally; no value is fixed for it"],
        operator=LAPLACIAN,
    )


def monotonicity_upper(rho: float) -> BoundResult:
    """Domain monotonicity against the largest inscribed disc: lambda_1 <= j^2 / rho^2."""
    _require_positive("rho", rho)
    return BoundResult(
        name="monotonicity",
        kind=UPPER,
        value=_j0_squared() / (rho * rho),
        inputs={"rho": rho},
        assumptions=["rho is the radius of a disc contained in the domain"],
        operator=LAPLACIAN,
    )


VOLUME_PRESERVING_ASSUMPTIONS = [
    "domain admits a volume-preserving A-quasiconformal map onto the unit disc",
    "domain is beta-regular",
]


def sandwich_volume_preserving(K: float) -> Tuple[BoundResult, BoundResult]:
    """
    j^2 <= lambda_1(A, Omega) <= K j^2 for volume-preserving A-quasiconformal domains.

    Returns:
        (lower, upper)
    """
    _require_K(K)
    j_sq = _j0_squared()
    lower = BoundResult(
        name="sandwich_lower",
        kind=LOWER,
        value=j_sq,
        inputs={"K": K},
        assumptions=list(VOLUME_PRESERVING_ASSUMPTIONS),
    )
    upper = BoundResult(
        name="sandwich_upper",
        kind=UPPER,
        value=K * j_sq,
        inputs={"K": K},
        assumptions=list(VOLUME_PRESERVING_ASSUMPTIONS),
    )
    return lower, upper


def thm52_upper(K: float, beta: float, rho: float, jac_norm_beta: float, jac_dev_norm: float,
                area: float) -> BoundResult:
    """
    Upper bound for A-quasiconformal beta-regular domains:

        K j^2 + A^2 K^2 (j^2/rho^2)^2 (pi^{1/(2b)} + ||J||_b^{1/2}) ||1 - J^{1/2}||_2

    with A = A_{4b/(b-1),2} of the unit disc.
    """
    _require_K(K)
    _require_beta(beta)
    _require_positive("rho", rho)
    _require_nonnegative("jac_norm_beta", jac_norm_beta)
    _require_nonnegative("jac_dev_norm", jac_dev_norm)
    _require_positive("area", area)

    j_sq = _j0_squared()
    a_constant = stability_constant(beta, math.pi)
    inscribed_eigenvalue = j_sq / (rho * rho)
    correction = (
        a_constant ** 2 * K ** 2 * inscribed_eigenvalue ** 2
        * (math.pi ** (1.0 / (2.0 * beta)) + math.sqrt(jac_norm_beta))
        * jac_dev_norm
    )
    return BoundResult(
        name="thm52",
        kind=UPPER,
        value=K * j_sq + correction,
        inputs={
            "K": K, "beta": beta, "rho": rho, "jac_norm_beta": jac_norm_beta,
            "jac_dev_norm": jac_dev_norm, "area": area,
        },
        assumptions=[
            "A-quasiconformal map onto the unit disc",
            "domain is beta-regular",
            "rho is the radius of the largest inscribed disc",
        ] + _area_assumptions(area, "thm52"),
        details={"stability_constant": a_constant},
    )


def stability_gap_bound(c_n: float, beta: float, jac_norm_beta: float, jac_dev_norm: float,
                        area: float) -> BoundResult:
    """
    |lambda_n[A, Omega] - lambda_n[A, target]| <=
        c_n A^2 (|target|^{1/(2b)} + ||J||_b^{1/2}) ||1 - J^{1/2}||_2
    """
    _require_nonnegative("c_n", c_n)
    _require_beta(beta)
    _require_nonnegative("jac_norm_beta", jac_norm_beta)
    _require_nonnegative("jac_dev_norm", jac_dev_norm)
    _require_positive("area", area)

    a_constant = stability_constant(beta, area)
    value = (
        c_n * a_constant ** 2
        * (area ** (1.0 / (2.0 * beta)) + math.sqrt(jac_norm_beta))
        * jac_dev_norm
    )
    return BoundResult(
        name="stability_gap",
        kind=UPPER,
        value=value,
        inputs={"c_n": c_n, "beta": beta, "jac_norm_beta": jac_norm_beta, "jac_dev_norm": jac_dev_norm, "area": area},
        assumptions=[
            "domain is A-quasiconformal beta-regular with respect to the target",
            "c_n = max of the squared n-th eigenvalues, supplied by the caller",
        ],
        details={"stability_constant": a_constant},
    )


def quasidisc_upper(K: float, rho: float, jac_dev_norm: float, area: float) -> BoundResult:
    """
    K-quasidisc bound K j^2 + M_b(K) K^2 (j^2/rho^2)^2 ||1 - J^{1/2}||_2.

    The value is a LogValue unless jac_dev_norm = 0, where it collapses to K j^2.

    Raises:
        DomainError: If K <= 1
    """
    query = QuasidiscConstantQuery(K=K, area=area)
    _require_positive("rho", rho)
    _require_nonnegative("jac_dev_norm", jac_dev_norm)

    j_sq = _j0_squared()
    inputs = {"K": K, "rho": rho, "jac_dev_norm": jac_dev_norm, "area": area}
    assumptions = [
        "domain is a K-quasidisc",
        "A-quasiconformal map onto the unit disc",
        "rho is the radius of the largest inscribed disc",
    ] + _area_assumptions(area, "quasidisc")

    if jac_dev_norm == 0.0:
        return BoundResult(name="quasidisc", kind=UPPER, value=K * j_sq, inputs=inputs, assumptions=assumptions)

    minimum = m_beta_minimum(query)
    correction = minimum.value * LogValue.from_float(K * K * (j_sq / (rho * rho)) ** 2 * jac_dev_norm)
    value = correction + LogValue.from_float(K * j_sq)
    return BoundResult(
        name="quasidisc",
        kind=UPPER,
        value=value,
        inputs=inputs,
        assumptions=assumptions,
        details={
            "log10_m_beta": minimum.value.log10_magnitude,
            "beta_minus_one": minimum.beta_excess,
            "p": minimum.p,
        },
    )


def poincare_lower(jac_sup: float = 1.0) -> BoundResult:
    """
    lambda_1(A, Omega) >= 1 / B_{2,2}(A, Omega)^2 >= j^2 / ||J_{phi^-1}||_inf.

    jac_sup = 1 (volume-preserving maps) gives the lower half of the sandwich.
    """
    _require_positive("jac_sup", jac_sup)
    constant = bounded_jacobian_poincare_constant(jac_sup, math.pi)
    return BoundResult(
        name="poincare_lower",
        kind=LOWER,
        value=1.0 / (constant * constant),
        inputs={"jac_sup": jac_sup},
        assumptions=[
            "A-quasiconformal map onto the unit disc",
            "Jacobian of the inverse map is essentially bounded by jac_sup",
        ],
        details={"poincare_constant": constant},
    )


def weighted_poincare_check(qmap: QCMapDescriptor, r: float, f, order: int = 64) -> Tuple[float, float]:
    """
    Both sides of the weighted Sobolev-Poincare inequality

        (int_Omega |g|^r h)^{1/r} <= B_{r,2} (int_Omega <A grad g, grad g>)^{1/2}

    for g = f o phi and h = |J(z, phi)|, by polar quadrature over the source
    domain, with B_{r,2} = poincare_constant_upper(r, pi).

    Returns:
        (lhs, rhs)
    """
    f = test_function(f) if isinstance(f, str) else f
    constant = poincare_constant_upper(PoincareConstantQuery(r=r, area=math.pi))

    points, weights = polar_rule(qmap.source_domain, order, 2 * order)
    values = np.abs(f.value(qmap.forward(points)))
    weight = np.abs(jacobian_array(qmap, points))
    energy = a_energy_density(qmap.coefficient_field, points, composed_gradient(qmap, f, points))
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(energy))):
        raise QuadratureError(f"non-finite integrand in weighted Poincare check for map '{qmap.kind}'")

    lhs = float(np.dot(weights, values ** r * weight)) ** (1.0 / r)
    rhs = constant * math.sqrt(max(float(np.dot(weights, energy)), 0.0))
    logger.debug(f"Weighted Poincare {qmap.kind}/{f.name}, r={r}: {lhs:.10g} <= {rhs:.10g}")
    return lhs, rhs
