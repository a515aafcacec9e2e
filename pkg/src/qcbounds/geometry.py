"""
Domains and Quasiconformal Maps

Domain descriptors (disc, ellipse, rose petal, polygon) with area, perimeter
and inscribed radius; the explicit volume-preserving A-quasiconformal maps
(identity, spiral, ellipse_affine, petal) with forward/inverse evaluation and
Jacobians; polar quadrature rules and the Sobolev isometry check.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from matplotlib.path import Path as PolygonPath
from scipy import integrate
from scipy.spatial import cKDTree

from .beltrami import CoefficientField, coefficient_field
from .errors import DomainError, InvalidDomainError, QuadratureError, SingularPointError


logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
PETAL_SCALE = 2.0 * SQRT2
PETAL_HALF_ANGLE = math.pi / 4.0
BOUNDARY_TOLERANCE = 1e-10
DOMAIN_KINDS = ("disc", "ellipse", "petal", "polygon")


@dataclass(frozen=True)
class DomainDescriptor:
    """
    Planar domain.

    Attributes:
        kind: disc, ellipse, petal or polygon
        radius: Disc radius
        a: Ellipse parameter; semi-axes sqrt(a^2+1) + a and sqrt(a^2+1) - a
        vertices: Polygon vertices, counter-clockwise
    """

    kind: str
    radius: float = 1.0
    a: float = 0.0
    vertices: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise InvalidDomainError(f"unknown domain kind '{self.kind}'")
        if self.kind == "disc" and not self.radius > 0.0:
            raise InvalidDomainError(f"disc radius must be positive, got {self.radius}")
        if self.kind == "ellipse" and not self.a >= 0.0:
            raise InvalidDomainError(f"ellipse parameter must be >= 0, got {self.a}")
        if self.kind == "polygon":
            if len(self.vertices) < 3:
                raise InvalidDomainError("polygon needs at least three vertices")
            if abs(_signed_area(self.vertices)) <= 1e-14:
                raise InvalidDomainError("polygon is degenerate (zero area)")

    @classmethod
    def disc(cls, radius: float = 1.0) -> "DomainDescriptor":
        return cls(kind="disc", radius=float(radius))

    @classmethod
    def ellipse(cls, a: float) -> "DomainDescriptor":
        return cls(kind="ellipse", a=float(a))

    @classmethod
    def petal(cls) -> "DomainDescriptor":
        return cls(kind="petal")

    @classmethod
    def polygon(cls, vertices) -> "DomainDescriptor":
        vertices = tuple((float(x), float(y)) for x, y in vertices)
        if len(vertices) >= 3 and _signed_area(vertices) < 0.0:
            vertices = tuple(reversed(vertices))
        return cls(kind="polygon", vertices=vertices)

    @classmethod
    def square(cls, side: float = 1.0) -> "DomainDescriptor":
        return cls.polygon([(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)])

    @property
    def semi_axes(self) -> Tuple[float, float]:
        root = math.sqrt(self.a * self.a + 1.0)
        return root + self.a, root - self.a

    @property
    def is_star_shaped_about_origin(self) -> bool:
        return self.kind in ("disc", "ellipse", "petal")

    @property
    def corner(self) -> Optional[complex]:
        """Boundary corner the mesh is graded towards."""
        return 0j if self.kind == "petal" else None

    def describe(self) -> Dict:
        if self.kind == "disc":
            return {"kind": "disc", "radius": self.radius}
        if self.kind == "ellipse":
            return {"kind": "ellipse", "a": self.a}
        if self.kind == "polygon":
            return {"kind": "polygon", "vertices": [list(v) for v in self.vertices]}
        return {"kind": self.kind}

    def bounding_box(self) -> Tuple[float, float, float, float]:
        if self.kind == "disc":
            return -self.radius, self.radius, -self.radius, self.radius
        if self.kind == "ellipse":
            major, minor = self.semi_axes
            return -major, major, -minor, minor
        if self.kind == "petal":
            # max |y| on the boundary is 4/(3 sqrt3) ~ 0.77
            return 0.0, PETAL_SCALE, -PETAL_SCALE / 2.0, PETAL_SCALE / 2.0
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def radial_function(self, theta: np.ndarray) -> np.ndarray:
        """Boundary distance from the origin along direction theta (star-shaped kinds)."""
        theta = np.asarray(theta, dtype=float)
        if self.kind == "disc":
            return np.full(theta.shape, self.radius)
        if self.kind == "ellipse":
            major, minor = self.semi_axes
            return 1.0 / np.sqrt((np.cos(theta) / major) ** 2 + (np.sin(theta) / minor) ** 2)
        if self.kind == "petal":
            return PETAL_SCALE * np.clip(np.cos(2.0 * theta), 0.0, None)
        raise DomainError(f"domain kind '{self.kind}' has no radial function")

    def contains(self, points, tolerance: float = 0.0) -> np.ndarray:
        """Closed-domain membership test for an array of complex points."""
        points = np.asarray(points, dtype=complex)
        if self.kind == "disc":
            return np.abs(points) <= self.radius * (1.0 + tolerance)
        if self.kind == "ellipse":
            major, minor = self.semi_axes
            return (points.real / major) ** 2 + (points.imag / minor) ** 2 <= 1.0 + tolerance
        if self.kind == "petal":
            theta = np.angle(points)
            inside = (np.abs(theta) <= PETAL_HALF_ANGLE) & (
                np.abs(points) <= self.radial_function(theta) * (1.0 + tolerance) + tolerance
            )
            return inside | (np.abs(points) <= tolerance)
        path = PolygonPath(np.array(self.vertices))
        xy = np.column_stack([points.real.ravel(), points.imag.ravel()])
        return path.contains_points(xy, radius=tolerance).reshape(points.shape)

    def boundary_at(self, t) -> np.ndarray:
        """
        Boundary points at parameters t in [0, 1), periodic with period 1.

        Disc and ellipse use the polar/eccentric angle, the petal its polar
        angle over [-pi/4, pi/4] starting and ending at the corner, polygons
        arc length.
        """
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        if self.kind == "disc":
            return self.radius * np.exp(2j * np.pi * t)
        if self.kind == "ellipse":
            major, minor = self.semi_axes
            angle = 2.0 * np.pi * t
            return major * np.cos(angle) + 1j * minor * np.sin(angle)
        if self.kind == "petal":
            theta = -PETAL_HALF_ANGLE + 2.0 * PETAL_HALF_ANGLE * t
            radius = np.where(t == 0.0, 0.0, self.radial_function(theta))
            return radius * np.exp(1j * theta)
        vertices = np.array([complex(x, y) for x, y in self.vertices])
        edges = np.roll(vertices, -1) - vertices
        lengths = np.abs(edges)
        cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
        s = t * cumulative[-1]
        index = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(vertices) - 1)
        return vertices[index] + edges[index] * ((s - cumulative[index]) / lengths[index])

    def boundary_points(self, n: int) -> np.ndarray:
        """n boundary points equispaced in the boundary parameter."""
        return self.boundary_at(np.arange(n) / n)

    def boundary_parameter(self, points) -> np.ndarray:
        """Inverse of boundary_at for points on a curved boundary."""
        points = np.asarray(points, dtype=complex)
        if self.kind == "disc":
            return np.mod(np.angle(points) / (2.0 * np.pi), 1.0)
        if self.kind == "ellipse":
            major, minor = self.semi_axes
            return np.mod(np.arctan2(points.imag / minor, points.real / major) / (2.0 * np.pi), 1.0)
        if self.kind == "petal":
            t = (np.angle(points) + PETAL_HALF_ANGLE) / (2.0 * PETAL_HALF_ANGLE)
            return np.where(np.abs(points) == 0.0, 0.0, np.clip(t, 0.0, 1.0))
        raise DomainError("polygon boundaries are not parameterized by a curve parameter")

    def boundary_midpoints(self, start, end) -> np.ndarray:
        """
        Points on the boundary halfway (in parameter) between boundary points.

        Polygon boundary edges are straight, so their midpoints are exact.
        """
        start = np.asarray(start, dtype=complex)
        end = np.asarray(end, dtype=complex)
        if self.kind == "polygon":
            return 0.5 * (start + end)
        t_start = self.boundary_parameter(start)
        t_end = self.boundary_parameter(end)
        gap = np.mod(t_end - t_start + 0.5, 1.0) - 0.5
        return self.boundary_at(t_start + 0.5 * gap)

    def project_to_boundary(self, points) -> np.ndarray:
        """Radial projection onto the boundary (polygon points are returned unchanged)."""
        points = np.asarray(points, dtype=complex)
        if self.kind == "polygon":
            return points.copy()
        theta = np.angle(points)
        if self.kind == "petal":
            theta = np.clip(theta, -PETAL_HALF_ANGLE, PETAL_HALF_ANGLE)
            corner = np.abs(points) == 0.0
            return np.where(corner, 0j, self.radial_function(theta) * np.exp(1j * theta))
        return self.radial_function(theta) * np.exp(1j * theta)

    def distance_to_boundary(self, points) -> np.ndarray:
        """Distance from interior points to the boundary curve."""
        points = np.asarray(points, dtype=complex)
        if self.kind == "disc":
            return self.radius - np.abs(points)
        if self.kind == "polygon":
            vertices = np.array([complex(x, y) for x, y in self.vertices])
            start = vertices[None, :]
            edge = (np.roll(vertices, -1) - vertices)[None, :]
            rel = points.ravel()[:, None] - start
            t = np.clip((rel * edge.conjugate()).real / np.abs(edge) ** 2, 0.0, 1.0)
            return np.abs(rel - t * edge).min(axis=1).reshape(points.shape)
        tree = _boundary_tree(self)
        distance, _ = tree.query(np.column_stack([points.real.ravel(), points.imag.ravel()]))
        return distance.reshape(points.shape)


def _signed_area(vertices) -> float:
    xs = np.array([v[0] for v in vertices])
    ys = np.array([v[1] for v in vertices])
    return 0.5 * float(np.dot(xs, np.roll(ys, -1)) - np.dot(np.roll(xs, -1), ys))


_TREE_CACHE: Dict[DomainDescriptor, cKDTree] = {}


def _boundary_tree(d: DomainDescriptor) -> cKDTree:
    tree = _TREE_CACHE.get(d)
    if tree is None:
        dense = d.boundary_points(40000)
        tree = cKDTree(np.column_stack([dense.real, dense.imag]))
        _TREE_CACHE[d] = tree
    return tree


def domain_area(d: DomainDescriptor) -> float:
    """
    Area of a domain.

    Closed forms for disc and ellipse, polar quadrature for the petal and the
    shoelace formula for polygons.
    """
    if d.kind == "disc":
        return math.pi * d.radius ** 2
    if d.kind == "ellipse":
        major, minor = d.semi_axes
        return math.pi * major * minor
    if d.kind == "petal":
        value, _ = integrate.quad(
            lambda t: 0.5 * (PETAL_SCALE * math.cos(2.0 * t)) ** 2,
            -PETAL_HALF_ANGLE, PETAL_HALF_ANGLE, epsabs=1e-14, epsrel=1e-13,
        )
        return value
    area = abs(_signed_area(d.vertices))
    if area <= 0.0:
        raise InvalidDomainError("polygon is degenerate (zero area)")
    return area


def domain_perimeter(d: DomainDescriptor) -> float:
    """Boundary length: closed form, adaptive arc-length quadrature or edge sum."""
    if d.kind == "disc":
        return 2.0 * math.pi * d.radius
    if d.kind == "ellipse":
        major, minor = d.semi_axes
        value, _ = integrate.quad(
            lambda t: math.hypot(major * math.sin(t), minor * math.cos(t)),
            0.0, 2.0 * math.pi, epsabs=1e-13, epsrel=1e-11, limit=200,
        )
        return value
    if d.kind == "petal":
        def speed(t):
            r = PETAL_SCALE * math.cos(2.0 * t)
            dr = -2.0 * PETAL_SCALE * math.sin(2.0 * t)
            return math.hypot(r, dr)

        value, _ = integrate.quad(speed, -PETAL_HALF_ANGLE, PETAL_HALF_ANGLE, epsabs=1e-13, epsrel=1e-11, limit=200)
        return value
    vertices = np.array([complex(x, y) for x, y in d.vertices])
    return float(np.abs(np.roll(vertices, -1) - vertices).sum())


def inscribed_radius(d: DomainDescriptor, grid: int = 101, rounds: int = 40) -> float:
    """
    Radius of the largest disc contained in the domain.

    Disc and ellipse use closed forms; petal and polygon maximize the
    distance to the boundary over an interior grid followed by local grid
    refinement around the best point.
    """
    if d.kind == "disc":
        return d.radius
    if d.kind == "ellipse":
        return d.semi_axes[1]

    xmin, xmax, ymin, ymax = d.bounding_box()
    xs, ys = np.meshgrid(np.linspace(xmin, xmax, grid), np.linspace(ymin, ymax, grid))
    candidates = (xs + 1j * ys).ravel()
    candidates = candidates[d.contains(candidates)]
    distances = d.distance_to_boundary(candidates)
    best = candidates[int(np.argmax(distances))]
    best_distance = float(distances.max())

    step = max(xmax - xmin, ymax - ymin) / (grid - 1)
    offsets = np.linspace(-2.0, 2.0, 9)
    ox, oy = np.meshgrid(offsets, offsets)
    stencil = (ox + 1j * oy).ravel()
    for _ in range(rounds):
        local = best + step * stencil
        local = local[d.contains(local)]
        local_distances = d.distance_to_boundary(local)
        index = int(np.argmax(local_distances))
        if local_distances[index] > best_distance:
            best, best_distance = local[index], float(local_distances[index])
        step *= 0.5

    logger.debug(f"Inscribed disc of {d.kind}: centre {best:.6f}, radius {best_distance:.8f}")
    return best_distance


def polar_rule(d: DomainDescriptor, n_radial: int, n_angular: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polar tensor quadrature over a star-shaped domain.

    Gauss-Legendre in the scaled radius r / R(theta); periodic trapezoid in
    theta for domains surrounding the origin, Gauss-Legendre on the petal's
    angular range.

    Returns:
        (points, weights) with complex points and sum(weights) ~ area
    """
    if not d.is_star_shaped_about_origin:
        raise QuadratureError(f"no polar rule for domain kind '{d.kind}'")

    nodes, node_weights = np.polynomial.legendre.leggauss(n_radial)
    unit_r = 0.5 * (nodes + 1.0)
    unit_w = 0.5 * node_weights

    if d.kind == "petal":
        t_nodes, t_weights = np.polynomial.legendre.leggauss(n_angular)
        theta = PETAL_HALF_ANGLE * t_nodes
        theta_weights = PETAL_HALF_ANGLE * t_weights
    else:
        theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
        theta_weights = np.full(n_angular, 2.0 * np.pi / n_angular)

    R = d.radial_function(theta)
    r = R[:, None] * unit_r[None, :]
    weights = theta_weights[:, None] * (R[:, None] * unit_w[None, :]) * r
    points = r * np.exp(1j * theta)[:, None]
    return points.ravel(), weights.ravel()


def disc_rule(n_radial: int, n_angular: int) -> Tuple[np.ndarray, np.ndarray]:
    """Polar quadrature over the unit disc."""
    return polar_rule(DomainDescriptor.disc(1.0), n_radial, n_angular)


# ---------------------------------------------------------------------------
# Smooth test functions on the unit disc, f(w) = g(|w|^2), vanishing on |w| = 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    name: str
    profile: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]

    __test__ = False

    def value(self, w) -> np.ndarray:
        s = np.minimum(np.abs(np.asarray(w, dtype=complex)) ** 2, 1.0)
        return self.profile(s)

    def gradient(self, w) -> np.ndarray:
        """Gradient as a complex number gx + i gy."""
        w = np.asarray(w, dtype=complex)
        s = np.minimum(np.abs(w) ** 2, 1.0)
        return 2.0 * self.derivative(s) * w


def _bump(s):
    gap = np.maximum(1.0 - s, 1e-300)
    return np.where(s < 1.0, np.exp(1.0 - 1.0 / gap), 0.0)


def _bump_derivative(s):
    gap = np.maximum(1.0 - s, 1e-300)
    return np.where(s < 1.0, -_bump(s) / gap ** 2, 0.0)


TEST_FUNCTIONS: Dict[str, TestFunction] = {
    "quartic": TestFunction("quartic", lambda s: (1.0 - s) ** 2, lambda s: -2.0 * (1.0 - s)),
    "cosine": TestFunction(
        "cosine",
        lambda s: np.cos(0.5 * np.pi * s),
        lambda s: -0.5 * np.pi * np.sin(0.5 * np.pi * s),
    ),
    "bump": TestFunction("bump", _bump, _bump_derivative),
    "zero": TestFunction("zero", lambda s: np.zeros_like(s), lambda s: np.zeros_like(s)),
}


def test_function(name: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[name]
    except KeyError:
        raise DomainError(f"unknown test function '{name}'; choose from {sorted(TEST_FUNCTIONS)}") from None


# ---------------------------------------------------------------------------
# Built-in A-quasiconformal maps onto the unit disc
# ---------------------------------------------------------------------------

MAP_KINDS = ("identity", "spiral", "ellipse_affine", "petal_map")


@dataclass(frozen=True)
class QCMapDescriptor:
    """Explicit volume-preserving A-quasiconformal map of a domain onto the unit disc."""

    kind: str
    a: float = 0.0

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise DomainError(f"unknown map kind '{self.kind}'")
        if self.a < 0.0:
            raise DomainError(f"ellipse_affine requires a >= 0, got {self.a}")

    @property
    def source_domain(self) -> DomainDescriptor:
        if self.kind == "ellipse_affine":
            return DomainDescriptor.ellipse(self.a)
        if self.kind == "petal_map":
            return DomainDescriptor.petal()
        return DomainDescriptor.disc(1.0)

    @property
    def coefficient_field(self) -> CoefficientField:
        if self.kind == "ellipse_affine":
            return coefficient_field("ellipse_affine", a=self.a)
        if self.kind == "petal_map":
            return coefficient_field("petal")
        return coefficient_field(self.kind)

    @property
    def K(self) -> float:
        return self.coefficient_field.K

    @property
    def is_volume_preserving(self) -> bool:
        return True

    def describe(self) -> Dict:
        if self.kind == "ellipse_affine":
            return {"kind": self.kind, "a": self.a}
        return {"kind": self.kind}

    def forward(self, z) -> np.ndarray:
        """Vectorized phi(z) without domain checks."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "identity":
            return z.copy()
        if self.kind == "ellipse_affine":
            return math.sqrt(self.a ** 2 + 1.0) * z - self.a * z.conjugate()
        modulus = np.abs(z)
        safe = np.where(modulus > 0.0, modulus, 1.0)
        if self.kind == "spiral":
            return np.where(modulus > 0.0, z * np.exp(2j * np.log(safe)), 0j)
        # z^{3/2} / (sqrt2 conj(z)^{1/2}) - 1 = z^2 / (sqrt2 |z|) - 1 on the principal branch
        return np.where(modulus > 0.0, z * z / (SQRT2 * safe), 0j) - 1.0

    def inverse(self, w) -> np.ndarray:
        """Vectorized phi^{-1}(w)."""
        w = np.asarray(w, dtype=complex)
        if self.kind == "identity":
            return w.copy()
        if self.kind == "ellipse_affine":
            root = math.sqrt(self.a ** 2 + 1.0)
            return w.real / (root - self.a) + 1j * w.imag / (root + self.a)
        if self.kind == "spiral":
            modulus = np.abs(w)
            safe = np.where(modulus > 0.0, modulus, 1.0)
            return np.where(modulus > 0.0, w * np.exp(-2j * np.log(safe)), 0j)
        shifted = w + 1.0
        return SQRT2 * np.abs(shifted) * np.exp(0.5j * np.angle(shifted))

    def derivatives(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized Wirtinger derivatives (phi_z, phi_zbar) at regular points."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "identity":
            return np.ones(z.shape, dtype=complex), np.zeros(z.shape, dtype=complex)
        if self.kind == "ellipse_affine":
            root = math.sqrt(self.a ** 2 + 1.0)
            return np.full(z.shape, root, dtype=complex), np.full(z.shape, -self.a, dtype=complex)
        modulus = np.abs(z)
        if np.any(modulus == 0.0):
            raise SingularPointError(f"map '{self.kind}' is not differentiable at the origin")
        phase = z / modulus
        if self.kind == "spiral":
            twist = np.exp(2j * np.log(modulus))
            return (1 + 1j) * twist, 1j * phase ** 2 * twist
        return 3.0 / (2.0 * SQRT2) * phase, -1.0 / (2.0 * SQRT2) * phase ** 3


def qc_map(kind: str, a: float = 0.0) -> QCMapDescriptor:
    return QCMapDescriptor(kind=kind, a=float(a))


def _check_in_source(qmap: QCMapDescriptor, z: complex) -> None:
    if not bool(qmap.source_domain.contains(np.array([z]), tolerance=BOUNDARY_TOLERANCE)[0]):
        raise DomainError(f"z = {z} lies outside the source domain of map '{qmap.kind}'")


def map_eval(qmap: QCMapDescriptor, z: complex) -> complex:
    """
    Evaluate phi(z) on the closed source domain.

    Raises:
        DomainError: If z is outside the source domain
    """
    z = complex(z)
    _check_in_source(qmap, z)
    return complex(qmap.forward(np.array([z]))[0])


def map_inverse(qmap: QCMapDescriptor, w: complex) -> complex:
    """Evaluate phi^{-1}(w) on the closed unit disc."""
    w = complex(w)
    if abs(w) > 1.0 + BOUNDARY_TOLERANCE:
        raise DomainError(f"w = {w} lies outside the unit disc")
    return complex(qmap.inverse(np.array([w]))[0])


def map_derivatives(qmap: QCMapDescriptor, z: complex) -> Tuple[complex, complex]:
    d_z, d_zbar = qmap.derivatives(np.array([complex(z)]))
    return complex(d_z[0]), complex(d_zbar[0])


def map_jacobian(qmap: QCMapDescriptor, z: complex) -> float:
    """
    J(z, phi) = |phi_z|^2 - |phi_zbar|^2.

    Raises:
        SingularPointError: At the origin for the spiral and petal maps
    """
    d_z, d_zbar = map_derivatives(qmap, z)
    return abs(d_z) ** 2 - abs(d_zbar) ** 2


def map_dilatation(qmap: QCMapDescriptor, z: complex) -> complex:
    """phi_zbar / phi_z; agrees with the coefficient field's mu."""
    d_z, d_zbar = map_derivatives(qmap, z)
    return d_zbar / d_z


def jacobian_array(qmap: QCMapDescriptor, z) -> np.ndarray:
    d_z, d_zbar = qmap.derivatives(z)
    return np.abs(d_z) ** 2 - np.abs(d_zbar) ** 2


def builtin_map_for(A: CoefficientField, d: DomainDescriptor) -> Optional[QCMapDescriptor]:
    """Built-in map agreed with the (field, domain) pair, if there is one."""
    unit_disc = d.kind == "disc" and d.radius == 1.0
    if A.kind == "identity" and unit_disc:
        return qc_map("identity")
    if A.kind == "spiral" and unit_disc:
        return qc_map("spiral")
    if A.kind == "ellipse_affine" and d.kind == "ellipse" and math.isclose(A.params.get("a", 0.0), d.a):
        return qc_map("ellipse_affine", a=d.a)
    if A.kind == "petal" and d.kind == "petal":
        return qc_map("petal_map")
    return None


def composed_gradient(qmap: QCMapDescriptor, f: TestFunction, z: np.ndarray) -> np.ndarray:
    """Gradient of f o phi at z, as a complex number gx + i gy."""
    d_z, d_zbar = qmap.derivatives(z)
    grad_f = f.gradient(qmap.forward(z))
    dx_phi = d_z + d_zbar
    dy_phi = 1j * (d_z - d_zbar)
    gx = (dx_phi.conjugate() * grad_f).real
    gy = (dy_phi.conjugate() * grad_f).real
    return gx + 1j * gy


def a_energy_density(A: CoefficientField, z: np.ndarray, gradient: np.ndarray) -> np.ndarray:
    """<A(z) g, g> for complex-encoded gradients g."""
    a11, a12, a22 = A.matrix_array(z)
    gx, gy = gradient.real, gradient.imag
    return a11 * gx * gx + 2.0 * a12 * gx * gy + a22 * gy * gy


def dirichlet_norm_on_disc(f: TestFunction, order: int = 64) -> float:
    """||grad f | L^2(D)|| for a radial test function, by Gauss-Legendre in r."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    r = 0.5 * (nodes + 1.0)
    radial_gradient = 2.0 * r * f.derivative(r * r)
    return math.sqrt(2.0 * math.pi * float(np.sum(0.5 * weights * radial_gradient ** 2 * r)))


def isometry_check(qmap: QCMapDescriptor, f, order: int = 64) -> Tuple[float, float]:
    """
    Compare ||f o phi | L^{1,2}(Omega, A)|| with ||f | L^{1,2}(D)||.

    Args:
        qmap: Built-in map with its agreed coefficient field
        f: Test function or catalog name
        order: Gauss order in each polar direction

    Returns:
        (lhs, rhs) Dirichlet seminorms; they agree for A-quasiconformal maps
    """
    f = test_function(f) if isinstance(f, str) else f
    points, weights = polar_rule(qmap.source_domain, order, 2 * order)
    density = a_energy_density(qmap.coefficient_field, points, composed_gradient(qmap, f, points))
    if not np.all(np.isfinite(density)):
        raise QuadratureError(f"non-finite integrand in isometry check for map '{qmap.kind}'")

    lhs = math.sqrt(float(np.dot(weights, density)))
    rhs = dirichlet_norm_on_disc(f, order)
    logger.debug(f"Isometry check {qmap.kind}/{f.name}: lhs={lhs:.12g} rhs={rhs:.12g}")
    return lhs, rhs
