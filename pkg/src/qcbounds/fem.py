"""
Finite Element Eigenvalue Solver

Conforming P1 elements for the first Dirichlet eigenvalues of -div(A grad f)
on meshed planar domains:

- mesh generation (boundary nodes on the true boundary, triangular lattice
  interior, Delaunay triangulation, corner grading for the petal)
- red refinement with boundary midpoints moved onto the curve
- threaded assembly with deterministic accumulation
- shift-invert eigensolve at shift 0 and Richardson extrapolation
- quadrature of the Jacobian norms used by the stability bounds
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from matplotlib.path import Path as PolygonPath
from scipy import linalg, sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu
from scipy.spatial import Delaunay, cKDTree

from .beltrami import SINGULAR_RADIUS, CoefficientField, coefficient_field
from .errors import (
    AssemblyError,
    ConvergenceError,
    DomainError,
    MeshError,
    QuadratureError,
    SingularPointError,
    SingularSystemError,
)
from .geometry import DomainDescriptor, QCMapDescriptor, disc_rule, inscribed_radius, jacobian_array


logger = logging.getLogger(__name__)

MIN_TRIANGLE_AREA = 1e-14
NODE_SPACING_FACTOR = 0.9
BOUNDARY_CLEARANCE = 0.45
GRADING_LAYERS = 3
DENSE_BOUNDARY_SAMPLES = 20000
DENSE_SOLVER_LIMIT = 200
EIGEN_TOLERANCE = 1e-12
MAX_ITERATIONS = 10000
DEFAULT_NORM_ORDER = 96

# barycentric coordinates of the interior 3-point rule (degree 2)
QUADRATURE_POINTS = np.array([
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
])


@dataclass
class Mesh:
    """
    Triangle mesh.

    Attributes:
        vertices: (N, 2) coordinates
        triangles: (T, 3) counter-clockwise vertex indices
        boundary_flags: (N,) True for vertices on the boundary
        h: Longest edge
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_flags: np.ndarray
    h: Optional[float] = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        self.boundary_flags = np.asarray(self.boundary_flags, dtype=bool).reshape(-1)
        if self.h is None:
            self.h = self.max_edge()

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def points(self) -> np.ndarray:
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def signed_areas(self) -> np.ndarray:
        x = self.vertices[self.triangles, 0]
        y = self.vertices[self.triangles, 1]
        return 0.5 * ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))

    def area(self) -> float:
        return float(self.signed_areas().sum())

    def max_edge(self) -> float:
        if self.n_triangles == 0:
            return 0.0
        edges, _, _ = _edge_table(self.triangles)
        lengths = np.linalg.norm(self.vertices[edges[:, 0]] - self.vertices[edges[:, 1]], axis=1)
        return float(lengths.max())

    def boundary_edges(self) -> np.ndarray:
        edges, _, counts = _edge_table(self.triangles)
        return edges[counts == 1]

    def scaled(self, c: float) -> "Mesh":
        return Mesh(self.vertices * c, self.triangles.copy(), self.boundary_flags.copy())

    def validate(self) -> None:
        """
        Raises:
            MeshError: On degenerate or inverted triangles, non-conforming
                edges, or boundary flags that disagree with the boundary edges
        """
        if self.n_triangles == 0:
            raise MeshError("mesh has no triangles")
        if self.triangles.min() < 0 or self.triangles.max() >= self.n_vertices:
            raise MeshError("triangle references a vertex index out of range")
        if len(self.boundary_flags) != self.n_vertices:
            raise MeshError("boundary_flags length does not match the vertex count")

        areas = self.signed_areas()
        if areas.min() < MIN_TRIANGLE_AREA:
            worst = int(np.argmin(areas))
            raise MeshError(f"triangle {worst} has signed area {areas[worst]:.3e}")

        edges, _, counts = _edge_table(self.triangles)
        if counts.max() > 2:
            raise MeshError("non-conforming mesh: an edge is shared by more than two triangles")

        on_boundary = np.zeros(self.n_vertices, dtype=bool)
        on_boundary[edges[counts == 1].ravel()] = True
        if not np.array_equal(on_boundary, self.boundary_flags):
            mismatched = int(np.count_nonzero(on_boundary != self.boundary_flags))
            raise MeshError(f"boundary flags disagree with the boundary edges at {mismatched} vertices")


def _edge_table(triangles: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unique edges, per-triangle edge indices for (v0v1, v1v2, v2v0), and edge multiplicities."""
    local = np.sort(triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
    edges, inverse, counts = np.unique(local, axis=0, return_inverse=True, return_counts=True)
    return edges, inverse.reshape(-1, 3), counts


# ---------------------------------------------------------------------------
# Mesh generation
# ---------------------------------------------------------------------------

def _local_size(d: DomainDescriptor, points: np.ndarray, spacing: float) -> np.ndarray:
    """Target node spacing; halves three times towards a graded corner."""
    size = np.full(np.shape(points), spacing)
    if d.corner is None:
        return size
    distance = np.abs(np.asarray(points) - d.corner)
    for layer in range(1, GRADING_LAYERS + 1):
        radius = 4.0 * spacing / 2 ** (layer - 1)
        size = np.where(distance < radius, spacing / 2 ** layer, size)
    return size


def _boundary_nodes(d: DomainDescriptor, spacing: float) -> np.ndarray:
    """Boundary nodes in curve order, all lying exactly on the boundary."""
    if d.kind == "polygon":
        vertices = np.array([complex(x, y) for x, y in d.vertices])
        nodes = []
        for start, end in zip(vertices, np.roll(vertices, -1)):
            count = max(int(math.ceil(abs(end - start) / spacing)), 1)
            nodes.append(start + (end - start) * (np.arange(count) / count))
        return np.concatenate(nodes)

    dense_t = np.linspace(0.0, 1.0, DENSE_BOUNDARY_SAMPLES + 1)
    arc = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(d.boundary_at(dense_t))))])
    total = arc[-1]

    if d.corner is None:
        count = max(int(math.ceil(total / spacing)), 3)
        return d.boundary_at(np.interp(total * np.arange(count) / count, arc, dense_t))

    def size_at(s: float) -> float:
        point = d.boundary_at(np.interp(s, arc, dense_t))
        return float(_local_size(d, np.array([point]), spacing)[0])

    params = []
    s = 0.0
    while total - s > 0.5 * size_at(s):
        params.append(np.interp(s, arc, dense_t))
        s += size_at(s)
    return d.boundary_at(np.array(params))


def _lattice(box: Tuple[float, float, float, float], spacing: float) -> np.ndarray:
    xmin, xmax, ymin, ymax = box
    dy = spacing * math.sqrt(3.0) / 2.0
    rows = []
    for i, y in enumerate(np.arange(ymin, ymax + dy, dy)):
        offset = 0.5 * spacing if i % 2 else 0.0
        xs = np.arange(xmin + offset, xmax + spacing, spacing)
        rows.append(xs + 1j * y)
    return np.concatenate(rows)


def _interior_nodes(d: DomainDescriptor, spacing: float, boundary: np.ndarray) -> np.ndarray:
    """
    Lattice nodes kept clear of the boundary and of finer nodes already placed.

    Zones are filled from the graded corner outwards so coarse lattice points
    never crowd the finer ones.
    """
    xmin, xmax, ymin, ymax = d.bounding_box()
    zones = [(0.0, math.inf, spacing)]
    if d.corner is not None:
        radii = [4.0 * spacing / 2 ** k for k in range(GRADING_LAYERS)] + [0.0]
        zones = [(radii[0], math.inf, spacing)] + [
            (radii[k + 1], radii[k], spacing / 2 ** (k + 1)) for k in range(GRADING_LAYERS)
        ]
        zones.reverse()

    accepted = [boundary]
    for inner, outer, zone_spacing in zones:
        box = (xmin, xmax, ymin, ymax)
        if math.isfinite(outer):
            c = d.corner
            box = (max(xmin, c.real - outer), min(xmax, c.real + outer),
                   max(ymin, c.imag - outer), min(ymax, c.imag + outer))
        candidates = _lattice(box, zone_spacing)
        if d.corner is not None:
            distance = np.abs(candidates - d.corner)
            candidates = candidates[(distance >= inner) & (distance < outer)]
        candidates = candidates[d.contains(candidates)]
        if len(candidates) == 0:
            continue
        clearance = BOUNDARY_CLEARANCE * _local_size(d, candidates, spacing)
        candidates = candidates[d.distance_to_boundary(candidates) >= clearance]
        if len(candidates) == 0:
            continue

        placed = np.concatenate(accepted)
        tree = cKDTree(np.column_stack([placed.real, placed.imag]))
        nearest, _ = tree.query(np.column_stack([candidates.real, candidates.imag]))
        candidates = candidates[nearest >= 0.5 * zone_spacing]
        accepted.append(candidates)

    return np.concatenate(accepted[1:]) if len(accepted) > 1 else np.empty(0, dtype=complex)


def mesh_domain(d: DomainDescriptor, target_h: float) -> Mesh:
    """
    Quasi-uniform triangulation of a domain.

    Args:
        d: Domain descriptor
        target_h: Target edge length, smaller than the inscribed radius

    Returns:
        Validated Mesh whose boundary vertices lie on the true boundary

    Raises:
        DomainError: If target_h is not positive
        MeshError: If the domain cannot be meshed at this size
    """
    if not target_h > 0.0:
        raise DomainError(f"target_h must be positive, got {target_h}")
    rho = inscribed_radius(d)
    if target_h >= rho:
        raise MeshError(f"target_h = {target_h} is not smaller than the inscribed radius {rho:.6g}")

    start_time = datetime.now()
    spacing = NODE_SPACING_FACTOR * target_h
    boundary = _boundary_nodes(d, spacing)
    interior = _interior_nodes(d, spacing, boundary)
    points = np.concatenate([boundary, interior])
    xy = np.column_stack([points.real, points.imag])

    try:
        triangles = Delaunay(xy).simplices.astype(np.int64)
    except Exception as e:
        raise MeshError(f"Delaunay triangulation failed for {d.kind}: {e}") from e

    x, y = xy[triangles, 0], xy[triangles, 1]
    signed = 0.5 * ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))
    flip = signed < 0.0
    triangles[flip] = triangles[flip][:, [0, 2, 1]]

    outline = PolygonPath(np.column_stack([boundary.real, boundary.imag]))
    centroids = xy[triangles].mean(axis=1)
    keep = outline.contains_points(centroids) & (np.abs(signed) >= MIN_TRIANGLE_AREA)
    triangles = triangles[keep]

    used = np.zeros(len(points), dtype=bool)
    used[triangles.ravel()] = True
    renumber = np.cumsum(used) - 1
    flags = np.arange(len(points)) < len(boundary)
    mesh = Mesh(xy[used], renumber[triangles], flags[used])
    mesh.validate()

    elapsed = (datetime.now() - start_time).total_seconds()
    logger.info(
        f"Meshed {d.kind}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
        f"h = {mesh.h:.4g} ({elapsed:.2f}s)"
    )
    return mesh


def refine_mesh(mesh: Mesh, d: Optional[DomainDescriptor] = None) -> Mesh:
    """
    Red refinement: every triangle splits into four through its edge midpoints.

    Args:
        mesh: Mesh to refine
        d: Domain whose curved boundary receives the new boundary midpoints

    Returns:
        Refined, validated Mesh
    """
    edges, triangle_edges, counts = _edge_table(mesh.triangles)
    points = mesh.points
    start, end = points[edges[:, 0]], points[edges[:, 1]]
    midpoints = 0.5 * (start + end)
    on_boundary = counts == 1
    if d is not None and np.any(on_boundary):
        midpoints[on_boundary] = d.boundary_midpoints(start[on_boundary], end[on_boundary])

    n = mesh.n_vertices
    vertices = np.vstack([mesh.vertices, np.column_stack([midpoints.real, midpoints.imag])])
    flags = np.concatenate([mesh.boundary_flags, on_boundary])

    v0, v1, v2 = mesh.triangles.T
    e01, e12, e20 = (triangle_edges + n).T
    triangles = np.vstack([
        np.column_stack([v0, e01, e20]),
        np.column_stack([e01, v1, e12]),
        np.column_stack([e20, e12, v2]),
        np.column_stack([e01, e12, e20]),
    ])

    refined = Mesh(vertices, triangles, flags)
    refined.validate()
    return refined


def boundary_deviation(mesh: Mesh, d: DomainDescriptor) -> float:
    """Largest distance between a boundary vertex and its radial projection onto the boundary."""
    boundary = mesh.points[mesh.boundary_flags]
    if d.kind == "polygon":
        return float(d.distance_to_boundary(boundary).max())
    return float(np.abs(boundary - d.project_to_boundary(boundary)).max())


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def _element_matrices(vertices: np.ndarray, triangles: np.ndarray, A: CoefficientField,
                      nudge: float) -> Tuple[np.ndarray, np.ndarray]:
    """Local stiffness and mass matrices, shape (T, 3, 3) each."""
    x = vertices[triangles, 0]
    y = vertices[triangles, 1]
    area = 0.5 * ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))
    b = np.column_stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]])
    c = np.column_stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]])

    corners = x + 1j * y
    nodes = corners @ QUADRATURE_POINTS.T
    if A.is_singular_at_origin:
        nodes = np.where(np.abs(nodes) < SINGULAR_RADIUS, nodes + nudge, nodes)

    try:
        a11, a12, a22 = A.matrix_array(nodes)
    except (SingularPointError, DomainError) as e:
        raise AssemblyError(f"coefficient '{A.kind}' failed at a quadrature node: {e}") from e
    if not (np.all(np.isfinite(a11)) and np.all(np.isfinite(a12)) and np.all(np.isfinite(a22))):
        bad = nodes[~(np.isfinite(a11) & np.isfinite(a12) & np.isfinite(a22))][0]
        raise AssemblyError(f"coefficient '{A.kind}' is not finite at quadrature node {bad}")

    m11 = ((a11[:, 0] + a11[:, 1] + a11[:, 2]) / 3.0)[:, None, None]
    m12 = ((a12[:, 0] + a12[:, 1] + a12[:, 2]) / 3.0)[:, None, None]
    m22 = ((a22[:, 0] + a22[:, 1] + a22[:, 2]) / 3.0)[:, None, None]
    bi, bj = b[:, :, None], b[:, None, :]
    ci, cj = c[:, :, None], c[:, None, :]
    stiffness = (bi * (m11 * bj + m12 * cj) + ci * (m12 * bj + m22 * cj)) / (4.0 * area[:, None, None])
    stiffness = 0.5 * (stiffness + stiffness.transpose(0, 2, 1))

    mass = (area / 12.0)[:, None, None] * (np.ones((3, 3)) + np.eye(3))[None, :, :]
    return stiffness, mass


def assemble(mesh: Mesh, A: Optional[CoefficientField] = None, threads: int = 1,
             dirichlet: bool = True) -> Tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """
    Assemble the P1 stiffness and mass matrices.

    Element contributions are computed in thread-parallel chunks and
    concatenated in triangle order before summation, so the result does not
    depend on the thread count.

    Args:
        mesh: Validated mesh
        A: Coefficient field (identity when None)
        threads: Worker threads
        dirichlet: Eliminate boundary rows and columns

    Returns:
        (stiffness, mass) as CSR matrices

    Raises:
        AssemblyError: If the coefficient cannot be evaluated at a quadrature node
    """
    A = A if A is not None else coefficient_field("identity")
    threads = max(int(threads), 1)
    nudge = 1e-12 * max(mesh.h, 1.0)
    chunks = np.array_split(np.arange(mesh.n_triangles), threads)

    def work(indices):
        return _element_matrices(mesh.vertices, mesh.triangles[indices], A, nudge)

    if threads == 1:
        results = [work(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))

    stiffness_local = np.concatenate([r[0] for r in results])
    mass_local = np.concatenate([r[1] for r in results])
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()

    n = mesh.n_vertices
    S = sparse.coo_matrix((stiffness_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((mass_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    if dirichlet:
        interior = np.flatnonzero(~mesh.boundary_flags)
        S = S[interior][:, interior].tocsr()
        M = M[interior][:, interior].tocsr()

    logger.debug(f"Assembled '{A.kind}' on {mesh.n_triangles} triangles ({threads} threads): {S.shape[0]} unknowns")
    return S, M


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------

@dataclass
class EigenResult:
    """
    Smallest eigenvalues with extrapolation data.

    Attributes:
        eigenvalues: Ascending eigenvalues on the finest mesh
        mesh_h: Longest edge of the finest mesh
        extrapolated: h -> 0 estimate of lambda_1
        error_estimate: |lambda_1(finest) - extrapolated|, widened by the observed rate
        iterations: Factorized solves performed by the eigensolver
        meshes: Per-level {h, lambda1, vertices}
        observed_rate: Convergence order fitted from the last three levels
        eigenvectors: M-normalized vectors on the finest mesh (interior unknowns)
    """

    eigenvalues: List[float]
    mesh_h: float
    extrapolated: float
    error_estimate: float
    iterations: int
    meshes: List[Dict[str, Any]] = field(default_factory=list)
    observed_rate: Optional[float] = None
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def lambda1(self) -> float:
        return self.eigenvalues[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalues": list(self.eigenvalues),
            "mesh_h": self.mesh_h,
            "extrapolated": self.extrapolated,
            "error_estimate": self.error_estimate,
            "iterations": self.iterations,
            "observed_rate": self.observed_rate,
            "meshes": [dict(m) for m in self.meshes],
        }


def rayleigh_quotient(S, M, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ (S @ x)) / float(x @ (M @ x))


def _normalize(M, vectors: np.ndarray) -> np.ndarray:
    """Unit M-norm and nonnegative mean for each column."""
    vectors = np.array(vectors, dtype=float, copy=True)
    for i in range(vectors.shape[1]):
        v = vectors[:, i]
        v /= math.sqrt(float(v @ (M @ v)))
        if v.sum() < 0.0:
            v *= -1.0
    return vectors


def solve_smallest(S, M, count: int = 1) -> EigenResult:
    """
    The count smallest eigenvalues of S x = lambda M x.

    Shift-invert Lanczos at shift 0 with a single sparse LU factorization of
    S; small systems go through the dense symmetric solver.

    Raises:
        SingularSystemError: If S cannot be factorized or is not positive definite
        ConvergenceError: If the iteration does not converge
    """
    n = S.shape[0]
    if count < 1:
        raise DomainError(f"eigen count must be >= 1, got {count}")
    if n == 0:
        raise SingularSystemError("system has no interior unknowns")
    count = min(count, n)

    if n <= DENSE_SOLVER_LIMIT or count >= n - 1:
        try:
            values, vectors = linalg.eigh(S.toarray(), M.toarray(), subset_by_index=[0, count - 1])
        except (linalg.LinAlgError, ValueError) as e:
            raise SingularSystemError(f"dense generalized eigensolve failed: {e}") from e
        solves = 1
    else:
        try:
            factor = splu(sparse.csc_matrix(S))
        except RuntimeError as e:
            raise SingularSystemError(f"stiffness factorization failed: {e}") from e

        solves = 0

        def apply_inverse(x):
            nonlocal solves
            solves += 1
            return factor.solve(np.asarray(x, dtype=float).ravel())

        operator = LinearOperator((n, n), matvec=apply_inverse, dtype=float)
        try:
            values, vectors = eigsh(
                S, k=count, M=M, sigma=0.0, which="LM", OPinv=operator,
                v0=np.ones(n), tol=EIGEN_TOLERANCE, maxiter=MAX_ITERATIONS,
            )
        except ArpackNoConvergence as e:
            raise ConvergenceError(f"eigensolver did not converge in {MAX_ITERATIONS} iterations") from e

    order = np.argsort(values)
    values = np.asarray(values)[order]
    vectors = _normalize(M, np.asarray(vectors)[:, order])
    if not np.all(np.isfinite(values)) or values[0] <= 0.0:
        raise SingularSystemError(f"nonpositive or non-finite eigenvalue {values[0]:.6g}")

    return EigenResult(
        eigenvalues=[float(v) for v in values],
        mesh_h=float("nan"),
        extrapolated=float(values[0]),
        error_estimate=0.0,
        iterations=solves,
        eigenvectors=vectors,
    )


def richardson(coarse: float, fine: float, order: float = 2.0) -> float:
    """h -> 0 estimate from values at h and h/2 with error O(h^order)."""
    factor = 2.0 ** order
    return (factor * fine - coarse) / (factor - 1.0)


def solve_on_domain(d: DomainDescriptor, A: Optional[CoefficientField] = None, refinements: int = 3,
                    target_h: float = 0.1, eigen_count: int = 1, threads: int = 1) -> EigenResult:
    """
    Solve on nested meshes h, h/2, h/4, ... and extrapolate lambda_1.

    Args:
        d: Domain
        A: Coefficient field (Laplacian when None)
        refinements: Number of mesh levels (>= 2)
        target_h: Edge length of the coarsest mesh
        eigen_count: Eigenvalues per level
        threads: Assembly threads

    Returns:
        EigenResult for the finest mesh with extrapolated lambda_1; the
        extrapolation never exceeds the smallest computed lambda_1
    """
    if refinements < 2:
        raise DomainError(f"refinements must be >= 2, got {refinements}")
    A = A if A is not None else coefficient_field("identity")

    start_time = datetime.now()
    mesh = mesh_domain(d, target_h)
    levels: List[Dict[str, Any]] = []
    result: Optional[EigenResult] = None
    solves = 0

    for level in range(refinements):
        if level > 0:
            mesh = refine_mesh(mesh, d)
        S, M = assemble(mesh, A, threads=threads)
        result = solve_smallest(S, M, eigen_count)
        solves += result.iterations
        levels.append({"h": mesh.h, "lambda1": result.lambda1, "vertices": mesh.n_vertices})
        logger.info(
            f"Level {level}: h = {mesh.h:.5g}, {mesh.n_vertices} vertices, lambda_1 = {result.lambda1:.10g}"
        )

    lambdas = [entry["lambda1"] for entry in levels]
    extrapolated = richardson(lambdas[-2], lambdas[-1])
    error_estimate = abs(lambdas[-1] - extrapolated)

    observed_rate = None
    if len(lambdas) >= 3:
        first_gap = lambdas[-3] - lambdas[-2]
        second_gap = lambdas[-2] - lambdas[-1]
        if first_gap > 0.0 and second_gap > 0.0 and first_gap != second_gap:
            observed_rate = math.log2(first_gap / second_gap)
            if observed_rate > 0.0:
                observed = lambdas[-1] - second_gap / (2.0 ** observed_rate - 1.0)
                error_estimate = max(error_estimate, abs(extrapolated - observed))

    extrapolated = min(extrapolated, min(lambdas))
    elapsed = (datetime.now() - start_time).total_seconds()
    logger.info(
        f"Extrapolated lambda_1 = {extrapolated:.10g} +/- {error_estimate:.3g} "
        f"({A.kind} on {d.kind}, {refinements} levels, {elapsed:.1f}s)"
    )

    return EigenResult(
        eigenvalues=result.eigenvalues,
        mesh_h=mesh.h,
        extrapolated=extrapolated,
        error_estimate=error_estimate,
        iterations=solves,
        meshes=levels,
        observed_rate=observed_rate,
        eigenvectors=result.eigenvectors,
    )


# ---------------------------------------------------------------------------
# Jacobian norms
# ---------------------------------------------------------------------------

def field_jacobian_norms(jacobian: Callable[[np.ndarray], np.ndarray], beta: float,
                         order: int = DEFAULT_NORM_ORDER) -> Tuple[float, float]:
    """
    ||J | L^beta(D)|| and ||1 - J^{1/2} | L^2(D)|| for a Jacobian field on the unit disc.

    Args:
        jacobian: Vectorized w -> J(w) over complex points of the disc
        beta: Integrability exponent >= 1
        order: Gauss order in each polar direction
    """
    if not beta >= 1.0:
        raise DomainError(f"beta must be >= 1, got {beta}")
    points, weights = disc_rule(order, 2 * order)
    values = np.abs(np.asarray(jacobian(points), dtype=float))
    if not np.all(np.isfinite(values)):
        raise QuadratureError("Jacobian is not finite at a quadrature node")

    norm_beta = float(np.dot(weights, values ** beta)) ** (1.0 / beta)
    dev_norm = math.sqrt(float(np.dot(weights, (1.0 - np.sqrt(values)) ** 2)))
    return norm_beta, dev_norm


def inverse_jacobian(qmap: QCMapDescriptor) -> Callable[[np.ndarray], np.ndarray]:
    """w -> |J(w, phi^-1)| = 1 / |J(phi^-1(w), phi)|."""
    def evaluate(w: np.ndarray) -> np.ndarray:
        return 1.0 / np.abs(jacobian_array(qmap, qmap.inverse(w)))
    return evaluate


def jacobian_norms(qmap: QCMapDescriptor, beta: float, order: int = DEFAULT_NORM_ORDER) -> Tuple[float, float]:
    """
    Jacobian norms of phi^-1 over the unit disc by polar Gauss quadrature.

    Returns:
        (norm_beta, dev_norm)
    """
    return field_jacobian_norms(inverse_jacobian(qmap), beta, order)


def jacobian_sup(qmap: QCMapDescriptor, order: int = DEFAULT_NORM_ORDER) -> float:
    """Largest |J(w, phi^-1)| over the quadrature nodes."""
    points, _ = disc_rule(order, 2 * order)
    return float(np.max(inverse_jacobian(qmap)(points)))


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def export_mesh(mesh: Mesh, path) -> Path:
    """Write 'V T', then V lines 'x y flag', then T lines 'i j k' (0-based)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(f"{mesh.n_vertices} {mesh.n_triangles}\n")
        for (x, y), flag in zip(mesh.vertices, mesh.boundary_flags):
            f.write(f"{format(float(x), '.17g')} {format(float(y), '.17g')} {int(flag)}\n")
        for i, j, k in mesh.triangles:
            f.write(f"{int(i)} {int(j)} {int(k)}\n")
    logger.info(f"Wrote mesh ({mesh.n_vertices} vertices, {mesh.n_triangles} triangles) to {path}")
    return path


def load_mesh(path) -> Mesh:
    """
    Read the text mesh format written by export_mesh.

    Raises:
        MeshError: If the file is malformed
    """
    try:
        with open(path, "r") as f:
            lines = [line.split() for line in f if line.strip()]
        n_vertices, n_triangles = (int(v) for v in lines[0])
        vertex_rows = lines[1:1 + n_vertices]
        triangle_rows = lines[1 + n_vertices:1 + n_vertices + n_triangles]
        if len(vertex_rows) != n_vertices or len(triangle_rows) != n_triangles:
            raise ValueError("record count does not match the header")
        vertices = np.array([[float(r[0]), float(r[1])] for r in vertex_rows])
        flags = np.array([int(r[2]) != 0 for r in vertex_rows])
        triangles = np.array([[int(v) for v in r] for r in triangle_rows], dtype=np.int64)
    except (OSError, ValueError, IndexError) as e:
        raise MeshError(f"cannot read mesh file {path}: {e}") from e
    return Mesh(vertices, triangles, flags)


def convergence_table(result: EigenResult) -> pd.DataFrame:
    """One row per mesh level: h, lambda1, extrapolated, error_estimate."""
    return pd.DataFrame(
        {
            "h": [m["h"] for m in result.meshes],
            "lambda1": [m["lambda1"] for m in result.meshes],
            "extrapolated": result.extrapolated,
            "error_estimate": result.error_estimate,
        },
        columns=["h", "lambda1", "extrapolated", "error_estimate"],
    )


def export_convergence_csv(result: EigenResult, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    convergence_table(result).to_csv(path, index=False, float_format="%.12g")
    return path
