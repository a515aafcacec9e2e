import math

import numpy as np
import pytest

from qcbounds.beltrami import coefficient_field
from qcbounds.errors import DomainError, MeshError
from qcbounds.fem import (
    Mesh,
    assemble,
    boundary_deviation,
    convergence_table,
    export_mesh,
    field_jacobian_norms,
    jacobian_norms,
    jacobian_sup,
    load_mesh,
    mesh_domain,
    rayleigh_quotient,
    refine_mesh,
    richardson,
    solve_on_domain,
    solve_smallest,
)
from qcbounds.geometry import DomainDescriptor, qc_map


ELLIPSE_K = (math.sqrt(1.25) + 0.5) / (math.sqrt(1.25) - 0.5)


@pytest.fixture(scope="module")
def coarse_disc_mesh():
    return mesh_domain(DomainDescriptor.disc(), 0.25)


def test_mesh_is_valid_and_quasi_uniform(coarse_disc_mesh):
    coarse_disc_mesh.validate()
    assert coarse_disc_mesh.h <= 1.5 * 0.25
    assert boundary_deviation(coarse_disc_mesh, DomainDescriptor.disc()) < 1e-12


@pytest.mark.parametrize("domain", [
    DomainDescriptor.ellipse(0.5),
    DomainDescriptor.petal(),
    DomainDescriptor.square(1.0),
])
def test_boundary_vertices_on_true_boundary(domain):
    mesh = mesh_domain(domain, 0.2)
    assert boundary_deviation(mesh, domain) < 1e-12
    assert mesh.h <= 1.5 * 0.2


def test_refinement_quadruples_and_stays_on_circle(coarse_disc_mesh):
    disc = DomainDescriptor.disc()
    fine = refine_mesh(coarse_disc_mesh, disc)
    assert fine.n_triangles == 4 * coarse_disc_mesh.n_triangles
    boundary = fine.points[fine.boundary_flags]
    assert np.allclose(np.abs(boundary), 1.0, atol=1e-12)
    assert fine.h < coarse_disc_mesh.h


@pytest.mark.parametrize("target_h", [0.1, 0.05])
@pytest.mark.parametrize("domain", [
    DomainDescriptor.disc(),
    DomainDescriptor.ellipse(0.5),
    DomainDescriptor.petal(),
    DomainDescriptor.square(1.0),
], ids=lambda d: d.kind if d.kind != "polygon" else "square")
def test_max_edge_at_working_sizes(domain, target_h):
    mesh = mesh_domain(domain, target_h)
    assert mesh.max_edge() <= 1.5 * target_h
    assert boundary_deviation(mesh, domain) < 1e-12


def test_disc_mesh_is_inscribed():
    deficit = math.pi - mesh_domain(DomainDescriptor.disc(), 0.1).area()
    assert 0.0 < deficit < 0.05


def test_square_mesh_area_is_exact():
    assert mesh_domain(DomainDescriptor.square(1.0), 0.25).area() == pytest.approx(1.0, abs=1e-12)


def test_petal_mesh_area_increases_towards_pi():
    petal = DomainDescriptor.petal()
    mesh = mesh_domain(petal, 0.1)
    areas = [mesh.area()]
    for _ in range(2):
        mesh = refine_mesh(mesh, petal)
        areas.append(mesh.area())
    assert all(area < math.pi for area in areas)
    assert areas[0] < areas[1] < areas[2]
    assert areas[-1] == pytest.approx(math.pi, abs=5e-3)


def test_two_triangle_stiffness_matches_cotangent_weights():
    # unit square split along its diagonal; both triangles have angles 45, 90, 45
    mesh = Mesh(
        vertices=[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        triangles=[(0, 1, 2), (0, 2, 3)],
        boundary_flags=[True, True, True, True],
    )
    S, M = assemble(mesh, dirichlet=False)
    cotangent = np.array([
        [1.0, -0.5, 0.0, -0.5],
        [-0.5, 1.0, -0.5, 0.0],
        [0.0, -0.5, 1.0, -0.5],
        [-0.5, 0.0, -0.5, 1.0],
    ])
    np.testing.assert_allclose(S.toarray(), cotangent, rtol=0.0, atol=1e-12)
    assert M.sum() == pytest.approx(1.0, rel=1e-14)


def test_eigenvalues_scale_with_domain():
    mesh = mesh_domain(DomainDescriptor.square(1.0), 0.25)
    base = solve_smallest(*assemble(mesh), count=3).eigenvalues
    scaled = solve_smallest(*assemble(mesh.scaled(2.0)), count=3).eigenvalues
    np.testing.assert_allclose(np.array(scaled) * 4.0, base, rtol=1e-10)


def test_target_h_must_be_below_inscribed_radius():
    with pytest.raises(MeshError):
        mesh_domain(DomainDescriptor.disc(0.1), 0.2)
    with pytest.raises(DomainError):
        mesh_domain(DomainDescriptor.disc(), 0.0)


def test_mass_and_stiffness_without_dirichlet(coarse_disc_mesh):
    S, M = assemble(coarse_disc_mesh, coefficient_field("spiral"), dirichlet=False)
    assert M.sum() == pytest.approx(coarse_disc_mesh.area(), rel=1e-12)
    ones = np.ones(coarse_disc_mesh.n_vertices)
    assert np.abs(S @ ones).max() < 1e-10
    assert abs(S - S.T).max() < 1e-12


def test_assembly_is_thread_independent(coarse_disc_mesh):
    A = coefficient_field("spiral")
    S1, M1 = assemble(coarse_disc_mesh, A, threads=1)
    S4, M4 = assemble(coarse_disc_mesh, A, threads=4)
    np.testing.assert_allclose(S1.toarray(), S4.toarray(), rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(M1.toarray(), M4.toarray(), rtol=1e-14, atol=1e-14)


def test_eigenvector_rayleigh_quotient(coarse_disc_mesh):
    S, M = assemble(coarse_disc_mesh)
    result = solve_smallest(S, M, count=2)
    assert result.eigenvalues[0] <= result.eigenvalues[1]
    vector = result.eigenvectors[:, 0]
    assert rayleigh_quotient(S, M, vector) == pytest.approx(result.lambda1, rel=1e-8)
    assert float(vector @ (M @ vector)) == pytest.approx(1.0, rel=1e-10)
    assert vector.sum() > 0.0


def test_richardson():
    assert richardson(10.0, 7.0) == pytest.approx((4.0 * 7.0 - 10.0) / 3.0)
    assert richardson(3.0, 3.0) == 3.0


def test_square_laplacian_from_above():
    result = solve_on_domain(DomainDescriptor.square(1.0), refinements=2, target_h=0.25)
    exact = 2.0 * math.pi ** 2
    assert all(level["lambda1"] >= exact for level in result.meshes)
    assert result.extrapolated == pytest.approx(exact, rel=0.02)
    assert result.extrapolated <= min(level["lambda1"] for level in result.meshes)
    assert len(result.meshes) == 2


def test_refinements_must_be_at_least_two():
    with pytest.raises(DomainError):
        solve_on_domain(DomainDescriptor.disc(), refinements=1)


def test_export_and_load(tmp_path, coarse_disc_mesh):
    path = export_mesh(coarse_disc_mesh, tmp_path / "disc.mesh")
    first_line = path.read_text().splitlines()[0]
    assert first_line == f"{coarse_disc_mesh.n_vertices} {coarse_disc_mesh.n_triangles}"
    loaded = load_mesh(path)
    np.testing.assert_array_equal(loaded.vertices, coarse_disc_mesh.vertices)
    np.testing.assert_array_equal(loaded.triangles, coarse_disc_mesh.triangles)
    np.testing.assert_array_equal(loaded.boundary_flags, coarse_disc_mesh.boundary_flags)


def test_load_rejects_malformed_file(tmp_path):
    path = tmp_path / "broken.mesh"
    path.write_text("3 1\n0 0 1\n1 0 1\n")
    with pytest.raises(MeshError):
        load_mesh(path)


def test_convergence_table():
    result = solve_on_domain(DomainDescriptor.disc(), refinements=2, target_h=0.25)
    table = convergence_table(result)
    assert list(table.columns) == ["h", "lambda1", "extrapolated", "error_estimate"]
    assert len(table) == 2
    assert table["h"].iloc[1] < table["h"].iloc[0]


def test_field_jacobian_norms_closed_form():
    norm_beta, dev_norm = field_jacobian_norms(lambda w: 1.0 + np.abs(w) ** 2, beta=2.0)
    assert norm_beta == pytest.approx(math.sqrt(7.0 * math.pi / 3.0), rel=1e-10)
    assert dev_norm == pytest.approx(math.sqrt(math.pi * (23.0 / 6.0 - 8.0 * math.sqrt(2.0) / 3.0)), rel=1e-9)


def test_field_jacobian_norms_rejects_small_beta():
    with pytest.raises(DomainError):
        field_jacobian_norms(lambda w: np.ones_like(np.abs(w)), beta=0.5)


@pytest.mark.parametrize("kind, a", [("identity", 0.0), ("spiral", 0.0), ("ellipse_affine", 0.5), ("petal_map", 0.0)])
def test_volume_preserving_map_norms(kind, a):
    qmap = qc_map(kind, a)
    norm_beta, dev_norm = jacobian_norms(qmap, beta=2.0)
    assert norm_beta == pytest.approx(math.sqrt(math.pi), rel=1e-8)
    assert dev_norm < 1e-6
    assert jacobian_sup(qmap) == pytest.approx(1.0, rel=1e-8)


# ---------------------------------------------------------------------------
# Eigenvalue acceptance runs
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_disc_laplacian(j0_sq):
    result = solve_on_domain(DomainDescriptor.disc(), refinements=3, target_h=0.1)
    assert result.extrapolated == pytest.approx(j0_sq, rel=0.003)
    lambdas = [level["lambda1"] for level in result.meshes]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(lambdas, lambdas[1:]))


@pytest.mark.slow
def test_disc_spiral(j0_sq):
    A = coefficient_field("spiral")
    result = solve_on_domain(DomainDescriptor.disc(), A, refinements=4, target_h=0.1, threads=2)
    assert result.extrapolated == pytest.approx(j0_sq, rel=0.02)
    assert result.extrapolated <= A.K * j0_sq
    assert j0_sq <= min(level["lambda1"] for level in result.meshes)


@pytest.mark.slow
def test_ellipse_affine(j0_sq):
    A = coefficient_field("ellipse_affine", a=0.5)
    assert A.K == pytest.approx(ELLIPSE_K, rel=1e-12)
    result = solve_on_domain(DomainDescriptor.ellipse(0.5), A, refinements=3, target_h=0.1)
    assert result.extrapolated == pytest.approx(j0_sq, rel=0.005)


@pytest.mark.slow
def test_petal(j0_sq):
    A = coefficient_field("petal")
    result = solve_on_domain(DomainDescriptor.petal(), A, refinements=3, target_h=0.1)
    assert result.extrapolated == pytest.approx(j0_sq, rel=0.02)
    assert result.extrapolated <= 2.0 * j0_sq * (1.0 + result.error_estimate / j0_sq)


@pytest.mark.slow
@pytest.mark.parametrize("domain", [DomainDescriptor.ellipse(0.5), DomainDescriptor.petal()])
def test_laplacian_above_faber_krahn(domain, j0_sq):
    result = solve_on_domain(domain, refinements=3, target_h=0.1)
    assert min(level["lambda1"] for level in result.meshes) > j0_sq
    assert result.extrapolated - j0_sq > result.error_estimate


@pytest.mark.slow
def test_square_laplacian_accuracy():
    result = solve_on_domain(DomainDescriptor.square(1.0), refinements=3, target_h=0.1)
    assert result.extrapolated == pytest.approx(2.0 * math.pi ** 2, rel=0.003)
