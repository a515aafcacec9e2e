import cmath
import math

import numpy as np
import pytest

from qcbounds.beltrami import (
    CoefficientMatrix,
    Dilatation,
    coefficient_field,
    dilatation_bound,
    dilatation_from_matrix,
    ellipticity_constant,
    matrix_eigenvalues,
    matrix_from_dilatation,
    petal_polar_matrix,
    spiral_polar_matrix,
    validate_field,
)
from qcbounds.errors import (
    DomainError,
    EllipticityViolationError,
    InvalidMatrixError,
    SingularPointError,
)
from qcbounds.geometry import DomainDescriptor


SPIRAL_K = (2.0 + math.sqrt(2.0)) / (2.0 - math.sqrt(2.0))


def test_identity_has_zero_dilatation():
    mu = dilatation_from_matrix(CoefficientMatrix(1.0, 0.0, 1.0))
    assert mu.value == 0
    assert ellipticity_constant(abs(mu)) == 1.0


def test_diagonal_dilatation_to_matrix():
    A = matrix_from_dilatation(complex(-0.4472136, 0.0))
    assert A.a11 == pytest.approx(2.6180340, rel=1e-6)
    assert A.a12 == 0.0
    assert A.a22 == pytest.approx(0.3819660, rel=1e-6)
    assert ellipticity_constant(0.4472136) == pytest.approx(2.618034, rel=1e-6)


def test_non_unit_determinant_is_rejected():
    with pytest.raises(InvalidMatrixError):
        dilatation_from_matrix(CoefficientMatrix(2.0, 0.0, 2.0))


def test_negative_a11_is_rejected():
    with pytest.raises(InvalidMatrixError):
        dilatation_from_matrix(CoefficientMatrix(-1.0, 0.0, -1.0))


@pytest.mark.parametrize("mu", [1.0, 1j, complex(0.8, 0.7)])
def test_unit_dilatation_loses_ellipticity(mu):
    with pytest.raises(EllipticityViolationError):
        matrix_from_dilatation(mu)
    with pytest.raises(EllipticityViolationError):
        Dilatation.from_complex(mu)


def test_dilatation_bound_inverts_K():
    for K in (1.0, 1.5, 4.0):
        assert ellipticity_constant(dilatation_bound(K)) == pytest.approx(K, rel=1e-14)
    with pytest.raises(DomainError):
        dilatation_bound(0.5)


def test_round_trip_random_dilatations():
    rng = np.random.default_rng(20240611)
    radius = 0.95 * np.sqrt(rng.random(1000))
    angle = 2.0 * np.pi * rng.random(1000)
    for mu in radius * np.exp(1j * angle):
        A = matrix_from_dilatation(mu)
        assert A.det == pytest.approx(1.0, abs=1e-12)
        back = dilatation_from_matrix(A)
        assert abs(back.value - mu) < 1e-12
        again = matrix_from_dilatation(back)
        assert again.a11 == pytest.approx(A.a11, abs=1e-10)
        assert again.a12 == pytest.approx(A.a12, abs=1e-10)
        assert again.a22 == pytest.approx(A.a22, abs=1e-10)


def test_matrix_eigenvalues_bracketed_by_K():
    mu = 0.3 + 0.4j
    K = ellipticity_constant(abs(mu))
    low, high = matrix_eigenvalues(matrix_from_dilatation(mu))
    assert low == pytest.approx(1.0 / K, rel=1e-12)
    assert high == pytest.approx(K, rel=1e-12)


def test_spiral_field_at_one():
    A = coefficient_field("spiral")
    M = A.eval(1.0)
    assert (M.a11, M.a12, M.a22) == pytest.approx((1.0, -2.0, 5.0), abs=1e-12)
    assert A.K == pytest.approx(SPIRAL_K, rel=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.4, 1.3, 2.9, -2.2])
def test_spiral_polar_form(theta):
    A = coefficient_field("spiral").eval(0.7 * cmath.exp(1j * theta))
    P = spiral_polar_matrix(theta)
    assert (A.a11, A.a12, A.a22) == pytest.approx((P.a11, P.a12, P.a22), abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.3, -0.6, 0.75])
def test_petal_polar_form(theta):
    A = coefficient_field("petal").eval(1.1 * cmath.exp(1j * theta))
    P = petal_polar_matrix(theta)
    assert (A.a11, A.a12, A.a22) == pytest.approx((P.a11, P.a12, P.a22), abs=1e-12)
    assert coefficient_field("petal").K == pytest.approx(2.0, rel=1e-14)


def test_ellipse_affine_K():
    a = 0.5
    s = math.sqrt(a * a + 1.0)
    assert coefficient_field("ellipse_affine", a=a).K == pytest.approx((s + a) / (s - a), rel=1e-12)


def test_singular_fields_reject_origin():
    with pytest.raises(SingularPointError):
        coefficient_field("spiral").mu(0.0)
    with pytest.raises(SingularPointError):
        coefficient_field("petal").mu_array(np.array([0.5, 0.0]))
    assert coefficient_field("ellipse_affine", a=0.5).mu(0.0) != 0


def test_from_dilatation_family():
    A = coefficient_field("from_dilatation", re=0.2, im=-0.1, winding=2)
    z = 0.3 + 0.4j
    expected = complex(0.2, -0.1) * (z / z.conjugate()) ** 2
    assert A.mu(z) == pytest.approx(expected, abs=1e-14)
    assert A.is_singular_at_origin
    with pytest.raises(DomainError):
        coefficient_field("from_dilatation", re=0.1, winding=0.5)


def test_unknown_field():
    with pytest.raises(DomainError):
        coefficient_field("hyperbolic")


def test_vectorized_matches_pointwise():
    A = coefficient_field("spiral")
    points = np.array([0.3 + 0.1j, -0.5j, 0.9])
    a11, a12, a22 = A.matrix_array(points)
    for i, z in enumerate(points):
        M = A.eval(z)
        assert (a11[i], a12[i], a22[i]) == pytest.approx((M.a11, M.a12, M.a22), abs=1e-13)


@pytest.mark.parametrize("name, domain", [
    ("spiral", DomainDescriptor.disc()),
    ("petal", DomainDescriptor.petal()),
    ("ellipse_affine", DomainDescriptor.ellipse(0.5)),
])
def test_validate_field_passes_builtins(name, domain):
    params = {"a": 0.5} if name == "ellipse_affine" else {}
    report = validate_field(coefficient_field(name, **params), domain, samples=200, seed=7)
    assert report.passed
    assert report.samples == 200
    assert report.worst_det_error < 1e-10
    assert report.to_dict()["errors"] == []


def test_validate_field_is_reproducible_with_seed():
    A = coefficient_field("spiral")
    first = validate_field(A, DomainDescriptor.disc(), samples=50, seed=3)
    second = validate_field(A, DomainDescriptor.disc(), samples=50, seed=3)
    assert first.to_dict() == second.to_dict()
