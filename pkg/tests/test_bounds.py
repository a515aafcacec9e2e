import math

import pytest

from qcbounds.bounds import (
    COEFFICIENT,
    LAPLACIAN,
    LOWER,
    UPPER,
    makai_hayman_lower,
    monotonicity_upper,
    payne_weinberger_upper,
    poincare_lower,
    quasidisc_upper,
    rfk_lower,
    sandwich_volume_preserving,
    stability_gap_bound,
    thm52_upper,
    weighted_poincare_check,
)
from qcbounds.constants import LogValue, PoincareConstantQuery, poincare_constant_upper, stability_constant
from qcbounds.errors import DomainError
from qcbounds.geometry import qc_map


SPIRAL_K = (2.0 + math.sqrt(2.0)) / (2.0 - math.sqrt(2.0))
ELLIPSE_K = (math.sqrt(1.25) + 0.5) / (math.sqrt(1.25) - 0.5)


def test_payne_weinberger_is_tight_on_disc(j0_sq):
    result = payne_weinberger_upper(math.pi, 2.0 * math.pi)
    assert result.value == pytest.approx(j0_sq, abs=1e-10)
    assert result.kind == UPPER
    assert result.operator == LAPLACIAN


def test_payne_weinberger_grows_with_perimeter():
    assert payne_weinberger_upper(math.pi, 7.0).value > payne_weinberger_upper(math.pi, 2.0 * math.pi).value


def test_payne_weinberger_rejects_impossible_domain():
    with pytest.raises(DomainError, match="isoperimetric"):
        payne_weinberger_upper(math.pi, 1.0)


def test_rfk_and_monotonicity(j0_sq):
    assert rfk_lower(math.pi).value == pytest.approx(j0_sq, rel=1e-14)
    assert rfk_lower(4.0 * math.pi).value == pytest.approx(j0_sq / 4.0, rel=1e-14)
    assert rfk_lower(math.pi).kind == LOWER
    assert monotonicity_upper(1.0).value == pytest.approx(j0_sq, rel=1e-14)
    assert monotonicity_upper(0.5).value == pytest.approx(4.0 * j0_sq, rel=1e-14)


def test_makai_hayman():
    result = makai_hayman_lower(0.5, 0.25)
    assert result.value == pytest.approx(1.0)
    assert result.inputs == {"rho": 0.5, "alpha": 0.25}
    with pytest.raises(DomainError):
        makai_hayman_lower(0.5, 0.0)


@pytest.mark.parametrize("K, expected", [
    (SPIRAL_K, 33.71),
    (ELLIPSE_K, 15.14),
    (2.0, 11.566),
])
def test_sandwich_examples(K, expected, j0_sq):
    lower, upper = sandwich_volume_preserving(K)
    assert lower.value == pytest.approx(j0_sq, rel=1e-14)
    assert upper.value == pytest.approx(K * j0_sq, rel=1e-14)
    assert upper.value == pytest.approx(expected, rel=1e-3)
    assert (lower.name, upper.name) == ("sandwich_lower", "sandwich_upper")
    assert upper.operator == COEFFICIENT


def test_sandwich_rejects_K_below_one():
    with pytest.raises(DomainError):
        sandwich_volume_preserving(0.9)


def test_thm52_collapses_for_volume_preserving_maps(j0_sq):
    result = thm52_upper(K=2.0, beta=2.0, rho=0.6, jac_norm_beta=math.sqrt(math.pi), jac_dev_norm=0.0, area=math.pi)
    assert result.value == pytest.approx(2.0 * j0_sq, rel=1e-14)
    assert "stability_constant" in result.details


def test_thm52_correction_is_positive(j0_sq):
    result = thm52_upper(K=1.5, beta=3.0, rho=0.8, jac_norm_beta=2.0, jac_dev_norm=0.01, area=math.pi)
    assert result.value > 1.5 * j0_sq


def test_thm52_matches_composed_constants(j0_sq):
    result = thm52_upper(K=2.0, beta=2.0, rho=1.0, jac_norm_beta=math.sqrt(math.pi), jac_dev_norm=0.1, area=math.pi)
    a_constant = stability_constant(2.0, math.pi)
    expected = 2.0 * j0_sq + a_constant ** 2 * 4.0 * j0_sq ** 2 * 2.0 * math.pi ** 0.25 * 0.1
    assert result.value == pytest.approx(expected, rel=1e-12)
    assert result.details["stability_constant"] == pytest.approx(a_constant, rel=1e-14)


def test_area_hypothesis_is_recorded():
    result = thm52_upper(K=1.5, beta=2.0, rho=0.5, jac_norm_beta=1.0, jac_dev_norm=0.0, area=2.0)
    assert any("area" in line for line in result.assumptions)
    exact = thm52_upper(K=1.5, beta=2.0, rho=0.5, jac_norm_beta=1.0, jac_dev_norm=0.0, area=math.pi)
    assert not any("area" in line for line in exact.assumptions)


def test_thm52_requires_beta_above_one():
    with pytest.raises(DomainError):
        thm52_upper(K=1.5, beta=1.0, rho=0.5, jac_norm_beta=1.0, jac_dev_norm=0.0, area=math.pi)


def test_stability_gap():
    assert stability_gap_bound(100.0, 2.0, 1.0, 0.0, math.pi).value == 0.0
    assert stability_gap_bound(100.0, 2.0, 1.0, 0.1, math.pi).value > 0.0


def test_stability_gap_is_linear_in_c_n(j0_sq):
    c_n = j0_sq ** 2
    single = stability_gap_bound(c_n, 2.0, math.sqrt(math.pi), 0.05, math.pi)
    double = stability_gap_bound(2.0 * c_n, 2.0, math.sqrt(math.pi), 0.05, math.pi)
    assert double.value == pytest.approx(2.0 * single.value, rel=1e-14)
    expected = c_n * stability_constant(2.0, math.pi) ** 2 * 2.0 * math.pi ** 0.25 * 0.05
    assert single.value == pytest.approx(expected, rel=1e-12)
    assert math.isfinite(single.value) and single.value > 0.0


def test_quasidisc_with_zero_deviation(j0_sq):
    result = quasidisc_upper(K=2.0, rho=0.6, jac_dev_norm=0.0, area=math.pi)
    assert not result.is_log
    assert result.value == pytest.approx(2.0 * j0_sq, rel=1e-14)


def test_quasidisc_is_carried_in_log_space():
    result = quasidisc_upper(K=1.5, rho=0.6, jac_dev_norm=1e-3, area=math.pi)
    assert result.is_log
    assert isinstance(result.value, LogValue)
    assert result.log10_value > 137.0 * 1.5 ** 2 - 20.0
    payload = result.to_dict()
    assert "log10_value" in payload and "value" not in payload
    assert set(payload["details"]) == {"log10_m_beta", "beta_minus_one", "p"}


def test_quasidisc_increases_with_deviation():
    values = [quasidisc_upper(K=1.5, rho=0.6, jac_dev_norm=dev, area=math.pi).log10_value for dev in (1e-4, 1e-3, 1e-2)]
    assert values[0] < values[1] < values[2]


def test_quasidisc_undefined_at_K_one():
    with pytest.raises(DomainError):
        quasidisc_upper(K=1.0, rho=1.0, jac_dev_norm=0.1, area=math.pi)


def test_poincare_lower(j0_sq):
    assert poincare_lower().value == pytest.approx(j0_sq, rel=1e-12)
    assert poincare_lower(2.0).value == pytest.approx(j0_sq / 2.0, rel=1e-12)


def test_to_dict_layout():
    payload = rfk_lower(math.pi).to_dict()
    assert list(payload) == ["name", "kind", "operator", "value", "inputs", "assumptions"]


@pytest.mark.parametrize("kind, a", [("identity", 0.0), ("spiral", 0.0), ("ellipse_affine", 0.5), ("petal_map", 0.0)])
@pytest.mark.parametrize("r", [2.0, 4.0])
@pytest.mark.parametrize("name", ["quartic", "cosine", "bump"])
def test_weighted_poincare_holds(kind, a, r, name):
    lhs, rhs = weighted_poincare_check(qc_map(kind, a), r, name)
    assert 0.0 < lhs <= rhs


def test_weighted_poincare_constant_used():
    lhs, rhs = weighted_poincare_check(qc_map("identity"), 2.0, "quartic")
    B = poincare_constant_upper(PoincareConstantQuery(r=2.0))
    assert rhs == pytest.approx(B * math.sqrt(4.0 * math.pi / 3.0), rel=1e-10)
