import math

import mpmath
import numpy as np
import pytest

from qcbounds.constants import (
    ENDPOINT_EPSILON,
    LogValue,
    PoincareConstantQuery,
    QuasidiscConstantQuery,
    _log_objective,
    beta_star,
    beta_star_excess,
    beta_tilde_excess,
    bounded_jacobian_poincare_constant,
    c_beta,
    jacobian_norm_bound,
    m_beta,
    m_beta_minimum,
    nu,
    poincare_constant_upper,
    poincare_minimum,
    regular_domain_poincare_constant,
    stability_constant,
)
from qcbounds.errors import ConstantUndefinedError, DomainError, NumericError

from conftest import J01


def _grid_scan(r, area, points=100001):
    inv_r = 1.0 / r
    width = 4.0 * inv_r / (1.0 + 2.0 * inv_r)
    q = np.linspace(ENDPOINT_EPSILON * width, (1.0 - ENDPOINT_EPSILON) * width, points)
    return float(np.exp(_log_objective(q, inv_r, area).min()))


def _mp_log10_nu(t, K):
    with mpmath.workdps(50):
        t = mpmath.mpf(t)
        beta = 1 + t
        value = mpmath.mpf(10) ** (8 * beta) * (2 * t) / (2 * beta - 1) * (24 * mpmath.pi ** 2 * mpmath.mpf(K) ** 2) ** (2 * beta)
        return float(mpmath.log10(value))


def _mp_log10_c_beta(t, K):
    with mpmath.workdps(50):
        t = mpmath.mpf(t)
        beta = 1 + t
        nu_value = mpmath.mpf(10) ** (8 * beta) * (2 * t) / (2 * beta - 1) * (24 * mpmath.pi ** 2 * mpmath.mpf(K) ** 2) ** (2 * beta)
        value = mpmath.mpf(10) ** 6 / ((2 * beta - 1) * (1 - nu_value)) ** (1 / (2 * beta))
        return float(mpmath.log10(value))


# ---------------------------------------------------------------------------
# LogValue
# ---------------------------------------------------------------------------

def test_log_value_arithmetic():
    hundred = LogValue.from_float(100.0)
    assert (hundred * 1000.0).log10_magnitude == pytest.approx(5.0)
    assert (hundred / LogValue(1.0)).log10_magnitude == pytest.approx(1.0)
    assert (hundred ** 0.5).log10_magnitude == pytest.approx(1.0)
    assert (hundred + hundred).to_float() == pytest.approx(200.0, rel=1e-14)
    assert float(LogValue(2.0)) == pytest.approx(100.0)


def test_log_value_ordering_and_range():
    assert LogValue(400.0) > LogValue(300.5)
    assert LogValue(2.0) == 100.0
    assert not LogValue(400.0).is_representable
    with pytest.raises(NumericError):
        LogValue(400.0).to_float()
    assert LogValue.from_float(0.0).to_float() == 0.0
    with pytest.raises(DomainError):
        LogValue.from_float(-1.0)


def test_log_value_sum_stays_finite_beyond_double_range():
    huge = LogValue(5000.0)
    assert (huge + huge).log10_magnitude == pytest.approx(5000.0 + math.log10(2.0), rel=1e-14)


# ---------------------------------------------------------------------------
# Sobolev-Poincare constants
# ---------------------------------------------------------------------------

def test_b22_dominates_exact_disc_constant():
    upper = poincare_constant_upper(PoincareConstantQuery(r=2.0))
    assert upper >= 1.0 / J01
    assert upper < 0.5


@pytest.mark.parametrize("r, area", [
    (2.0, math.pi), (2.5, math.pi), (3.0, math.pi), (4.0, math.pi),
    (6.0, math.pi), (10.0, math.pi), (40.0, math.pi), (2.0, 1.0),
    (4.0, 2.0), (8.0, 0.5), (16.0, 10.0), (100.0, math.pi),
])
def test_minimum_matches_dense_scan(r, area):
    value = poincare_constant_upper(PoincareConstantQuery(r=r, area=area))
    assert value == pytest.approx(_grid_scan(r, area), rel=1e-8)


def test_minimizer_lies_in_admissible_range():
    r = 4.0
    result = poincare_minimum(PoincareConstantQuery(r=r))
    assert 2.0 * r / (r + 2.0) < result.p < 2.0
    assert result.value == pytest.approx(math.exp(result.log_value), rel=1e-14)


def test_area_scaling():
    # the objective scales with area^{1/r}
    base = poincare_constant_upper(PoincareConstantQuery(r=4.0, area=1.0))
    scaled = poincare_constant_upper(PoincareConstantQuery(r=4.0, area=16.0))
    assert scaled == pytest.approx(2.0 * base, rel=1e-9)


@pytest.mark.parametrize("r", [1.5, 0.0, -3.0])
def test_r_below_two_is_rejected(r):
    with pytest.raises(DomainError):
        PoincareConstantQuery(r=r)


@pytest.mark.parametrize("beta, area", [(1.5, math.pi), (2.0, math.pi), (3.0, 2.0), (10.0, math.pi)])
def test_stability_constant_is_b_at_conjugate_exponent(beta, area):
    expected = poincare_constant_upper(PoincareConstantQuery(r=4.0 * beta / (beta - 1.0), area=area))
    assert stability_constant(beta, area) == pytest.approx(expected, rel=1e-12)


def test_stability_constant_rejects_beta_one():
    with pytest.raises(DomainError):
        stability_constant(1.0, math.pi)


def test_regular_and_bounded_jacobian_constants():
    value = regular_domain_poincare_constant(2.0, 2.0, 1.0, math.pi)
    assert value == pytest.approx(poincare_constant_upper(PoincareConstantQuery(r=4.0)), rel=1e-12)
    assert bounded_jacobian_poincare_constant(1.0) == pytest.approx(1.0 / J01, rel=1e-13)
    assert bounded_jacobian_poincare_constant(4.0) == pytest.approx(2.0 / J01, rel=1e-13)


# ---------------------------------------------------------------------------
# Quasidisc constants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("K", [1.0, 1.1, 2.0, 10.0])
def test_beta_tilde_is_root_of_nu(K):
    t = beta_tilde_excess(K)
    assert abs(nu(None, K, excess=t).log10_magnitude) < 1e-10


@pytest.mark.parametrize("K", [1.0, 1.5])
def test_beta_tilde_leading_order(K):
    # log10 nu ~ 8 + log10(2t) + 2 log10(24 pi^2 K^2) for t << 1
    expected = 0.5 * 10.0 ** (-8.0 - 2.0 * math.log10(24.0 * math.pi ** 2 * K * K))
    assert beta_tilde_excess(K) == pytest.approx(expected, rel=1e-6)


def test_beta_tilde_magnitudes():
    assert beta_tilde_excess(1.0) == pytest.approx(8.9e-14, rel=0.01)
    assert beta_tilde_excess(1.5) == pytest.approx(1.76e-14, rel=0.01)


@pytest.mark.parametrize("K", [1.0, 2.0, 5.0])
def test_nu_is_increasing(K):
    ts = np.logspace(-16, 0, 60)
    values = [nu(None, K, excess=t).log10_magnitude for t in ts]
    assert all(b > a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("t, K", [(1e-15, 1.0), (3e-14, 1.2), (1e-15, 2.0), (0.5, 3.0), (1e-20, 10.0)])
def test_nu_matches_extended_precision(t, K):
    assert nu(None, K, excess=t).log10_magnitude == pytest.approx(_mp_log10_nu(t, K), rel=1e-8)


@pytest.mark.parametrize("K", [1.1, 1.5, 2.0])
def test_c_beta_matches_extended_precision(K):
    t = 0.5 * beta_tilde_excess(K)
    assert c_beta(None, K, excess=t).log10_magnitude == pytest.approx(_mp_log10_c_beta(t, K), rel=1e-8)


def test_c_beta_undefined_beyond_beta_tilde():
    t = beta_tilde_excess(1.5)
    with pytest.raises(ConstantUndefinedError):
        c_beta(None, 1.5, excess=2.0 * t)
    with pytest.raises(ConstantUndefinedError):
        jacobian_norm_bound(None, 1.5, math.pi, excess=2.0 * t)


def test_beta_star():
    assert beta_star_excess(1.5) == pytest.approx(beta_tilde_excess(1.5), rel=1e-15)
    assert beta_star(1.5) == 1.0 + beta_star_excess(1.5)
    with pytest.raises(DomainError):
        beta_star_excess(1.0)


def test_quasidisc_query_requires_K_above_one():
    with pytest.raises(DomainError, match="undefined"):
        QuasidiscConstantQuery(K=1.0)


@pytest.mark.parametrize("K", [1.1, 1.5, 2.0])
def test_m_beta_is_finite_in_log_space(K):
    minimum = m_beta_minimum(QuasidiscConstantQuery(K=K))
    log10_m = minimum.value.log10_magnitude
    assert math.isfinite(log10_m)
    assert log10_m >= 137.0 * K * K - 10.0
    assert 0.0 < minimum.beta_excess < beta_star_excess(K)


def test_m_beta_grows_with_K():
    assert m_beta(QuasidiscConstantQuery(K=2.0)) > m_beta(QuasidiscConstantQuery(K=1.5))


def test_jacobian_norm_bound_exponent():
    t = 0.5 * beta_tilde_excess(2.0)
    bound = jacobian_norm_bound(None, 2.0, math.pi, excess=t)
    exponent = 4.0 * math.pi ** 2 * (2.0 + math.pi ** 2) ** 2 / (2.0 * math.log(3.0) * math.log(10.0))
    assert bound.log10_magnitude > exponent
