"""
Constant Estimates

Upper estimates of the Sobolev-Poincare constants B_{r,2} and A_{4b/(b-1),2}
(minimization over the auxiliary exponent p) and the quasidisc constant
M_b(K) together with nu(b), C_b and the critical exponents b~ and b*.

The quasidisc constants contain exp{K^2 pi^2 (2+pi^2)^2 / (4 log 3)} and are
carried as base-10 logarithms end to end (LogValue). Exponents b close to 1
are passed around as the excess t = b - 1, since b~ - 1 is around 1e-13 and
does not survive being added to 1 in double precision.
"""

import logging
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Optional

import numpy as np
from scipy import optimize, special

from .errors import ConstantUndefinedError, DomainError, NumericError
from .specfun import bessel_j0_first_zero


logger = logging.getLogger(__name__)

LN10 = math.log(10.0)
LOG10_PI = math.log10(math.pi)
ENDPOINT_EPSILON = 1e-9
GRID_POINTS = 2001
OUTER_GRID_POINTS = 241
LINEAR_LIMIT = 300.0

# the exponential factor is exp{K^2 * EXPONENT_NUMERATOR / (c log 3)}
EXPONENT_NUMERATOR = math.pi ** 2 * (2.0 + math.pi ** 2) ** 2


@total_ordering
@dataclass(frozen=True)
class LogValue:
    """Positive real stored as its base-10 logarithm."""

    log10_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign != 1:
            raise DomainError("LogValue represents positive reals only")
        if math.isnan(self.log10_magnitude):
            raise NumericError("LogValue magnitude is NaN")

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x < 0.0 or math.isnan(x):
            raise DomainError(f"LogValue requires a nonnegative value, got {x}")
        return cls(-math.inf if x == 0.0 else math.log10(x))

    @staticmethod
    def _coerce(other) -> "LogValue":
        return other if isinstance(other, LogValue) else LogValue.from_float(float(other))

    def __mul__(self, other) -> "LogValue":
        return LogValue(self.log10_magnitude + self._coerce(other).log10_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogValue":
        return LogValue(self.log10_magnitude - self._coerce(other).log10_magnitude)

    def __pow__(self, exponent: float) -> "LogValue":
        return LogValue(self.log10_magnitude * exponent)

    def __add__(self, other) -> "LogValue":
        other = self._coerce(other)
        combined = np.logaddexp(self.log10_magnitude * LN10, other.log10_magnitude * LN10)
        return LogValue(float(combined) / LN10)

    __radd__ = __add__

    def __eq__(self, other) -> bool:
        if not isinstance(other, (LogValue, int, float)):
            return NotImplemented
        return self.log10_magnitude == self._coerce(other).log10_magnitude

    def __lt__(self, other) -> bool:
        return self.log10_magnitude < self._coerce(other).log10_magnitude

    def __hash__(self) -> int:
        return hash(self.log10_magnitude)

    @property
    def is_representable(self) -> bool:
        return abs(self.log10_magnitude) < LINEAR_LIMIT or self.log10_magnitude == -math.inf

    def to_float(self) -> float:
        if not self.is_representable:
            raise NumericError(f"10^{self.log10_magnitude:.6g} is outside the linear-scale range")
        return 0.0 if self.log10_magnitude == -math.inf else 10.0 ** self.log10_magnitude

    def __float__(self) -> float:
        return self.to_float()

    def __repr__(self) -> str:
        return f"LogValue(10^{self.log10_magnitude:.12g})"


# ---------------------------------------------------------------------------
# Sobolev-Poincare constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoincareConstantQuery:
    """Integrability exponent r >= 2 and area of the target domain."""

    r: float
    area: float = math.pi

    def __post_init__(self):
        if not self.r >= 2.0:
            raise DomainError(f"B_(r,2) requires r >= 2, got {self.r}")
        if not self.area > 0.0:
            raise DomainError(f"area must be positive, got {self.area}")


@dataclass(frozen=True)
class PoincareMinimum:
    """Minimized p-objective: value, its natural log and the minimizing p."""

    value: float
    log_value: float
    p: float


def _log_objective(q, inv_r: float, area: float):
    """
    Natural log of ((p-1)/(2-p))^{(p-1)/p} |area|^{1/r} / (sqrt(pi) 2^{1/p} sqrt(G(2/p) G(3-2/p)))
    written in q = 2 - p.
    """
    q = np.asarray(q, dtype=float)
    p = 2.0 - q
    exponent = (1.0 - q) / p
    ratio_log = np.log1p(-q) - np.log(q)
    return (
        exponent * ratio_log
        + inv_r * math.log(area)
        - 0.5 * math.log(math.pi)
        - math.log(2.0) / p
        - 0.5 * (special.gammaln(2.0 / p) + special.gammaln(3.0 - 2.0 / p))
    )


def _minimize_objective(inv_r: float, area: float) -> PoincareMinimum:
    """
    Infimum of the p-objective over p in (2r/(r+2), 2).

    A dense grid locates the basin; golden-section search polishes an
    interior minimum and bounded Brent search handles a minimum sitting at
    the clamped endpoint. The smaller of grid and polished values wins.
    """
    width = 4.0 * inv_r / (1.0 + 2.0 * inv_r)
    lo, hi = ENDPOINT_EPSILON * width, (1.0 - ENDPOINT_EPSILON) * width
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = _log_objective(grid, inv_r, area)
    if not np.all(np.isfinite(values)):
        raise NumericError(f"p-objective is not finite on the grid (1/r = {inv_r:.6g})")

    index = int(np.argmin(values))
    best_q, best_log = float(grid[index]), float(values[index])

    def objective(q):
        return float(_log_objective(q, inv_r, area))

    try:
        if 0 < index < GRID_POINTS - 1:
            result = optimize.minimize_scalar(
                objective,
                bracket=(grid[index - 1], grid[index], grid[index + 1]),
                method="golden",
                tol=1e-10,
            )
        else:
            neighbour = 1 if index == 0 else GRID_POINTS - 2
            bounds = tuple(sorted((float(grid[index]), float(grid[neighbour]))))
            result = optimize.minimize_scalar(
                objective, bounds=bounds, method="bounded", options={"xatol": 1e-12 * width},
            )
        if math.isfinite(result.fun) and lo <= result.x <= hi and result.fun < best_log:
            best_q, best_log = float(result.x), float(result.fun)
    except ValueError as e:
        logger.debug(f"p-objective polish skipped: {e}")

    return PoincareMinimum(value=math.exp(best_log), log_value=best_log, p=2.0 - best_q)


def poincare_minimum(q: PoincareConstantQuery) -> PoincareMinimum:
    return _minimize_objective(1.0 / q.r, q.area)


def poincare_constant_upper(q: PoincareConstantQuery) -> float:
    """
    Upper estimate of B_{r,2} for a simply connected domain of the given area.

    Args:
        q: PoincareConstantQuery with r >= 2

    Returns:
        inf over p in (2r/(r+2), 2) of the p-objective
    """
    return poincare_minimum(q).value


def _excess(beta: Optional[float], excess: Optional[float]) -> float:
    t = float(excess) if excess is not None else float(beta) - 1.0
    if not t > 0.0 or not math.isfinite(t):
        raise DomainError(f"beta must exceed 1 (beta - 1 = {t})")
    return t


def stability_minimum(beta: Optional[float], area: float, excess: Optional[float] = None) -> PoincareMinimum:
    if not area > 0.0:
        raise DomainError(f"area must be positive, got {area}")
    t = _excess(beta, excess)
    # 1/r = (beta - 1) / (4 beta)
    return _minimize_objective(t / (4.0 * (1.0 + t)), area)


def stability_constant(beta: Optional[float], area: float, excess: Optional[float] = None) -> float:
    """
    Upper estimate of A_{4b/(b-1),2}, equal to the B-estimate at r = 4b/(b-1).

    Args:
        beta: Exponent b > 1 (ignored when excess is given)
        area: Area of the target domain
        excess: b - 1, for exponents too close to 1 to be written as 1 + t

    Raises:
        DomainError: If b <= 1
    """
    return stability_minimum(beta, area, excess).value


def regular_domain_poincare_constant(s: float, beta: float, jac_norm_beta: float, area: float) -> float:
    """
    B_{s,2}(A, Omega) <= B_{bs/(b-1),2}(target) * ||J_{phi^-1} | L^b||^{1/s}
    for an A-quasiconformal b-regular domain.
    """
    if not s >= 1.0:
        raise DomainError(f"s must be >= 1, got {s}")
    t = _excess(beta, None)
    if jac_norm_beta < 0.0:
        raise DomainError(f"Jacobian norm must be nonnegative, got {jac_norm_beta}")
    r = beta * s / t
    return poincare_constant_upper(PoincareConstantQuery(r=r, area=area)) * jac_norm_beta ** (1.0 / s)


def bounded_jacobian_poincare_constant(jac_sup: float, area: float = math.pi) -> float:
    """B_{2,2}(A, Omega) <= ||J_{phi^-1}||_inf^{1/2} / sqrt(lambda_1(disc of the given area))."""
    if not jac_sup > 0.0:
        raise DomainError(f"Jacobian bound must be positive, got {jac_sup}")
    if not area > 0.0:
        raise DomainError(f"area must be positive, got {area}")
    j = bessel_j0_first_zero().value
    return math.sqrt(area / math.pi) / j * math.sqrt(jac_sup)


# ---------------------------------------------------------------------------
# Quasidisc constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasidiscConstantQuery:
    K: float
    area: float = math.pi

    def __post_init__(self):
        if not self.K > 1.0:
            raise DomainError(f"M_b(K) requires K > 1 (b* = K/(K-1) is undefined at K = {self.K})")
        if not self.area > 0.0:
            raise DomainError(f"area must be positive, got {self.area}")


def _require_K(K: float) -> None:
    if not K >= 1.0 or not math.isfinite(K):
        raise DomainError(f"K must be >= 1, got {K}")


def _log10_nu(t: float, K: float) -> float:
    return (
        8.0 * (1.0 + t)
        + math.log10(2.0 * t)
        - math.log1p(2.0 * t) / LN10
        + 2.0 * (1.0 + t) * math.log10(24.0 * math.pi ** 2 * K * K)
    )


def nu(beta: Optional[float], K: float, excess: Optional[float] = None) -> LogValue:
    """
    nu(b) = 10^{8b} (2b-2)/(2b-1) (24 pi^2 K^2)^{2b} in log space.

    Raises:
        DomainError: If b <= 1 or K < 1
    """
    _require_K(K)
    return LogValue(_log10_nu(_excess(beta, excess), K))


def beta_tilde_excess(K: float) -> float:
    """
    b~ - 1, the root of nu(b) = 1, solved in u = log10(b - 1).

    log10 nu is strictly increasing in u with unit slope from the log10(2t)
    term, so the residual in log10 nu tracks the error in u.
    """
    _require_K(K)
    lower = -(30.0 + 4.0 * math.log10(24.0 * math.pi ** 2 * K * K))
    upper = math.log10(3.0)
    residual = lambda u: _log10_nu(10.0 ** u, K)

    if residual(lower) >= 0.0 or residual(upper) <= 0.0:
        raise NumericError(f"nu(b) = 1 is not bracketed for K = {K}")
    root = optimize.brentq(residual, lower, upper, xtol=1e-15, rtol=1e-15, maxiter=200)
    t = 10.0 ** root
    logger.debug(f"b~(K={K}) - 1 = {t:.15e} (log10 nu residual {residual(root):.2e})")
    return t


def beta_tilde(K: float) -> float:
    """b~ as a float; use beta_tilde_excess when b~ - 1 matters."""
    return 1.0 + beta_tilde_excess(K)


def beta_star_excess(K: float) -> float:
    """b* - 1 = min(1/(K-1), b~ - 1) for K > 1."""
    if not K > 1.0:
        raise DomainError(f"b* = K/(K-1) is undefined at K = {K}")
    return min(1.0 / (K - 1.0), beta_tilde_excess(K))


def beta_star(K: float) -> float:
    return 1.0 + beta_star_excess(K)


def _log10_c_beta(t: float, K: float) -> float:
    log_nu = _log10_nu(t, K)
    if log_nu >= 0.0:
        raise ConstantUndefinedError(
            f"C_b is undefined for b - 1 = {t:.6e}: 1 - nu(b) <= 0 (b must stay below b~)"
        )
    one_minus_nu = -math.expm1(log_nu * LN10)
    if one_minus_nu <= 0.0:
        raise ConstantUndefinedError(f"C_b is undefined for b - 1 = {t:.6e}: 1 - nu(b) underflows")
    log10_one_minus_nu = math.log10(one_minus_nu)
    beta = 1.0 + t
    return 6.0 - (math.log1p(2.0 * t) / LN10 + log10_one_minus_nu) / (2.0 * beta)


def c_beta(beta: Optional[float], K: float, excess: Optional[float] = None) -> LogValue:
    """
    C_b = 10^6 / [(2b-1)(1-nu(b))]^{1/(2b)}.

    Raises:
        ConstantUndefinedError: If b >= b~(K)
    """
    _require_K(K)
    return LogValue(_log10_c_beta(_excess(beta, excess), K))


def _log10_exponential(K: float, denominator: float) -> float:
    """log10 of exp{K^2 pi^2 (2+pi^2)^2 / (denominator * log 3)}."""
    return K * K * EXPONENT_NUMERATOR / (denominator * math.log(3.0)) / LN10


def _warn_area(area: float, context: str) -> None:
    if not math.isclose(area, math.pi, rel_tol=1e-12):
        logger.warning(f"{context} is stated for area pi; evaluating with area {area:.12g}")


def jacobian_norm_bound(beta: Optional[float], K: float, area: float, excess: Optional[float] = None) -> LogValue:
    """
    Upper bound C_b^2 K^2 pi^{(1-b)/b} / 4 * exp{K^2 pi^2 (2+pi^2)^2 / (2 log 3)} * |Omega|
    for ||J_{phi^-1} | L^b(D)||.

    Raises:
        ConstantUndefinedError: If b >= b~(K)
    """
    _require_K(K)
    if not area > 0.0:
        raise DomainError(f"area must be positive, got {area}")
    t = _excess(beta, excess)
    log10_value = (
        2.0 * _log10_c_beta(t, K)
        + 2.0 * math.log10(K)
        - t / (1.0 + t) * LOG10_PI
        - math.log10(4.0)
        + _log10_exponential(K, 2.0)
        + math.log10(area)
    )
    return LogValue(log10_value)


@dataclass(frozen=True)
class QuasidiscMinimum:
    """M_b(K) with the minimizing exponents."""

    value: LogValue
    beta_excess: float
    p: float

    @property
    def beta(self) -> float:
        return 1.0 + self.beta_excess


def _log10_m_at(t: float, K: float, area: float):
    """log10 of the braced expression in M_b(K) at b = 1 + t, with its minimizing p."""
    inner = stability_minimum(None, math.pi, excess=t)
    # A^2 over the unit disc: pi^{(b-1)/(2b)} / pi = pi^{-(b+1)/(2b)}
    log10_inner = 2.0 * inner.log_value / LN10

    beta = 1.0 + t
    log10_large = (
        _log10_c_beta(t, K)
        + math.log10(K)
        - t / (2.0 * beta) * LOG10_PI
        - math.log10(2.0)
        + _log10_exponential(K, 4.0)
        + 0.5 * math.log10(area)
    )
    log10_small = LOG10_PI / (2.0 * beta)
    log10_bracket = float(np.logaddexp(log10_large * LN10, log10_small * LN10)) / LN10
    return log10_inner + log10_bracket, inner.p


def m_beta_minimum(q: QuasidiscConstantQuery) -> QuasidiscMinimum:
    """
    M_b(K) as the infimum over b in (1, b*) of the braced expression.

    The outer search runs over log(b - 1) on [delta, t* - delta] with
    delta = 1e-12 t*: a grid scan followed by golden-section polish.
    """
    _warn_area(q.area, "the quasidisc estimate")
    t_star = beta_star_excess(q.K)
    delta = 1e-12 * t_star
    lo, hi = math.log(delta), math.log(t_star - delta)

    def objective(u: float) -> float:
        try:
            return _log10_m_at(math.exp(u), q.K, q.area)[0]
        except ConstantUndefinedError:
            return math.inf

    grid = np.linspace(lo, hi, OUTER_GRID_POINTS)
    values = np.array([objective(u) for u in grid])
    if not np.any(np.isfinite(values)):
        raise NumericError(f"M_b(K) is not finite anywhere on (1, b*) for K = {q.K}")

    index = int(np.argmin(values))
    best_u, best = float(grid[index]), float(values[index])
    if 0 < index < OUTER_GRID_POINTS - 1:
        try:
            result = optimize.minimize_scalar(
                objective, bracket=(grid[index - 1], grid[index], grid[index + 1]), method="golden", tol=1e-10,
            )
            if lo <= result.x <= hi and result.fun < best:
                best_u, best = float(result.x), float(result.fun)
        except ValueError as e:
            logger.debug(f"outer polish skipped: {e}")

    t = math.exp(best_u)
    _, p = _log10_m_at(t, q.K, q.area)
    logger.debug(f"M_b(K={q.K}): log10 = {best:.12g} at b - 1 = {t:.6e}, p = {p:.12g}")
    return QuasidiscMinimum(value=LogValue(best), beta_excess=t, p=p)


def m_beta(q: QuasidiscConstantQuery) -> LogValue:
    """
    Quasidisc constant M_b(K) in log10 form.

    Raises:
        DomainError: If K <= 1
    """
    return m_beta_minimum(q).value
