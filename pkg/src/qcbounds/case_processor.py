"""
Case Processor - Core Verification Logic

Validates a case configuration, derives the geometric inputs of every
requested bound, evaluates the bounds and, for verification runs, checks
them against finite-element eigenvalues.
"""

import logging
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .beltrami import BUILTIN_FIELDS, CoefficientField, coefficient_field, validate_field
from .bounds import (
    LAPLACIAN,
    LOWER,
    BoundResult,
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
from .errors import ConfigError, DomainError, NumericError, QCBoundsError
from .fem import EigenResult, jacobian_norms, jacobian_sup, solve_on_domain
from .geometry import (
    DOMAIN_KINDS,
    TEST_FUNCTIONS,
    DomainDescriptor,
    QCMapDescriptor,
    builtin_map_for,
    domain_area,
    domain_perimeter,
    inscribed_radius,
    isometry_check,
)
from .report_store import config_hash
from .specfun import bessel_j0_first_zero


logger = logging.getLogger(__name__)


@dataclass
class CaseSetup:
    """Resolved case: domain, field, agreed map and the validated options."""

    case_id: str
    domain: DomainDescriptor
    coefficient: CoefficientField
    qmap: Optional[QCMapDescriptor]
    bounds: List[str]
    fem: Dict[str, Any]
    beta: Optional[float] = None
    alpha_makai: Optional[float] = None
    c_n: Optional[float] = None
    checks: Dict[str, Any] = field(default_factory=dict)


class CaseProcessor:
    """Evaluates and verifies eigenvalue bounds for one case configuration."""

    KNOWN_KEYS = ("case_id", "domain", "coefficient", "bounds", "fem", "beta", "alpha_makai", "c_n", "checks", "output")
    DOMAIN_KEYS = {
        "disc": ("kind", "radius"),
        "ellipse": ("kind", "a"),
        "petal": ("kind",),
        "polygon": ("kind", "vertices"),
        "square": ("kind", "side"),
    }
    FIELD_KEYS = {
        "identity": ("name",),
        "spiral": ("name",),
        "ellipse_affine": ("name", "a"),
        "petal": ("name",),
        "from_dilatation": ("name", "re", "im", "winding"),
    }
    FEM_KEYS = ("refinements", "target_h", "eigen_count")
    CHECK_KEYS = ("test_functions", "r_values", "order", "field_samples")
    OUTPUT_KEYS = ("path", "format")
    OUTPUT_FORMATS = ("json", "csv")

    LAPLACIAN_BOUNDS = ("payne_weinberger", "rfk", "makai_hayman", "monotonicity")
    COEFFICIENT_BOUNDS = ("sandwich", "thm52", "stability_gap", "quasidisc", "poincare_lower")
    BOUND_NAMES = LAPLACIAN_BOUNDS + COEFFICIENT_BOUNDS
    BETA_BOUNDS = ("thm52", "stability_gap")
    MAP_BOUNDS = COEFFICIENT_BOUNDS

    DEFAULT_FEM = {"refinements": 3, "target_h": 0.1, "eigen_count": 1}
    DEFAULT_CHECKS = {
        "test_functions": ["quartic", "cosine", "bump"],
        "r_values": [2.0, 4.0],
        "order": 64,
        "field_samples": 1000,
    }

    # Jacobian deviation below this is quadrature round-off for volume-preserving maps
    DEV_NORM_SNAP = 1e-12
    ISOMETRY_TOLERANCE = 1e-3
    ERROR_FACTOR = 3.0

    def __init__(self, threads: int = 1, seed: Optional[int] = None):
        """
        Initialize the processor.

        Args:
            threads: Assembly threads for FEM solves
            seed: Seed for the sampling-based field validator
        """
        self.threads = max(int(threads), 1)
        self.seed = seed
        self.stats = {
            "bounds_evaluated": 0,
            "fem_solves": 0,
            "verdicts_passed": 0,
            "verdicts_failed": 0,
            "checks_failed": 0,
        }

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    @staticmethod
    def _is_number(value: Any) -> bool:
        return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)

    def _unknown_keys(self, block: Dict[str, Any], allowed, where: str) -> List[str]:
        return [f"Unknown key in {where}: {key}" for key in block if key not in allowed]

    def _validate_domain(self, block: Any) -> List[str]:
        if not isinstance(block, dict):
            return ["domain must be an object"]
        kind = block.get("kind")
        if kind not in self.DOMAIN_KEYS:
            return [f"Unknown domain kind: {kind!r} (expected one of {sorted(self.DOMAIN_KEYS)})"]
        errors = self._unknown_keys(block, self.DOMAIN_KEYS[kind], "domain")
        if kind == "ellipse" and not self._is_number(block.get("a")):
            errors.append("ellipse domain requires a numeric 'a'")
        if kind == "polygon":
            vertices = block.get("vertices")
            if not isinstance(vertices, list) or not all(
                isinstance(v, (list, tuple)) and len(v) == 2 and all(self._is_number(c) for c in v)
                for v in vertices
            ):
                errors.append("polygon domain requires 'vertices' as a list of [x, y] pairs")
        for key in ("radius", "side"):
            if key in block and not (self._is_number(block[key]) and block[key] > 0):
                errors.append(f"domain {key} must be a positive number")
        return errors

    def _validate_field(self, block: Any) -> List[str]:
        if not isinstance(block, dict):
            return ["coefficient must be an object"]
        name = block.get("name")
        if name not in self.FIELD_KEYS:
            return [f"Unknown coefficient field: {name!r} (expected one of {sorted(self.FIELD_KEYS)})"]
        errors = self._unknown_keys(block, self.FIELD_KEYS[name], "coefficient")
        for key in ("a", "re", "im", "winding"):
            if key in block and not self._is_number(block[key]):
                errors.append(f"coefficient {key} must be a number")
        return errors

    def _validate_fem(self, block: Any) -> List[str]:
        if not isinstance(block, dict):
            return ["fem must be an object"]
        errors = self._unknown_keys(block, self.FEM_KEYS, "fem")
        refinements = block.get("refinements", self.DEFAULT_FEM["refinements"])
        if not isinstance(refinements, int) or isinstance(refinements, bool) or refinements < 2:
            errors.append("fem.refinements must be an integer >= 2")
        target_h = block.get("target_h", self.DEFAULT_FEM["target_h"])
        if not (self._is_number(target_h) and target_h > 0):
            errors.append("fem.target_h must be a positive number")
        eigen_count = block.get("eigen_count", self.DEFAULT_FEM["eigen_count"])
        if not isinstance(eigen_count, int) or isinstance(eigen_count, bool) or eigen_count < 1:
            errors.append("fem.eigen_count must be an integer >= 1")
        return errors

    def _validate_checks(self, block: Any) -> List[str]:
        if not isinstance(block, dict):
            return ["checks must be an object"]
        errors = self._unknown_keys(block, self.CHECK_KEYS, "checks")
        for name in block.get("test_functions", []):
            if name not in TEST_FUNCTIONS:
                errors.append(f"Unknown test function: {name!r}")
        for r in block.get("r_values", []):
            if not (self._is_number(r) and r >= 2):
                errors.append(f"checks.r_values entries must be numbers >= 2, got {r!r}")
        for key in ("order", "field_samples"):
            value = block.get(key, self.DEFAULT_CHECKS[key])
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                errors.append(f"checks.{key} must be a positive integer")
        return errors

    def _validate_output(self, block: Any) -> List[str]:
        if not isinstance(block, dict):
            return ["output must be an object"]
        errors = self._unknown_keys(block, self.OUTPUT_KEYS, "output")
        if block.get("format", "json") not in self.OUTPUT_FORMATS:
            errors.append(f"output.format must be one of {list(self.OUTPUT_FORMATS)}")
        if "path" in block and not isinstance(block["path"], str):
            errors.append("output.path must be a string")
        return errors

    def validate_config(self, config: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Validate a case configuration.

        Args:
            config: Parsed config dictionary

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        if not isinstance(config, dict):
            return False, ["config must be a JSON object"]

        errors = self._unknown_keys(config, self.KNOWN_KEYS, "config")
        for required in ("domain", "bounds"):
            if required not in config:
                errors.append(f"Missing required field: {required}")
        if errors:
            return False, errors

        errors.extend(self._validate_domain(config["domain"]))
        errors.extend(self._validate_field(config.get("coefficient", {"name": "identity"})))
        if "fem" in config:
            errors.extend(self._validate_fem(config["fem"]))
        if "checks" in config:
            errors.extend(self._validate_checks(config["checks"]))
        if "output" in config:
            errors.extend(self._validate_output(config["output"]))
        if "case_id" in config and not isinstance(config["case_id"], str):
            errors.append("case_id must be a string")

        bounds = config["bounds"]
        if not isinstance(bounds, list) or not bounds:
            errors.append("bounds must be a non-empty list of bound names")
            bounds = []
        for name in bounds:
            if name not in self.BOUND_NAMES:
                errors.append(f"Unknown bound: {name!r}")
        if len(set(map(str, bounds))) != len(bounds):
            errors.append("bounds contains duplicates")

        if any(name in self.BETA_BOUNDS for name in bounds):
            beta = config.get("beta")
            if not (self._is_number(beta) and beta > 1):
                errors.append("beta must be a number > 1 when thm52 or stability_gap is requested")
        elif "beta" in config and not (self._is_number(config["beta"]) and config["beta"] > 1):
            errors.append("beta must be a number > 1")

        makai_requested = "makai_hayman" in bounds
        if makai_requested and not (self._is_number(config.get("alpha_makai")) and config["alpha_makai"] > 0):
            errors.append("alpha_makai must be a positive number when makai_hayman is requested")
        if not makai_requested and "alpha_makai" in config:
            errors.append("alpha_makai is only allowed together with the makai_hayman bound")

        if "c_n" in config and not (self._is_number(config["c_n"]) and config["c_n"] >= 0):
            errors.append("c_n must be a nonnegative number")

        if errors:
            return False, errors

        # Semantic checks need the resolved objects
        try:
            domain = self._build_domain(config["domain"])
            A = self._build_field(config.get("coefficient", {"name": "identity"}))
        except QCBoundsError as e:
            return False, [str(e)]

        qmap = builtin_map_for(A, domain)
        for name in bounds:
            if name in self.MAP_BOUNDS and qmap is None:
                errors.append(
                    f"{name} needs a built-in A-quasiconformal map; none is agreed with "
                    f"field '{A.kind}' on domain '{domain.kind}'"
                )
        if "quasidisc" in bounds and not A.K > 1.0:
            errors.append("quasidisc requires K > 1: beta* = K/(K-1) is undefined at K = 1")

        return len(errors) == 0, errors

    # ------------------------------------------------------------------
    # Resolution
    # ------------------------------------------------------------------

    @staticmethod
    def _build_domain(block: Dict[str, Any]) -> DomainDescriptor:
        kind = block["kind"]
        if kind == "square":
            return DomainDescriptor.square(float(block.get("side", 1.0)))
        if kind == "disc":
            return DomainDescriptor.disc(float(block.get("radius", 1.0)))
        if kind == "ellipse":
            return DomainDescriptor.ellipse(float(block["a"]))
        if kind == "petal":
            return DomainDescriptor.petal()
        if kind == "polygon":
            return DomainDescriptor.polygon(block["vertices"])
        raise DomainError(f"unknown domain kind '{kind}' (expected one of {DOMAIN_KINDS + ('square',)})")

    @staticmethod
    def _build_field(block: Dict[str, Any]) -> CoefficientField:
        params = {key: value for key, value in block.items() if key != "name"}
        if block["name"] not in BUILTIN_FIELDS + ("from_dilatation",):
            raise DomainError(f"unknown coefficient field '{block['name']}'")
        return coefficient_field(block["name"], **params)

    def resolve(self, config: Dict[str, Any]) -> CaseSetup:
        """
        Validate and resolve a configuration.

        Raises:
            ConfigError: If validation fails
        """
        is_valid, errors = self.validate_config(config)
        if not is_valid:
            raise ConfigError("Invalid case configuration: " + "; ".join(errors))

        domain = self._build_domain(config["domain"])
        A = self._build_field(config.get("coefficient", {"name": "identity"}))
        fem = dict(self.DEFAULT_FEM)
        fem.update(config.get("fem", {}))
        checks = dict(self.DEFAULT_CHECKS)
        checks.update(config.get("checks", {}))

        return CaseSetup(
            case_id=config.get("case_id", f"{domain.kind}_{A.kind}"),
            domain=domain,
            coefficient=A,
            qmap=builtin_map_for(A, domain),
            bounds=list(config["bounds"]),
            fem=fem,
            beta=float(config["beta"]) if "beta" in config else None,
            alpha_makai=float(config["alpha_makai"]) if "alpha_makai" in config else None,
            c_n=float(config["c_n"]) if "c_n" in config else None,
            checks=checks,
        )

    # ------------------------------------------------------------------
    # Bounds
    # ------------------------------------------------------------------

    def geometry_inputs(self, setup: CaseSetup) -> Dict[str, Any]:
        """Area, perimeter, inscribed radius, K and the Jacobian norms of the agreed map."""
        logger.info(f"Computing geometric inputs for {setup.domain.kind} / {setup.coefficient.kind}")
        area = domain_area(setup.domain)
        inputs: Dict[str, Any] = {
            "domain": setup.domain.describe(),
            "coefficient": setup.coefficient.describe(),
            "map": setup.qmap.describe() if setup.qmap is not None else None,
            "area": area,
            "perimeter": domain_perimeter(setup.domain),
            "rho": inscribed_radius(setup.domain),
            "K": setup.coefficient.K,
            "beta": setup.beta,
            "alpha_makai": setup.alpha_makai,
        }

        if setup.qmap is not None:
            norm_beta, dev_norm = jacobian_norms(setup.qmap, setup.beta if setup.beta is not None else 2.0)
            sup = jacobian_sup(setup.qmap)
            if setup.qmap.is_volume_preserving:
                if dev_norm < self.DEV_NORM_SNAP:
                    dev_norm = 0.0
                if abs(sup - 1.0) < self.DEV_NORM_SNAP:
                    sup = 1.0
            inputs["jac_norm_beta"] = norm_beta if setup.beta is not None else None
            inputs["jac_dev_norm"] = dev_norm
            inputs["jac_sup"] = sup
        else:
            inputs["jac_norm_beta"] = None
            inputs["jac_dev_norm"] = None
            inputs["jac_sup"] = None

        if setup.c_n is not None:
            inputs["c_n"] = setup.c_n
        else:
            j_sq = bessel_j0_first_zero().squared
            inputs["c_n"] = max((setup.coefficient.K * j_sq / inputs["rho"] ** 2) ** 2, j_sq ** 2)

        logger.info(
            f"  - area = {area:.10g}, perimeter = {inputs['perimeter']:.10g}, "
            f"rho = {inputs['rho']:.10g}, K = {inputs['K']:.10g}"
        )
        return inputs

    def evaluate_bounds(self, setup: CaseSetup, inputs: Dict[str, Any]) -> List[BoundResult]:
        """Evaluate the requested bounds in request order."""
        results: List[BoundResult] = []
        area, rho, K = inputs["area"], inputs["rho"], inputs["K"]

        for name in setup.bounds:
            logger.info(f"Evaluating bound: {name}")
            if name == "payne_weinberger":
                results.append(payne_weinberger_upper(area, inputs["perimeter"]))
            elif name == "rfk":
                results.append(rfk_lower(area))
            elif name == "makai_hayman":
                results.append(makai_hayman_lower(rho, setup.alpha_makai))
            elif name == "monotonicity":
                results.append(monotonicity_upper(rho))
            elif name == "sandwich":
                results.extend(sandwich_volume_preserving(K))
            elif name == "thm52":
                results.append(thm52_upper(K, setup.beta, rho, inputs["jac_norm_beta"], inputs["jac_dev_norm"], area))
            elif name == "stability_gap":
                results.append(stability_gap_bound(
                    inputs["c_n"], setup.beta, inputs["jac_norm_beta"], inputs["jac_dev_norm"], math.pi
                ))
            elif name == "quasidisc":
                results.append(quasidisc_upper(K, rho, inputs["jac_dev_norm"], area))
            elif name == "poincare_lower":
                results.append(poincare_lower(inputs["jac_sup"]))

        self.stats["bounds_evaluated"] += len(results)
        return results

    # ------------------------------------------------------------------
    # Verification
    # ------------------------------------------------------------------

    def needs_laplacian_solve(self, setup: CaseSetup) -> bool:
        return not setup.coefficient.is_identity and any(name in self.LAPLACIAN_BOUNDS for name in setup.bounds)

    def run_fem(self, setup: CaseSetup) -> Dict[str, EigenResult]:
        """
        Solve for the coefficient operator and, when Laplacian bounds sit
        next to a non-identity field, for the Laplacian on the same domain.

        Returns:
            EigenResult per operator ("coefficient", and "laplacian" when solved separately)
        """
        options = dict(
            refinements=setup.fem["refinements"],
            target_h=setup.fem["target_h"],
            eigen_count=setup.fem["eigen_count"],
            threads=self.threads,
        )
        results = {"coefficient": solve_on_domain(setup.domain, setup.coefficient, **options)}
        self.stats["fem_solves"] += 1
        if self.needs_laplacian_solve(setup):
            logger.info("Solving the Laplacian on the same domain for the Laplacian bounds")
            results["laplacian"] = solve_on_domain(setup.domain, None, **options)
            self.stats["fem_solves"] += 1
        return results

    def _verdict(self, bound: BoundResult, result: EigenResult) -> Dict[str, Any]:
        lam = result.lambda1
        extrapolated = result.extrapolated
        tolerance = self.ERROR_FACTOR * result.error_estimate / lam

        if bound.name == "stability_gap":
            gap = abs(extrapolated - bessel_j0_first_zero().squared)
            allowed = bound.value + self.ERROR_FACTOR * result.error_estimate
            return {
                "inequality": f"|lambda_1 - j^2| <= {bound.name}",
                "bound": bound.name,
                "holds": gap <= allowed,
                "margin": allowed - gap,
                "tolerance": self.ERROR_FACTOR * result.error_estimate,
                "margin_scale": "linear",
            }

        if bound.kind == LOWER:
            return {
                "inequality": f"{bound.name} <= lambda_1",
                "bound": bound.name,
                "holds": bound.value <= lam,
                "margin": lam - bound.value,
                "tolerance": 0.0,
                "margin_scale": "linear",
            }

        if bound.is_log:
            allowed = bound.log10_value + math.log10(1.0 + tolerance)
            observed = math.log10(extrapolated)
            return {
                "inequality": f"lambda_1 <= {bound.name}",
                "bound": bound.name,
                "holds": observed <= allowed,
                "margin": allowed - observed,
                "tolerance": tolerance,
                "margin_scale": "log10",
            }

        allowed = bound.value * (1.0 + tolerance)
        return {
            "inequality": f"lambda_1 <= {bound.name}",
            "bound": bound.name,
            "holds": extrapolated <= allowed,
            "margin": allowed - extrapolated,
            "tolerance": tolerance,
            "margin_scale": "linear",
        }

    def build_verdicts(self, bounds: List[BoundResult], fem: Dict[str, EigenResult]) -> List[Dict[str, Any]]:
        """
        One verdict per bound.

        Lower bounds must not exceed lambda_1 on the finest mesh (conforming
        elements overestimate). Upper bounds must dominate the extrapolated
        value up to a relative tolerance of 3 error estimates.
        """
        verdicts = []
        for bound in bounds:
            operator = "laplacian" if bound.operator == LAPLACIAN and "laplacian" in fem else "coefficient"
            verdict = self._verdict(bound, fem[operator])
            verdict["operator"] = bound.operator
            verdicts.append(verdict)
            if verdict["holds"]:
                self.stats["verdicts_passed"] += 1
            else:
                self.stats["verdicts_failed"] += 1
                logger.warning(f"Verdict failed: {verdict['inequality']} (margin {verdict['margin']:.6g})")
        return verdicts

    def run_checks(self, setup: CaseSetup) -> List[Dict[str, Any]]:
        """Field sampling, isometry and weighted Poincare checks."""
        checks: List[Dict[str, Any]] = []
        samples = setup.checks["field_samples"]
        report = validate_field(setup.coefficient, setup.domain, samples, seed=self.seed)
        checks.append({"check": "field_validation", "holds": report.passed, **report.to_dict()})

        if setup.qmap is None:
            logger.info("No built-in map agreed with this case; skipping map checks")
            return checks

        order = setup.checks["order"]
        for name in setup.checks["test_functions"]:
            lhs, rhs = isometry_check(setup.qmap, name, order)
            checks.append({
                "check": "isometry",
                "test_function": name,
                "lhs": lhs,
                "rhs": rhs,
                "holds": abs(lhs - rhs) <= self.ISOMETRY_TOLERANCE * abs(rhs),
                "tolerance": self.ISOMETRY_TOLERANCE,
            })
            for r in setup.checks["r_values"]:
                lhs, rhs = weighted_poincare_check(setup.qmap, float(r), name, order)
                checks.append({
                    "check": "weighted_poincare",
                    "test_function": name,
                    "r": float(r),
                    "lhs": lhs,
                    "rhs": rhs,
                    "holds": lhs <= rhs,
                    "tolerance": 0.0,
                })

        failed = sum(1 for c in checks if not c["holds"])
        self.stats["checks_failed"] += failed
        logger.info(f"Ran {len(checks)} checks, {failed} failed")
        return checks

    # ------------------------------------------------------------------
    # Reports
    # ------------------------------------------------------------------

    def _fem_block(self, fem: Dict[str, EigenResult]) -> Dict[str, Any]:
        block = fem["coefficient"].to_dict()
        if "laplacian" in fem:
            block["laplacian"] = fem["laplacian"].to_dict()
        return block

    def process(self, config: Dict[str, Any], verify: bool = False,
                setup: Optional[CaseSetup] = None) -> Dict[str, Any]:
        """
        Main processing function.

        Args:
            config: Parsed case configuration
            verify: Also run the FEM solves, verdicts and checks
            setup: The config already resolved by the caller; resolved here when None

        Returns:
            Report dictionary with a fixed key order

        Raises:
            ConfigError: Invalid configuration
            DomainError: A bound's preconditions fail
            NumericError: A numerical step fails; the exception carries the
                report built so far as ``partial_report``
        """
        if setup is None:
            setup = self.resolve(config)
        logger.info(f"Processing case {setup.case_id} ({'verify' if verify else 'bounds'})")
        start_time = datetime.now()

        report: Dict[str, Any] = {"case_id": setup.case_id}
        provenance = {"version": __version__, "config_hash": config_hash(config)}
        try:
            inputs = self.geometry_inputs(setup)
            report["inputs"] = inputs
            bounds = self.evaluate_bounds(setup, inputs)
            report["bounds"] = [b.to_dict() for b in bounds]

            if verify:
                fem = self.run_fem(setup)
                report["fem"] = self._fem_block(fem)
                report["checks"] = self.run_checks(setup)
                report["verdicts"] = self.build_verdicts(bounds, fem)
        except NumericError as e:
            report["provenance"] = provenance
            report["error"] = {"type": type(e).__name__, "message": str(e)}
            e.partial_report = report
            raise

        report["provenance"] = provenance
        processing_time = (datetime.now() - start_time).total_seconds()
        logger.info(f"Case {setup.case_id} completed in {processing_time:.2f} seconds")
        return report

    def csv_rows(self, report: Dict[str, Any]) -> List[Dict[str, Any]]:
        """Flatten a report: bound rows, one row per (mesh, eigenvalue) and a summary row per solve."""
        case_id = report["case_id"]
        rows: List[Dict[str, Any]] = []

        for bound in report.get("bounds", []):
            rows.append({
                "case_id": case_id, "row_type": "bound", "name": bound["name"],
                "value": bound.get("value"), "log10_value": bound.get("log10_value"),
            })

        fem = report.get("fem")
        if fem:
            solves = [("coefficient", fem)]
            if "laplacian" in fem:
                solves.append(("laplacian", fem["laplacian"]))
            for operator, block in solves:
                for level, mesh in enumerate(block["meshes"]):
                    rows.append({
                        "case_id": case_id, "row_type": "mesh", "name": operator, "level": level,
                        "h": mesh["h"], "index": 0, "value": mesh["lambda1"],
                    })
                for index, value in enumerate(block["eigenvalues"]):
                    rows.append({
                        "case_id": case_id, "row_type": "eigenvalue", "name": operator,
                        "level": len(block["meshes"]) - 1, "h": block["mesh_h"], "index": index, "value": value,
                    })
                rows.append({
                    "case_id": case_id, "row_type": "summary", "name": operator,
                    "h": block["mesh_h"], "index": 0, "value": block["extrapolated"],
                    "error_estimate": block["error_estimate"],
                })
        return rows
