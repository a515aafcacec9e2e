#!/usr/bin/env python3
"""
qcbounds - Main Entry Point

Command-line front end: converts between coefficient matrices and
dilatations, evaluates eigenvalue bounds for a case configuration, verifies
them against finite-element eigenvalues, prints the Sobolev-Poincare and
quasidisc constants and exports meshes.
"""

import argparse
import json
import logging
import math
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .beltrami import (
    CoefficientMatrix,
    dilatation_from_matrix,
    ellipticity_constant,
    matrix_eigenvalues,
    matrix_from_dilatation,
)
from .case_processor import CaseProcessor
from .constants import (
    PoincareConstantQuery,
    QuasidiscConstantQuery,
    beta_star_excess,
    beta_tilde_excess,
    c_beta,
    jacobian_norm_bound,
    m_beta_minimum,
    nu,
    poincare_minimum,
    stability_minimum,
)
from .errors import ConfigError, NumericError, QCBoundsError
from .fem import mesh_domain, refine_mesh
from .report_store import ReportStore, round_floats
from .specfun import bessel_j0_first_zero


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def configure_logging(level: str = "INFO") -> None:
    """Log to stderr so stdout stays machine-readable."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )


def get_env_var(name: str, required: bool = True, default: str = None) -> str:
    """
    Get environment variable with validation.

    Args:
        name: Environment variable name
        required: Whether the variable is required
        default: Default value if not required

    Returns:
        Environment variable value

    Raises:
        ValueError: If required variable is missing
    """
    value = os.environ.get(name, default)

    if required and not value:
        raise ValueError(f"Required environment variable '{name}' is not set")

    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="Path to the case configuration (JSON)")
    common.add_argument("--output", type=str, help="Report or export path (default: <output dir>/<case id>.<format>)")
    common.add_argument("--format", choices=["json", "csv"], help="Report format (default: json)")
    common.add_argument("--threads", type=int, help="Assembly threads (default: $QCBOUNDS_THREADS or 1)")
    common.add_argument("--seed", type=int, help="Seed for sampling-based validators")
    common.add_argument(
        "--log-level", type=str, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level (default: $QCBOUNDS_LOG_LEVEL or INFO)",
    )

    parser = argparse.ArgumentParser(
        prog="qcbounds",
        description="Dirichlet eigenvalue bounds for divergence-form elliptic operators",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    convert = subparsers.add_parser("convert", parents=[common], help="Convert between A and mu")
    convert.add_argument("--a11", type=float)
    convert.add_argument("--a12", type=float)
    convert.add_argument("--a22", type=float)
    convert.add_argument("--mu-re", type=float)
    convert.add_argument("--mu-im", type=float, default=0.0)

    subparsers.add_parser("bounds", parents=[common], help="Evaluate the bounds requested by a case config")
    subparsers.add_parser("verify", parents=[common], help="Evaluate bounds and verify them by FEM")

    constants = subparsers.add_parser("constants", parents=[common], help="Print Sobolev-Poincare and quasidisc constants")
    constants.add_argument("--r", type=float, help="Integrability exponent r >= 2 for B_(r,2)")
    constants.add_argument("--beta", type=float, help="Regularity exponent beta > 1")
    constants.add_argument("--K", type=float, help="Quasiconformality coefficient")
    constants.add_argument("--area", type=float, default=math.pi, help="Target domain area (default: pi)")

    mesh = subparsers.add_parser("mesh", parents=[common], help="Export the mesh of a case's domain")
    mesh.add_argument("--refine", type=int, default=0, help="Extra red refinements of the initial mesh")

    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_convert(args) -> Dict[str, Any]:
    """Matrix entries -> dilatation, or dilatation -> matrix, with K."""
    matrix_given = any(v is not None for v in (args.a11, args.a12, args.a22))
    if matrix_given == (args.mu_re is not None):
        raise ConfigError("convert needs either --a11/--a12/--a22 or --mu-re/--mu-im")

    if matrix_given:
        if any(v is None for v in (args.a11, args.a12, args.a22)):
            raise ConfigError("convert needs all of --a11, --a12 and --a22")
        A = CoefficientMatrix(args.a11, args.a12, args.a22)
        mu = dilatation_from_matrix(A)
        result = {"input": {"a11": A.a11, "a12": A.a12, "a22": A.a22}, "mu": {"re": mu.re, "im": mu.im}}
        modulus = abs(mu)
    else:
        A = matrix_from_dilatation(complex(args.mu_re, args.mu_im))
        result = {"input": {"mu_re": args.mu_re, "mu_im": args.mu_im}, "matrix": {"a11": A.a11, "a12": A.a12, "a22": A.a22}}
        modulus = abs(complex(args.mu_re, args.mu_im))

    result["abs_mu"] = modulus
    result["eigenvalues"] = list(matrix_eigenvalues(A))
    result["K"] = ellipticity_constant(modulus)
    return result


def cmd_constants(args) -> Dict[str, Any]:
    """B_(r,2), A_(4b/(b-1),2), nu, b~, b*, C_b and M_b(K) for the given parameters."""
    if args.r is None and args.beta is None and args.K is None:
        raise ConfigError("constants needs at least one of --r, --beta, --K")

    table: Dict[str, Any] = {"area": args.area}

    if args.r is not None:
        minimum = poincare_minimum(PoincareConstantQuery(r=args.r, area=args.area))
        entry = {"r": args.r, "B_upper": minimum.value, "p": minimum.p}
        if args.r == 2.0:
            exact = math.sqrt(args.area / math.pi) / bessel_j0_first_zero().value
            entry["disc_exact"] = exact
            entry["gap"] = minimum.value - exact
        table["poincare"] = entry
        logger.info(f"B_(r={args.r:g},2) <= {minimum.value:.12g} at p = {minimum.p:.12g}")

    if args.beta is not None:
        minimum = stability_minimum(args.beta, args.area)
        table["stability"] = {
            "beta": args.beta,
            "r": 4.0 * args.beta / (args.beta - 1.0),
            "A_upper": minimum.value,
            "p": minimum.p,
        }
        logger.info(f"A_(4b/(b-1),2) <= {minimum.value:.12g} for b = {args.beta:g}")

    if args.K is not None:
        t_tilde = beta_tilde_excess(args.K)
        t_star = beta_star_excess(args.K)
        quasidisc: Dict[str, Any] = {
            "K": args.K,
            "beta_tilde_minus_one": t_tilde,
            "beta_star_minus_one": t_star,
            "beta_star": 1.0 + t_star,
        }
        # evaluate beta-dependent constants halfway into (1, b*) unless beta is given
        t = args.beta - 1.0 if args.beta is not None else 0.5 * t_star
        quasidisc["beta_minus_one"] = t
        quasidisc["log10_nu"] = nu(None, args.K, excess=t).log10_magnitude
        if t < t_tilde:
            quasidisc["log10_c_beta"] = c_beta(None, args.K, excess=t).log10_magnitude
            quasidisc["log10_jacobian_norm_bound"] = jacobian_norm_bound(None, args.K, args.area, excess=t).log10_magnitude
        minimum = m_beta_minimum(QuasidiscConstantQuery(K=args.K, area=args.area))
        quasidisc["log10_m_beta"] = minimum.value.log10_magnitude
        quasidisc["m_beta_beta_minus_one"] = minimum.beta_excess
        quasidisc["m_beta_p"] = minimum.p
        table["quasidisc"] = quasidisc
        logger.info(f"b~(K={args.K:g}) - 1 = {t_tilde:.6e}, b* - 1 = {t_star:.6e}")
        logger.info(f"log10 M_b(K) = {minimum.value.log10_magnitude:.12g}")

    return table


def _load_config(store: ReportStore, path: Optional[str]) -> Dict[str, Any]:
    if not path:
        raise ConfigError("--config is required for this command")
    config = store.read_config(path)
    if config is None:
        raise ConfigError(f"Cannot read case configuration: {path}")
    return config


def _report_target(args, config: Dict[str, Any], case_id: str) -> Tuple[Path, str]:
    output_block = config.get("output", {})
    fmt = args.format or output_block.get("format", "json")
    if args.output:
        return Path(args.output).absolute(), fmt
    return Path(output_block.get("path", f"{case_id}.{fmt}")), fmt


def _write_report(store: ReportStore, processor: CaseProcessor, report: Dict[str, Any], path: Path, fmt: str) -> None:
    if fmt == "csv":
        written = store.write_csv(path, processor.csv_rows(report))
    else:
        written = store.write_json(path, report)
    if not written:
        raise NumericError(f"Failed to write report to {store.resolve(path)}")


def cmd_case(args, store: ReportStore, threads: int, verify: bool) -> Dict[str, Any]:
    config = _load_config(store, args.config)
    processor = CaseProcessor(threads=threads, seed=args.seed)
    setup = processor.resolve(config)
    path, fmt = _report_target(args, config, setup.case_id)

    try:
        report = processor.process(config, verify=verify, setup=setup)
    except NumericError as e:
        partial = getattr(e, "partial_report", None)
        if partial is not None:
            logger.error(f"Writing partial report to {store.resolve(path)}")
            store.write_json(path.with_suffix(".partial.json"), partial)
        raise

    _write_report(store, processor, report, path, fmt)
    verdicts = report.get("verdicts", [])
    return {
        "case_id": report["case_id"],
        "report": str(store.resolve(path)),
        "bounds": len(report.get("bounds", [])),
        "verdicts": len(verdicts),
        "verdicts_failed": sum(1 for v in verdicts if not v["holds"]),
        "checks_failed": sum(1 for c in report.get("checks", []) if not c["holds"]),
    }


def cmd_mesh(args, store: ReportStore) -> Dict[str, Any]:
    config = _load_config(store, args.config)
    setup = CaseProcessor().resolve(config)

    mesh = mesh_domain(setup.domain, setup.fem["target_h"])
    for _ in range(max(args.refine, 0)):
        mesh = refine_mesh(mesh, setup.domain)
    mesh.validate()

    path = Path(args.output).absolute() if args.output else Path(f"{setup.case_id}.mesh")
    if not store.write_mesh(path, mesh):
        raise NumericError(f"Failed to export mesh to {store.resolve(path)}")
    return {
        "case_id": setup.case_id,
        "mesh": str(store.resolve(path)),
        "vertices": mesh.n_vertices,
        "triangles": mesh.n_triangles,
        "h": mesh.h,
    }


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    configure_logging(args.log_level or get_env_var("QCBOUNDS_LOG_LEVEL", required=False, default="INFO"))

    logger.info("=" * 70)
    logger.info(f"qcbounds {__version__}: {args.command}")
    logger.info("=" * 70)

    start_time = datetime.now()

    try:
        threads_setting = args.threads if args.threads is not None else get_env_var(
            "QCBOUNDS_THREADS", required=False, default="1"
        )
        try:
            threads = int(threads_setting)
        except ValueError:
            raise ConfigError(f"thread count must be an integer, got {threads_setting!r}") from None
        if threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {threads}")
        output_dir = get_env_var("QCBOUNDS_OUTPUT_DIR", required=False, default="./results")

        logger.info("Configuration:")
        logger.info(f"  - Config: {args.config}")
        logger.info(f"  - Output Directory: {output_dir}")
        logger.info(f"  - Threads: {threads}")
        logger.info(f"  - Seed: {args.seed}")

        store = ReportStore(output_dir)

        if args.command == "convert":
            summary = cmd_convert(args)
        elif args.command == "constants":
            summary = cmd_constants(args)
            if args.output and not store.write_json(Path(args.output).absolute(), summary):
                raise NumericError(f"Failed to write constants to {args.output}")
        elif args.command == "mesh":
            summary = cmd_mesh(args, store)
        else:
            summary = cmd_case(args, store, threads, verify=args.command == "verify")

        print(json.dumps(round_floats(summary), indent=2))

        total_time = (datetime.now() - start_time).total_seconds()
        logger.info("=" * 70)
        logger.info("Execution Summary:")
        logger.info(f"  - Status: SUCCESS")
        logger.info(f"  - Command: {args.command}")
        if "report" in summary:
            logger.info(f"  - Report: {summary['report']}")
            logger.info(f"  - Bounds: {summary['bounds']}")
            logger.info(f"  - Verdicts: {summary['verdicts']} ({summary['verdicts_failed']} failed)")
        logger.info(f"  - Execution Time: {total_time:.2f} seconds")
        logger.info("=" * 70)

        return 0

    except QCBoundsError as e:
        logger.error("=" * 70)
        logger.error(f"FATAL ERROR: {str(e)}")
        logger.error("=" * 70)
        logger.debug("Full traceback:", exc_info=True)
        return e.exit_code

    except Exception as e:
        logger.error("=" * 70)
        logger.error(f"FATAL ERROR: {str(e)}")
        logger.error("=" * 70)
        logger.exception("Full traceback:")
        return 1


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
