"""
Report Store

Reads case configurations and writes reports, convergence tables and mesh
exports under one output directory. Write methods return True/False and log
failures instead of raising.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from .fem import Mesh, export_mesh


logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12

CSV_COLUMNS = [
    "case_id", "row_type", "name", "level", "h", "index",
    "value", "log10_value", "error_estimate",
]


def round_floats(obj: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """
    Round every float in a nested structure to a fixed number of significant digits.

    NaN and infinities become None so the output stays valid JSON.
    """
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {key: round_floats(value, digits) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(value, digits) for value in obj]
    if hasattr(obj, "item"):
        # numpy scalars
        return round_floats(obj.item(), digits)
    return obj


def canonical_json(obj: Any) -> str:
    """Key-sorted, whitespace-free JSON used for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(config: Dict[str, Any]) -> str:
    """SHA-256 of the semantic part of a case config (the output block is excluded)."""
    semantic = {key: value for key, value in config.items() if key != "output"}
    return hashlib.sha256(canonical_json(semantic).encode("utf-8")).hexdigest()


class ReportStore:
    """File-system store for case configs and verification reports."""

    def __init__(self, output_dir: str = "./results"):
        """
        Initialize the store.

        Args:
            output_dir: Directory reports are written to; relative report
                paths resolve against it
        """
        self.output_dir = Path(output_dir)
        logger.info(f"Initialized ReportStore at: {self.output_dir}")

    def resolve(self, path) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.output_dir / path

    def read_config(self, path) -> Optional[Dict[str, Any]]:
        """
        Load a case configuration.

        Args:
            path: Config file path (not resolved against the output directory)

        Returns:
            Parsed config dictionary, or None if it cannot be read
        """
        try:
            logger.info(f"Reading case config: {path}")
            with open(path, "r", encoding="utf-8") as f:
                config = json.load(f)
            if not isinstance(config, dict):
                logger.error(f"Config {path} must contain a JSON object, got {type(config).__name__}")
                return None
            return config
        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON in {path}: {e}")
            return None
        except Exception as e:
            logger.error(f"Unexpected error reading config {path}: {str(e)}", exc_info=True)
            return None

    def write_json(self, path, data: Dict[str, Any]) -> bool:
        """
        Write a report as JSON with floats rounded to 12 significant digits.

        Key order follows the dictionary's insertion order, so identical
        reports produce byte-identical files.

        Returns:
            True if successful, False otherwise
        """
        target = self.resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            content = json.dumps(round_floats(data), indent=2, ensure_ascii=False, allow_nan=False)
            with open(target, "w", encoding="utf-8", newline="\n") as f:
                f.write(content + "\n")
            logger.info(f"Wrote report ({len(content)} characters) to {target}")
            return True
        except Exception as e:
            logger.error(f"Unexpected error writing report {target}: {str(e)}", exc_info=True)
            return False

    def write_csv(self, path, rows: List[Dict[str, Any]]) -> bool:
        """
        Write report rows under the fixed CSV header.

        Returns:
            True if successful, False otherwise
        """
        target = self.resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            frame = pd.DataFrame(round_floats(rows), columns=CSV_COLUMNS)
            frame.to_csv(target, index=False, float_format=f"%.{SIGNIFICANT_DIGITS}g", lineterminator="\n")
            logger.info(f"Wrote {len(frame)} CSV rows to {target}")
            return True
        except Exception as e:
            logger.error(f"Unexpected error writing CSV {target}: {str(e)}", exc_info=True)
            return False

    def write_text(self, path, content: str) -> bool:
        target = self.resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8")
            return True
        except Exception as e:
            logger.error(f"Unexpected error writing {target}: {str(e)}", exc_info=True)
            return False

    def write_mesh(self, path, mesh: Mesh) -> bool:
        target = self.resolve(path)
        try:
            export_mesh(mesh, target)
            return True
        except Exception as e:
            logger.error(f"Unexpected error exporting mesh to {target}: {str(e)}", exc_info=True)
            return False

    def list_configs(self, directory) -> List[Path]:
        """
        List JSON configs in a directory, sorted by name.

        Returns:
            Config paths (empty if the directory does not exist)
        """
        directory = Path(directory)
        if not directory.is_dir():
            logger.warning(f"Config directory does not exist: {directory}")
            return []
        configs = sorted(p for p in directory.glob("*.json") if p.is_file())
        logger.info(f"Found {len(configs)} config(s) in {directory}")
        return configs

    def exists(self, path) -> bool:
        return self.resolve(path).exists()

    def delete(self, path) -> bool:
        target = self.resolve(path)
        try:
            target.unlink()
            logger.info(f"Deleted {target}")
            return True
        except FileNotFoundError:
            logger.warning(f"Nothing to delete at {target}")
            return False
        except Exception as e:
            logger.error(f"Unexpected error deleting {target}: {str(e)}", exc_info=True)
            return False
