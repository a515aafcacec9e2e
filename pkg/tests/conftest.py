import json

import pytest

from qcbounds.specfun import bessel_j0_first_zero


J01 = 2.404825557695773


@pytest.fixture
def j0_sq():
    return bessel_j0_first_zero().squared


@pytest.fixture
def write_config(tmp_path):
    """Write a case config to a temp file and return its path."""
    def _write(config, name="case.json"):
        path = tmp_path / name
        path.write_text(json.dumps(config), encoding="utf-8")
        return path
    return _write


@pytest.fixture
def disc_laplacian_config():
    return {
        "case_id": "disc_laplacian",
        "domain": {"kind": "disc", "radius": 1.0},
        "coefficient": {"name": "identity"},
        "bounds": ["payne_weinberger", "rfk", "monotonicity"],
        "fem": {"refinements": 2, "target_h": 0.25, "eigen_count": 1},
    }
