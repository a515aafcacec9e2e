#!/usr/bin/env python3
"""
Case Configuration Generator

Writes the built-in example cases (unit disc with the Laplacian and the
spiral field, the affinely stretched ellipse, the petal and the unit square)
as JSON case configurations for the qcbounds CLI.
"""

import argparse
import json
from pathlib import Path


class CaseConfigGenerator:
    """Builds case configurations for the built-in examples."""

    CASES = {
        "disc_laplacian": {
            "domain": {"kind": "disc", "radius": 1.0},
            "coefficient": {"name": "identity"},
            "bounds": ["payne_weinberger", "rfk", "monotonicity", "makai_hayman", "sandwich", "poincare_lower"],
            "alpha_makai": 0.25,
        },
        "disc_spiral": {
            "domain": {"kind": "disc", "radius": 1.0},
            "coefficient": {"name": "spiral"},
            "bounds": ["rfk", "sandwich", "poincare_lower", "thm52", "stability_gap", "quasidisc"],
            "beta": 2.0,
        },
        "ellipse_affine": {
            "domain": {"kind": "ellipse", "a": 0.5},
            "coefficient": {"name": "ellipse_affine", "a": 0.5},
            "bounds": ["payne_weinberger", "rfk", "monotonicity", "sandwich", "thm52"],
            "beta": 2.0,
        },
        "petal": {
            "domain": {"kind": "petal"},
            "coefficient": {"name": "petal"},
            "bounds": ["rfk", "monotonicity", "sandwich", "poincare_lower", "quasidisc"],
        },
        "square_laplacian": {
            "domain": {"kind": "square", "side": 1.0},
            "coefficient": {"name": "identity"},
            "bounds": ["payne_weinberger", "rfk", "monotonicity"],
        },
    }

    # The spiral coefficient is discontinuous at the origin and converges slower
    EXTRA_REFINEMENTS = {"disc_spiral": 1}

    def __init__(self, refinements: int = 3, target_h: float = 0.1, ellipse_a: float = 0.5):
        self.refinements = refinements
        self.target_h = target_h
        self.ellipse_a = ellipse_a

    def generate_case(self, case_id: str) -> dict:
        """Config for one built-in case."""
        case = json.loads(json.dumps(self.CASES[case_id]))
        if case_id == "ellipse_affine":
            case["domain"]["a"] = self.ellipse_a
            case["coefficient"]["a"] = self.ellipse_a
        config = {"case_id": case_id}
        config.update(case)
        config["fem"] = {
            "refinements": self.refinements + self.EXTRA_REFINEMENTS.get(case_id, 0),
            "target_h": self.target_h,
        }
        return config

    def save_case(self, config: dict, output_path: Path) -> Path:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(config, f, indent=2)
            f.write("\n")
        return output_path


def main():
    """Main function to handle CLI arguments and write the configs."""
    parser = argparse.ArgumentParser(
        description="Generate case configurations for the built-in qcbounds examples"
    )

    parser.add_argument(
        "--output",
        type=str,
        default="./samples",
        help="Output directory for generated configs (default: ./samples)"
    )

    parser.add_argument(
        "--cases",
        nargs="+",
        choices=sorted(CaseConfigGenerator.CASES),
        default=sorted(CaseConfigGenerator.CASES),
        help="Cases to generate (default: all)"
    )

    parser.add_argument(
        "--refinements",
        type=int,
        default=3,
        help="Nested mesh levels per FEM solve (default: 3)"
    )

    parser.add_argument(
        "--target-h",
        type=float,
        default=0.1,
        help="Edge length of the coarsest mesh (default: 0.1)"
    )

    parser.add_argument(
        "--ellipse-a",
        type=float,
        default=0.5,
        help="Stretch parameter of the ellipse case (default: 0.5)"
    )

    args = parser.parse_args()

    output_dir = Path(args.output)
    generator = CaseConfigGenerator(args.refinements, args.target_h, args.ellipse_a)

    print(f"Generating {len(args.cases)} case config(s)...")
    print(f"Output directory: {output_dir.absolute()}")
    print("-" * 60)

    for case_id in args.cases:
        config = generator.generate_case(case_id)
        path = generator.save_case(config, output_dir / f"{case_id}.json")
        print(f"✓ Generated: {path.name}")
        print(f"  - Domain: {config['domain']['kind']}")
        print(f"  - Coefficient: {config['coefficient']['name']}")
        print(f"  - Bounds: {', '.join(config['bounds'])}")
        print()

    print("-" * 60)
    print(f"✓ Successfully generated {len(args.cases)} config(s)")

    print("\nNext Steps:")
    print(f"1. Evaluate bounds: python -m qcbounds bounds --config {output_dir / args.cases[0]}.json")
    print(f"2. Verify all cases: python scripts/run-cases.py --configs {output_dir}")
    print("3. Summarize: python scripts/summarize-reports.py")


if __name__ == "__main__":
    main()
