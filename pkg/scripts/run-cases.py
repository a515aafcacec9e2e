#!/usr/bin/env python3
"""
Run Verification Cases

Runs `qcbounds verify` for every JSON case config in a directory on a thread
pool and prints a per-case summary with the exit codes.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcbounds.errors import ConfigError, NumericError  # noqa: E402
from qcbounds.main import main as qcbounds_main  # noqa: E402
from qcbounds.report_store import ReportStore  # noqa: E402


EXIT_LABELS = {0: "ok", ConfigError.exit_code: "config/domain error", NumericError.exit_code: "numeric error"}


def run_case(config_path: Path, output_dir: Path, command: str, threads: int, seed) -> int:
    argv = [command, "--config", str(config_path), "--threads", str(threads),
            "--output", str(output_dir / f"{config_path.stem}.json"), "--log-level", "WARNING"]
    if seed is not None:
        argv += ["--seed", str(seed)]
    return qcbounds_main(argv)


def main():
    parser = argparse.ArgumentParser(description="Verify every case config in a directory")
    parser.add_argument("--configs", type=str, default="./samples", help="Directory of case configs (default: ./samples)")
    parser.add_argument("--output", type=str, default="./results", help="Report directory (default: ./results)")
    parser.add_argument("--command", choices=["bounds", "verify"], default="verify", help="Subcommand to run (default: verify)")
    parser.add_argument("--workers", type=int, default=2, help="Cases run in parallel (default: 2)")
    parser.add_argument("--threads", type=int, default=1, help="Assembly threads per case (default: 1)")
    parser.add_argument("--seed", type=int, default=None, help="Seed for the sampling-based validators")
    args = parser.parse_args()

    configs = ReportStore(args.output).list_configs(args.configs)
    if not configs:
        print(f"Error: no case configs found in {args.configs}")
        sys.exit(1)

    output_dir = Path(args.output).absolute()
    print("=" * 60)
    print(f"Running qcbounds {args.command}")
    print("=" * 60)
    print(f"Configs: {len(configs)} from {Path(args.configs).absolute()}")
    print(f"Reports: {output_dir}")
    print(f"Workers: {args.workers} (threads per case: {args.threads})")
    print()

    start_time = datetime.now()
    with ThreadPoolExecutor(max_workers=max(args.workers, 1)) as pool:
        futures = {
            path: pool.submit(run_case, path, output_dir, args.command, args.threads, args.seed)
            for path in configs
        }
        codes = {path: future.result() for path, future in futures.items()}

    print("-" * 60)
    for path, code in codes.items():
        marker = "✓" if code == 0 else "✗"
        print(f"{marker} {path.name}: {EXIT_LABELS.get(code, f'exit {code}')}")

    failed = sum(1 for code in codes.values() if code != 0)
    elapsed = (datetime.now() - start_time).total_seconds()
    print("\n" + "=" * 60)
    print("Run Summary")
    print("=" * 60)
    print(f"  Cases: {len(codes)}")
    print(f"  Succeeded: {len(codes) - failed}")
    print(f"  Failed: {failed}")
    print(f"  Elapsed: {elapsed:.1f} seconds")
    print()
    print("Summarize the reports:")
    print(f"  python scripts/summarize-reports.py --reports {output_dir}")

    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
