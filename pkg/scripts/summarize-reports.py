#!/usr/bin/env python3
"""
Summarize Verification Reports

Collects every report JSON in a directory into one CSV table with a row per
verdict (or per bound for bounds-only reports).
"""

import argparse
import json
import sys
from pathlib import Path

import pandas as pd


COLUMNS = ["case_id", "bound", "kind", "operator", "value", "log10_value",
           "lambda1", "extrapolated", "error_estimate", "holds", "margin", "margin_scale"]


def report_rows(report: dict) -> list:
    """One row per bound, joined with its verdict when the report has one."""
    fem = report.get("fem") or {}
    verdicts = {}
    for verdict in report.get("verdicts", []):
        verdicts[verdict["bound"]] = verdict

    rows = []
    for bound in report.get("bounds", []):
        solve = fem.get("laplacian", fem) if bound.get("operator") == "laplacian" else fem
        verdict = verdicts.get(bound["name"], {})
        rows.append({
            "case_id": report["case_id"],
            "bound": bound["name"],
            "kind": bound["kind"],
            "operator": bound.get("operator"),
            "value": bound.get("value"),
            "log10_value": bound.get("log10_value"),
            "lambda1": (solve.get("eigenvalues") or [None])[0],
            "extrapolated": solve.get("extrapolated"),
            "error_estimate": solve.get("error_estimate"),
            "holds": verdict.get("holds"),
            "margin": verdict.get("margin"),
            "margin_scale": verdict.get("margin_scale"),
        })
    return rows


def main():
    parser = argparse.ArgumentParser(description="Collect qcbounds reports into one CSV table")
    parser.add_argument("--reports", type=str, default="./results", help="Directory of report JSON files (default: ./results)")
    parser.add_argument("--output", type=str, default="./results/summary.csv", help="CSV path (default: ./results/summary.csv)")
    args = parser.parse_args()

    report_dir = Path(args.reports)
    paths = sorted(p for p in report_dir.glob("*.json") if not p.name.endswith(".partial.json"))
    if not paths:
        print(f"Error: no reports found in {report_dir.absolute()}")
        sys.exit(1)

    rows = []
    for path in paths:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                report = json.load(f)
        except json.JSONDecodeError as e:
            print(f"✗ Skipping {path.name}: invalid JSON ({e})")
            continue
        if "case_id" not in report or "bounds" not in report:
            print(f"  Skipping {path.name}: not a case report")
            continue
        rows.extend(report_rows(report))
        print(f"✓ {path.name}: {len(report['bounds'])} bound(s)")

    table = pd.DataFrame(rows, columns=COLUMNS)
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(output, index=False, float_format="%.12g")

    checked = table["holds"].notna()
    print("-" * 60)
    print(f"Rows: {len(table)} from {len(paths)} report(s)")
    print(f"Verdicts: {int(checked.sum())} ({int((table.loc[checked, 'holds'] == False).sum())} failed)")  # noqa: E712
    print(f"Summary written to {output.absolute()}")


if __name__ == "__main__":
    main()
