#!/usr/bin/env python3
"""Run every verification suite on a desk-scale grid and write JSON + CSV reports."""

import json
import sys
from pathlib import Path

from tlw.cli import ExperimentConfig, emit, run

CONFIG = {
    "grid": {"n": 1, "L": 2, "J": 6, "k_min": 0, "k_max": 3},
    "weights": {"kind": "exp2", "s": 0.3, "p": 2.0},
    "suite": "all",
    "trials": 25,
    "seed": 20240801,
    "tolerances": {"identity": 1e-12, "ratio_band": 0.10},
}


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("reports")
    out_dir.mkdir(parents=True, exist_ok=True)
    config = ExperimentConfig.from_dict(CONFIG)
    report = run(config)
    emit(report, "json", out_dir / "all_suites.json")
    emit(report, "csv", out_dir / "all_suites.csv")
    (out_dir / "config.json").write_text(json.dumps(CONFIG, indent=2, sort_keys=True) + "\n")
    n_fail = len(report.hard_failures())
    for c in report.checks:
        print(f"[{c['status']:8s}] {c.get('suite','')}:{c['name']}")
    print(f"\n{len(report.checks)} checks, {n_fail} hard failures -> {out_dir}/")
    return 1 if n_fail else 0


if __name__ == "__main__":
    sys.exit(main())
