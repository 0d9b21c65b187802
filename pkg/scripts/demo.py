#!/usr/bin/env python3
"""End-to-end demo: synthesize a dataset, compute metrics, render the matrix.

Writes fix.csv, table.csv, and dssm.svg into --out (default ./demo-out).
The SVG shows two planted attention groups split by a white boundary.
"""

import argparse
import sys
from pathlib import Path

from gazegroup.cli import main as cli


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo-out", help="output directory")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fix = out / "fix.csv"
    table = out / "table.csv"
    svg = out / "dssm.svg"

    steps = [
        ["synth", "--seed", str(args.seed), "--output", str(fix)],
        ["metrics", "--input", str(fix), "--output", str(table)],
        [
            "matrix",
            "--input", str(fix),
            "--weights", "AvgFix=0.5,AvgSac=0.5",
            "--k", "2",
            "--output", str(svg),
        ],
    ]
    for step in steps:
        code = cli(step)
        if code != 0:
            print(f"step failed ({code}): {' '.join(step)}", file=sys.stderr)
            return code
        print(f"wrote {step[step.index('--output') + 1]}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
