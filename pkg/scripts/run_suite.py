#!/usr/bin/env python3
"""Run the verification suite and print the text report.

Equivalent to `torsionlab verify` but handy when iterating on the library
itself: `python scripts/run_suite.py --cases 20 --seed 1`.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from torsionlab.suite import SuiteConfig, report_text, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cases", type=int, default=100)
    parser.add_argument("--max-dim", type=int, default=4)
    parser.add_argument("--window", type=int, nargs=2, default=(-4, 4), metavar=("LO", "HI"))
    args = parser.parse_args()
    config = dataclasses.replace(
        SuiteConfig(),
        seed=args.seed,
        cases=args.cases,
        max_dim=args.max_dim,
        window=tuple(args.window),
    )
    report = run_suite(config)
    sys.stdout.write(report_text(report))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
