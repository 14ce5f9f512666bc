#!/usr/bin/env python3
"""Run every verification suite at full scale and write JSON reports.

Usage:
    python scripts/run_verification.py [--seed N] [--out-dir reports]

Suites run at the scales used by the acceptance gate; the summary table goes
to stdout and one report file per suite lands in the output directory.
"""

import argparse
import pathlib
import sys

from graphoid.suites import run_suite

FULL_SCALE = {
    "axioms": dict(n_vars=4, samples=200),
    "dsep-soundness": dict(n_vars=5, samples=200),
    "components": dict(n_vars=4, samples=100),
    "relations": dict(n_vars=4, samples=100),
    "clean": dict(n_vars=5, samples=500),
    "pt-bin": dict(n_vars=5, samples=200),
    "gaussian-props": dict(n_vars=5, samples=100),
    "transitivity": dict(n_vars=5, samples=200),
    "simnet-equiv": dict(n_vars=5, samples=50),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="reports")
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    all_ok = True
    for name, scale in FULL_SCALE.items():
        report = run_suite(name, seed=args.seed, **scale)
        (out_dir / f"suite_{name}.json").write_text(report.to_json())
        print(report.summary())
        all_ok = all_ok and report.ok
    print("all suites ok" if all_ok else "FAILURES FOUND", file=sys.stderr)
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
