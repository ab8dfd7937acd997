#!/usr/bin/env python3
"""Run the consolidated worked-example pipeline and write report.json.

Usage: python scripts/reproduce_example.py [OUT_DIR] [--scale full|small|N]
"""

import argparse
import sys

from schrograph.reproduce import reproduce_example


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", nargs="?", default="reproduce-out")
    ap.add_argument("--scale", default="full")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    scale = args.scale if args.scale in ("full", "small") else int(args.scale)
    report = reproduce_example(out_dir=args.out_dir, scale=scale, seed=args.seed)
    for name, verdict in report.data["stage_verdicts"].items():
        print(f"{verdict:>6}  {name}")
    print(f"report: {args.out_dir}/report.json")
    failing = report.data.get("failing_stages")
    if failing:
        print(f"failing stages: {', '.join(failing)}", file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
