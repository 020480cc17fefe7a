#!/usr/bin/env python3
"""Run the revenue-bound certification matrix and print one line per check."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shelfprice import (
    AdversarialConfig,
    adversarial_instance,
    certify_upper_bound,
    lower_bound_schedules,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=int, nargs="*", default=[2, 3])
    parser.add_argument("--d", type=int, nargs="*", default=[2, 3])
    parser.add_argument("--k", type=int, nargs="*", default=[1, 2])
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    failures = 0
    for a in args.a:
        for d in args.d:
            for k in args.k:
                config = AdversarialConfig(a, d, k)
                cert = certify_upper_bound(config, threads=args.threads)
                floor = lower_bound_schedules(adversarial_instance(config))
                ok = cert.passed and cert.blocks_passed and floor.passed
                failures += not ok
                print(f"a={a} d={d} k={k}: OPT={cert.opt} M={cert.m} "
                      f"ceiling {cert.lhs} < {cert.rhs} "
                      f"floor {d}*{floor.best_revenue} >= {floor.m} "
                      f"[{'PASS' if ok else 'FAIL'}]")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
