#!/usr/bin/env python3
"""Storage-cost / shelf-life sweep with figure emission.

Defaults mirror the reference experiment family: 5 buyers over 20 days,
base values Normal(30, 10), daily values around the base with variance 2 or
5, shelf-lives 2-4 plus the unlimited baseline, storage costs 0-5. The full
grid takes a while; --quick shrinks it for a smoke run.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shelfprice import Money, SweepConfig, emit_figure_data, run_sweep
from shelfprice.experiments import FIGURES, averages_to_csv, rows_to_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seeds", type=int, default=30)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--variance", type=float, nargs="*", default=[2.0, 5.0])
    parser.add_argument("--quick", action="store_true",
                        help="shrink to N=4, T=8, d in {2,3} for a fast pass")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    all_rows = []
    for variance in args.variance:
        kwargs = dict(
            daily_variance=variance,
            costs=tuple(Money.from_units(c) for c in range(6)),
            seeds=tuple(range(args.seeds)),
        )
        if args.quick:
            kwargs.update(n=4, t=8, durations=(2, 3, "infinite"))
        config = SweepConfig(**kwargs)
        rows = run_sweep(config, threads=args.threads)
        all_rows.extend(rows)
        print(f"variance {variance:g}: {len(rows)} cells")

    (out / "raw.csv").write_text(rows_to_csv(all_rows))
    (out / "averages.csv").write_text(averages_to_csv(all_rows))
    for figure in FIGURES:
        emit_figure_data(all_rows, figure, out / f"{figure}.csv", out / f"{figure}.svg")
    print(f"wrote raw rows, averages and {len(FIGURES)} figures to {out}")


if __name__ == "__main__":
    main()
