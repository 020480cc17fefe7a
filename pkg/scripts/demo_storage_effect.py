#!/usr/bin/env python3
"""Three-day walkthrough: why limited shelf-life changes pricing.

A single buyer values one unit at 1, 1 and 1000 on days 1-3, goods keep
full value for two days. The optimal schedule prices day 1 low so the buyer
stores a unit for day 2 - storage is necessary for the optimum - and raising
the storage cost from 0 to 2 strictly lowers the seller's revenue, which
can never happen with unlimited shelf-life.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shelfprice import (
    Cliff,
    Instance,
    Money,
    ValuationMatrix,
    best_response,
    evaluate_outcome,
    solve_cliff,
    solve_no_storage,
)


def main() -> None:
    matrix = ValuationMatrix.from_units([[1], [1], [1000]])
    for cost in (0, 2):
        inst = Instance(matrix, Cliff(2), Money.from_units(cost), "single")
        res = solve_cliff(inst)
        plan = best_response(inst, res.schedule)
        out = evaluate_outcome(inst, res.schedule, plan)
        stored = sum(1 for _, t, s in plan.assignments if s != t)
        print(f"storage cost {cost}: prices "
              + ",".join(str(p) for p in res.schedule.prices)
              + f"  revenue {out.revenue}  stored units {stored}")

    inst = Instance(matrix, Cliff(2), Money(0), "single")
    base = solve_no_storage(inst)
    print("unlimited shelf-life: prices "
          + ",".join(str(p) for p in base.schedule.prices)
          + f"  revenue {base.outcome.revenue}")


if __name__ == "__main__":
    main()
