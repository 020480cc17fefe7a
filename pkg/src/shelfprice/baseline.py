"""Optimal pricing when goods never expire.

With unlimited shelf-life there is an optimal schedule under which buyers
never store, so the search is restricted to schedules with
p_t <= p_{t-1} + c: same-day purchase is then weakly cheapest for every
slot and daily revenue decouples. Prices are drawn from the pooled
candidate values (unit values shifted by whole multiples of the storage
cost in either direction), which covers every point at which some day's
demand can change; raising c only enlarges the feasible schedule set, so
revenue is non-decreasing in the storage cost.
"""

from __future__ import annotations

import time

import numpy as np

from .buyer import best_response
from .candidates import candidate_prices_all
from .dp import SolveResult, SolveStats, SolverError, _check_envelope
from .model import Cliff, Instance, PriceSchedule, evaluate_outcome
from .money import Money


def solve_no_storage(instance: Instance, *, threads: int = 1) -> SolveResult:
    """Optimal schedule treating the decay profile as identically one.

    Ties between optimal schedules resolve to the lexicographically
    smallest. The returned outcome is evaluated under infinite shelf-life
    regardless of the instance's own decay profile.
    """
    _check_envelope(instance)
    start = time.monotonic()
    horizon, n = instance.t, instance.n
    c = instance.storage_cost.raw

    pool = set()
    for t in range(1, horizon + 1):
        pool.update(p.raw for p in candidate_prices_all(instance, t))
    prices = np.array(sorted(pool), dtype=np.int64)
    m = len(prices)

    # day revenue at each candidate price: price * |{j : v_j >= price}|
    day_rev = []
    for t in range(1, horizon + 1):
        col = np.sort(np.array([v.raw for v in instance.valuations.column(t)], dtype=np.int64))
        day_rev.append((n - np.searchsorted(col, prices, side="left")) * prices)

    # the largest candidate reachable from each previous price
    ceiling = np.searchsorted(prices, prices + c, side="right") - 1

    suffix = [np.zeros(m, dtype=np.int64) for _ in range(horizon + 2)]
    for t in range(horizon, 1, -1):
        attainable = day_rev[t - 1] + suffix[t + 1]
        suffix[t] = np.maximum.accumulate(attainable)[ceiling]

    first = day_rev[0] + suffix[2]
    o = int(np.argmax(first))  # first max = smallest price
    total = int(first[o])
    chosen = [o]
    for t in range(2, horizon + 1):
        ub = ceiling[chosen[-1]]
        attainable = day_rev[t - 1] + suffix[t + 1]
        target = int(suffix[t][chosen[-1]])
        o = int(np.flatnonzero(attainable[: ub + 1] == target)[0])
        chosen.append(o)

    schedule = PriceSchedule(tuple(Money(int(prices[o])) for o in chosen))
    infinite = instance.with_decay(Cliff(horizon))
    plan = best_response(infinite, schedule)
    outcome = evaluate_outcome(infinite, schedule, plan)
    if outcome.revenue.raw != total:
        raise SolverError(
            f"self-check failed: tables claim {total}, buyer yields {outcome.revenue.raw}"
        )
    for i, t, s in plan.assignments:
        if s != t:
            raise SolverError("no-storage schedule induced storage")

    stats = SolveStats(
        states_total=m * horizon,
        states_per_day=tuple(m for _ in range(horizon)),
        candidate_sizes=tuple(m for _ in range(horizon)),
        wall_ms=int((time.monotonic() - start) * 1000),
    )
    return SolveResult(schedule, outcome, stats)
