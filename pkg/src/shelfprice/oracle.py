"""Exhaustive ground truth: evaluate every schedule in a candidate grid.

The oracle enumerates the full cartesian product of per-day candidate
prices with a mixed-radix counter (day 1 most significant, so enumeration
order is lexicographic), scores each schedule with a vectorized replica of
the buyer best response, and keeps the revenue maximum with ties resolved
to the lexicographically smallest schedule. Chunks are merged in counter
order, so results do not depend on the worker count. Its job is trust, not
speed: no pruning beyond the candidate grid itself.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .buyer import best_response
from .candidates import CandidateSet, oracle_grid
from . import money
from .dp import INT64_SAFE, SolverError
from .model import Instance, Outcome, PriceSchedule, evaluate_outcome
from .money import Money


class BudgetExceededError(ValueError):
    """The candidate grid product is larger than the schedule budget."""

    def __init__(self, product: int, budget: int):
        super().__init__(f"grid holds {product} schedules, budget is {budget}")
        self.product = product
        self.budget = budget


@dataclass(frozen=True, slots=True)
class OracleResult:
    schedule: PriceSchedule
    outcome: Outcome
    schedules_evaluated: int
    wall_ms: int


class _BatchEvaluator:
    """Vectorized buyer best response over a batch of schedules."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.horizon = instance.t
        self.n = instance.n
        self.c = instance.storage_cost.raw
        fracs = [instance.decay.fraction(age) for age in range(1, self.horizon + 1)]
        self.denom = lcm(*(f.denominator for f in fracs)) if fracs else 1
        self.scaled_fracs = [int(f * self.denom) for f in fracs]
        self.span = instance.decay.span(self.horizon)
        self.cliff_like = all(f in (0, 1) for f in fracs)
        self.cols_asc, self.prefix_desc, self.cols_desc = [None], [None], [None]
        for t in range(1, self.horizon + 1):
            col = np.array([v.raw for v in instance.valuations.column(t)], dtype=np.int64)
            self.cols_desc.append(col)
            self.cols_asc.append(np.sort(col))
            self.prefix_desc.append(np.concatenate(([0], np.cumsum(col))))

    def check_envelope(self, max_price: int) -> None:
        vmax = int(self.instance.valuations.max_value().raw)
        worst = self.denom * self.n * self.horizon * (
            vmax + max_price + self.c * self.horizon + 1
        )
        if worst >= INT64_SAFE:
            raise SolverError("monetary range exceeds the oracle's 64-bit envelope")

    def _window(self, t: int) -> range:
        return range(max(1, t - self.span + 1), t + 1)

    def revenues_and_utilities(self, price_cols: list[np.ndarray]):
        """Exact (revenue, utility * denom) for each schedule in the batch."""
        size = len(price_cols[0])
        rev = np.zeros(size, dtype=np.int64)
        util = np.zeros(size, dtype=np.int64)
        for t in range(1, self.horizon + 1):
            if self.cliff_like:
                best_cost = best_price = None
                for s in self._window(t):
                    if self.scaled_fracs[t - s] == 0:
                        continue
                    cost = price_cols[s - 1] + self.c * (t - s)
                    if best_cost is None:
                        best_cost, best_price = cost, price_cols[s - 1]
                    else:
                        m = cost <= best_cost
                        best_cost = np.where(m, cost, best_cost)
                        best_price = np.where(m, price_cols[s - 1], best_price)
                if best_cost is None:
                    continue
                q = self.n - np.searchsorted(self.cols_asc[t], best_cost, side="left")
                rev += q * best_price
                util += np.take(self.prefix_desc[t], q) - q * best_cost
            else:
                for v in self.cols_desc[t]:
                    v = int(v)
                    best_u = best_p = None
                    for s in self._window(t):
                        frac = self.scaled_fracs[t - s]
                        if frac == 0:
                            continue
                        u = v * frac - self.denom * (price_cols[s - 1] + self.c * (t - s))
                        if best_u is None:
                            best_u, best_p = u, price_cols[s - 1]
                        else:
                            m = u >= best_u
                            best_u = np.where(m, u, best_u)
                            best_p = np.where(m, price_cols[s - 1], best_p)
                    if best_u is None:
                        continue
                    buy = best_u >= 0
                    rev += np.where(buy, best_p, 0)
                    util += np.where(buy, best_u, 0)
        if self.cliff_like and self.denom != 1:
            util = util * self.denom
        return rev, util


def _canonical_rows(grid: CandidateSet) -> list[np.ndarray]:
    """Deduplicated ascending raw rows; dominated duplicates cannot matter."""
    return [np.array(sorted({p.raw for p in row}), dtype=np.int64) for row in grid.rows]


def _chunks(product: int, chunk_size: int):
    lo = 0
    while lo < product:
        yield lo, min(lo + chunk_size, product)
        lo += chunk_size


def _price_columns(rows, strides, lo: int, hi: int) -> list[np.ndarray]:
    idx = np.arange(lo, hi, dtype=np.int64)
    return [row[(idx // stride) % len(row)] for row, stride in zip(rows, strides)]


def _strides(rows) -> list[int]:
    strides = [1] * len(rows)
    for t in range(len(rows) - 2, -1, -1):
        strides[t] = strides[t + 1] * len(rows[t + 1])
    return strides


def oracle_optimal(instance: Instance, grid: CandidateSet | None = None, *,
                   budget: int = 10_000_000, threads: int = 1,
                   chunk_size: int = 1 << 16) -> OracleResult:
    """Best schedule in the grid product; ties to the lexicographic smallest.

    Works for any decay profile. Raises BudgetExceededError (carrying the
    exact product size) when the grid is too large.
    """
    start = time.monotonic()
    if grid is None:
        grid = oracle_grid(instance)
    if len(grid.rows) != instance.t:
        raise SolverError(f"grid covers {len(grid.rows)} days, instance has {instance.t}")
    rows = _canonical_rows(grid)
    product = 1
    for row in rows:
        product *= len(row)
    if product > budget:
        raise BudgetExceededError(product, budget)

    ev = _BatchEvaluator(instance)
    ev.check_envelope(max(int(r[-1]) for r in rows))
    strides = _strides(rows)

    def eval_chunk(bounds):
        lo, hi = bounds
        cols = _price_columns(rows, strides, lo, hi)
        rev, _ = ev.revenues_and_utilities(cols)
        local = int(np.argmax(rev))
        return int(rev[local]), lo + local

    ranges = list(_chunks(product, chunk_size))
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_chunk, ranges))
    else:
        results = [eval_chunk(r) for r in ranges]

    best_rev, best_idx = -1, -1
    for rev, idx in results:  # chunk order = counter order
        if rev > best_rev:
            best_rev, best_idx = rev, idx

    prices = tuple(
        Money(int(row[(best_idx // stride) % len(row)]))
        for row, stride in zip(rows, strides)
    )
    schedule = PriceSchedule(prices)
    plan = best_response(instance, schedule)
    outcome = evaluate_outcome(instance, schedule, plan)
    if outcome.revenue.raw != best_rev:
        raise SolverError(
            f"self-check failed: batch says {best_rev}, buyer yields {outcome.revenue.raw}"
        )
    return OracleResult(schedule, outcome, product, int((time.monotonic() - start) * 1000))


def _pareto_filter(pairs):
    """Undominated (revenue, utility) pairs, both maximized."""
    best_util = None
    out = []
    for rev, util in sorted(set(pairs), key=lambda p: (-p[0], -p[1])):
        if best_util is None or util > best_util:
            out.append((rev, util))
            best_util = util
    return out


def oracle_pareto(instance: Instance, grid: CandidateSet | None = None, *,
                  budget: int = 10_000_000, threads: int = 1,
                  chunk_size: int = 1 << 16) -> tuple[tuple[Money, Fraction], ...]:
    """All Pareto-undominated (revenue, buyer utility) outcomes over the grid."""
    if grid is None:
        grid = oracle_grid(instance)
    if len(grid.rows) != instance.t:
        raise SolverError(f"grid covers {len(grid.rows)} days, instance has {instance.t}")
    rows = _canonical_rows(grid)
    product = 1
    for row in rows:
        product *= len(row)
    if product > budget:
        raise BudgetExceededError(product, budget)

    ev = _BatchEvaluator(instance)
    ev.check_envelope(max(int(r[-1]) for r in rows))
    strides = _strides(rows)

    def eval_chunk(bounds):
        lo, hi = bounds
        cols = _price_columns(rows, strides, lo, hi)
        rev, util = ev.revenues_and_utilities(cols)
        return _pareto_filter(zip(rev.tolist(), util.tolist()))

    ranges = list(_chunks(product, chunk_size))
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_chunk, ranges))
    else:
        results = [eval_chunk(r) for r in ranges]

    merged = _pareto_filter(p for part in results for p in part)
    return tuple(
        (Money(rev), Fraction(util, ev.denom * money.SCALE))
        for rev, util in sorted(merged)
    )
