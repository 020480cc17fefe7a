"""Optimal pre-announced prices for cliff decay via a windowed dynamic program.

State for day t is the price window of the previous d-1 days. The day-t
choice set is the future-sourced candidate row plus storage mark-ups of the
window prices themselves (a price can stay "just high enough" to move a
storage purchase to a later, dearer day). Revenue earned by consumption on
days 1..d-1 is folded into the initial window selection with truncated
purchase windows; the printed recursion alone would miss it.

Window prices above max value + d*c can never sell anything and are collapsed
onto the sentinel, which keeps the state space at paper scale tractable; the
collapse is revenue-preserving because such a price never produces a sale
whether or not it wins the window minimum.
"""

from __future__ import annotations

import logging
import time
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import prod

import numpy as np

from .buyer import best_response
from .candidates import candidate_prices_all, candidate_prices_future
from .model import Cliff, Instance, Outcome, PriceSchedule, evaluate_outcome
from .money import Money

log = logging.getLogger(__name__)

#: headroom guard for the int64 arithmetic inside the solvers
INT64_SAFE = 2**62


class SolverError(RuntimeError):
    """Internal inconsistency or unusable instance for this solver."""


class TimeLimitExceeded(RuntimeError):
    """Cooperative per-solve time budget ran out."""


@dataclass(frozen=True, slots=True)
class SolveStats:
    states_total: int
    states_per_day: tuple[int, ...]
    candidate_sizes: tuple[int, ...]
    wall_ms: int


@dataclass(frozen=True, slots=True)
class SolveResult:
    schedule: PriceSchedule
    outcome: Outcome
    stats: SolveStats


def window_cost(window: list[Money], storage_cost: Money) -> tuple[Money, int]:
    """Cheapest total cost of a unit consumed on the window's last day.

    ``window[k]`` is the price k days before consumption counted from the
    front, i.e. the final entry is the consumption day itself. Returns the
    cost including storage and the 1-based window index of the purchase day;
    ties break to the largest index (least storage).
    """
    c = storage_cost.raw
    n = len(window)
    best_cost = best_i = None
    for i, p in enumerate(window, 1):
        cost = p.raw + (n - i) * c
        if best_cost is None or cost <= best_cost:
            best_cost, best_i = cost, i
    return Money(best_cost), best_i


def window_demand(instance: Instance, t: int, cost: Money) -> int:
    """Units demanded on day t at the given effective cost (v >= cost buys)."""
    return sum(1 for v in instance.valuations.column(t) if v >= cost)


def _check_envelope(instance: Instance) -> None:
    worst = instance.n * instance.t * (instance.sentinel_price().raw + 1)
    if worst >= INT64_SAFE:
        raise SolverError(
            "monetary range exceeds the solver's 64-bit envelope; "
            "reduce values or precision"
        )


class _Tables:
    """Raw integer arrays shared by the backward passes."""

    def __init__(self, instance: Instance, d: int, prune: bool):
        self.instance = instance
        self.d = d
        self.n = instance.n
        self.horizon = instance.t
        self.c = instance.storage_cost.raw
        self.sentinel = instance.sentinel_price().raw
        vmax = instance.valuations.max_value().raw
        self.threshold = min(vmax + d * self.c, self.sentinel) if prune else None
        self.rows = [None]  # 1-based day indexing
        self.future = [None]
        for t in range(1, self.horizon + 1):
            self.rows.append(self._clamped(candidate_prices_all(instance, t)))
            self.future.append(self._clamped(candidate_prices_future(instance, t)))
        self.cols_asc = [None] + [
            np.sort(np.array([v.raw for v in instance.valuations.column(t)], dtype=np.int64))
            for t in range(1, self.horizon + 1)
        ]

    def _clamped(self, prices) -> np.ndarray:
        raw = {p.raw for p in prices}
        if self.threshold is not None:
            raw = {x for x in raw if x <= self.threshold}
            raw.add(self.sentinel)
        return np.array(sorted(raw), dtype=np.int64)

    def clamp_scalar(self, x: int) -> int:
        x = min(x, self.sentinel)
        if self.threshold is not None and x > self.threshold:
            return self.sentinel
        return x

    def state_days(self, t: int) -> list[int]:
        return list(range(t - self.d + 1, t))

    def dims(self, days: list[int]) -> list[int]:
        return [len(self.rows[u]) for u in days]


def _state_components(tables: _Tables, days: list[int]):
    """Flat ordinal and value arrays for the cartesian state space over days."""
    dims = tables.dims(days)
    n_states = prod(dims) if dims else 1
    idx = np.arange(n_states, dtype=np.int64)
    ords, vals = [], []
    stride = n_states
    for j, u in enumerate(days):
        stride //= dims[j]
        o = (idx // stride) % dims[j]
        ords.append(o)
        vals.append(tables.rows[u][o])
    return n_states, ords, vals


def _window_min(vals, offsets):
    """Vectorized least-cost entry with ties to the latest day.

    ``offsets[j]`` is the storage cost carried by window entry j. Returns
    (cost, price-at-purchase-day) arrays.
    """
    cost = vals[0] + offsets[0]
    price = vals[0]
    for j in range(1, len(vals)):
        cj = vals[j] + offsets[j]
        m = cj <= cost
        cost = np.where(m, cj, cost)
        price = np.where(m, vals[j], price)
    return cost, price


def _demand(tables: _Tables, t: int, cost):
    col = tables.cols_asc[t]
    return tables.n - np.searchsorted(col, cost, side="left")


def _day_pass(tables: _Tables, t: int, r_next, *, include_propagated: bool,
              threads: int, chunk_states: int):
    """One backward step: best revenue-to-go and chosen price per state."""
    d = tables.d
    k = d - 1
    days = tables.state_days(t)
    n_states, ords, vals = _state_components(tables, days)

    if k:
        offsets = [(d - 1 - j) * tables.c for j in range(k)]
        pre_cost, pre_price = _window_min(vals, offsets)
        base = np.zeros(n_states, dtype=np.int64)
        for j in range(1, k):
            base = base * len(tables.rows[days[j]]) + ords[j]
        base *= len(tables.rows[t])
    else:
        pre_cost = pre_price = None
        base = np.zeros(1, dtype=np.int64)

    future = tables.future[t]
    future_ords = np.searchsorted(tables.rows[t], future)
    if not np.array_equal(tables.rows[t][future_ords], future):
        raise SolverError("future candidates escaped the day's price row")

    row_t = tables.rows[t]

    def eval_range(lo: int, hi: int):
        pc = pre_cost[lo:hi] if k else None
        pp = pre_price[lo:hi] if k else None
        b = base[lo:hi] if k else base
        best = np.full(hi - lo, -1, dtype=np.int64)
        best_x = np.full(hi - lo, -1, dtype=np.int64)
        best_o = np.zeros(hi - lo, dtype=np.int64)
        for o, x in zip(future_ords, future):
            x = int(x)
            if k:
                cost = np.minimum(pc, x)
                price = np.where(x <= pc, x, pp)
            else:
                cost = np.full(hi - lo, x, dtype=np.int64)
                price = x
            gain = _demand(tables, t, cost) * price
            total = gain + (r_next[b + o] if k else r_next[0])
            m = total > best
            best = np.where(m, total, best)
            best_x = np.where(m, x, best_x)
            best_o = np.where(m, o, best_o)
        if include_propagated and k:
            for j in range(k):
                xv = vals[j][lo:hi] + (d - 1 - j) * tables.c
                xv = np.minimum(xv, tables.sentinel)
                if tables.threshold is not None:
                    xv = np.where(xv > tables.threshold, tables.sentinel, xv)
                ov = np.searchsorted(row_t, xv)
                if not np.array_equal(row_t[ov], xv):
                    raise SolverError("propagated price escaped the day's price row")
                cost = np.minimum(pc, xv)
                price = np.where(xv <= pc, xv, pp)
                gain = _demand(tables, t, cost) * price
                total = gain + r_next[b + ov]
                m = (total > best) | ((total == best) & (xv < best_x))
                best = np.where(m, total, best)
                best_x = np.where(m, xv, best_x)
                best_o = np.where(m, ov, best_o)
        return best, best_o

    if threads > 1 and n_states >= max(2, chunk_states):
        step = -(-n_states // threads)
        ranges = [(lo, min(lo + step, n_states)) for lo in range(0, n_states, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: eval_range(*r), ranges))
        best = np.concatenate([p[0] for p in parts])
        best_o = np.concatenate([p[1] for p in parts])
    else:
        best, best_o = eval_range(0, n_states)
    return best, best_o


def _backward(tables: _Tables, stop_t: int, *, record_policy: bool,
              include_propagated: bool, threads: int, chunk_states: int,
              deadline: float | None):
    """Run the backward pass from day T down to stop_t.

    Returns the revenue-to-go layer for day stop_t and, when requested, the
    per-day chosen-price ordinals.
    """
    d = tables.d
    horizon = tables.horizon
    if d - 1:
        tail_dims = tables.dims(list(range(horizon - d + 2, horizon + 1)))
        r_next = np.zeros(prod(tail_dims), dtype=np.int64)
    else:
        r_next = np.zeros(1, dtype=np.int64)
    policy = {} if record_policy else None
    for t in range(horizon, stop_t - 1, -1):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeLimitExceeded(f"time limit hit during day {t}")
        best, best_o = _day_pass(
            tables, t, r_next,
            include_propagated=include_propagated,
            threads=threads, chunk_states=chunk_states,
        )
        if policy is not None:
            policy[t] = best_o.astype(np.int32)
        r_next = best
        log.debug("day %d: %d states", t, len(best))
    return r_next, policy


def _initial_objective(tables: _Tables, r_first):
    """Revenue from consumption days 1..d-1 (truncated windows) plus R(d, .)."""
    d = tables.d
    k = d - 1
    days = list(range(1, d))
    n_states, ords, vals = _state_components(tables, days)
    rev = np.zeros(n_states, dtype=np.int64)
    for u in range(1, d):
        offsets = [(u - 1 - j) * tables.c for j in range(u)]
        cost, price = _window_min(vals[:u], offsets)
        rev += _demand(tables, u, cost) * price
    return rev + r_first, ords


def _choices_for_state(tables: _Tables, t: int, window_raw: list[int],
                       window_ords: list[int], r_next,
                       include_propagated: bool):
    """Scalar mirror of _day_pass for a single state (reconstruction path)."""
    d = tables.d
    k = d - 1
    c = tables.c
    if k:
        pre_cost = pre_price = None
        for j, x in enumerate(window_raw):
            cj = x + (d - 1 - j) * c
            if pre_cost is None or cj <= pre_cost:
                pre_cost, pre_price = cj, x
        base = 0
        days = tables.state_days(t)
        for j in range(1, k):
            base = base * len(tables.rows[days[j]]) + window_ords[j]
        base *= len(tables.rows[t])
    col = tables.cols_asc[t]

    def total_for(x: int, o: int) -> int:
        if k:
            cost = min(pre_cost, x)
            price = x if x <= pre_cost else pre_price
        else:
            cost, price = x, x
        q = tables.n - bisect_left(col.tolist(), cost)
        cont = int(r_next[base + o]) if k else int(r_next[0])
        return q * price + cont

    best = best_x = None
    best_o = 0
    row_list = tables.rows[t].tolist()
    for x in tables.future[t].tolist():
        o = bisect_left(row_list, x)
        tot = total_for(x, o)
        if best is None or tot > best:
            best, best_x, best_o = tot, x, o
    if include_propagated and k:
        for j in range(k):
            xv = tables.clamp_scalar(window_raw[j] + (d - 1 - j) * c)
            o = bisect_left(row_list, xv)
            if row_list[o] != xv:
                raise SolverError("propagated price escaped the day's price row")
            tot = total_for(xv, o)
            if tot > best or (tot == best and xv < best_x):
                best, best_x, best_o = tot, xv, o
    return best, best_o


def solve_cliff(instance: Instance, *, threads: int = 1, prune: bool = True,
                include_propagated: bool = True, policy: str = "store",
                time_limit_s: float | None = None,
                chunk_states: int = 65536) -> SolveResult:
    """Optimal schedule for a cliff-decay instance, O((NT)^d dT).

    Two reconstruction modes produce identical schedules: ``policy="store"``
    keeps every day's argmax table, ``policy="recompute"`` retains only two
    revenue layers and re-derives choices during the forward walk. Per-day
    argmax ties break to the smallest price; the initial window tie-breaks
    to the lexicographically smallest tuple. Results are independent of
    ``threads``.
    """
    if not isinstance(instance.decay, Cliff):
        raise SolverError("solver requires a cliff decay profile")
    if policy not in ("store", "recompute"):
        raise SolverError(f"unknown policy {policy!r}")
    _check_envelope(instance)
    start = time.monotonic()
    deadline = start + time_limit_s if time_limit_s is not None else None
    threads = max(1, threads)
    d = instance.decay.d
    horizon = instance.t
    tables = _Tables(instance, d, prune)

    record = policy == "store"
    r_first, policy_tables = _backward(
        tables, d, record_policy=record,
        include_propagated=include_propagated,
        threads=threads, chunk_states=chunk_states, deadline=deadline,
    )

    if d > 1:
        objective, _ = _initial_objective(tables, r_first)
        flat = int(np.argmax(objective))  # first max = lexicographically smallest
        claimed = int(objective[flat])
        dims = tables.dims(list(range(1, d)))
        window_ords = []
        for size in reversed(dims):
            window_ords.append(flat % size)
            flat //= size
        window_ords.reverse()
    else:
        claimed = int(r_first[0])
        window_ords = []

    window_raw = [int(tables.rows[u][o]) for u, o in zip(range(1, d), window_ords)]
    prices_raw = list(window_raw)
    for t in range(d, horizon + 1):
        if record:
            idx = 0
            days = tables.state_days(t)
            for u, o in zip(days, window_ords):
                idx = idx * len(tables.rows[u]) + o
            o_t = int(policy_tables[t][idx])
        else:
            if t < horizon:
                r_next, _ = _backward(
                    tables, t + 1, record_policy=False,
                    include_propagated=include_propagated,
                    threads=threads, chunk_states=chunk_states, deadline=deadline,
                )
            else:
                tail = tables.dims(tables.state_days(horizon + 1)) if d > 1 else []
                r_next = np.zeros(prod(tail) if tail else 1, dtype=np.int64)
            _, o_t = _choices_for_state(
                tables, t, window_raw, window_ords, r_next, include_propagated)
        x_t = int(tables.rows[t][o_t])
        prices_raw.append(x_t)
        window_ords = window_ords[1:] + [o_t]
        window_raw = window_raw[1:] + [x_t]

    schedule = PriceSchedule(tuple(Money(x) for x in prices_raw))
    plan = best_response(instance, schedule)
    outcome = evaluate_outcome(instance, schedule, plan)
    if outcome.revenue.raw != claimed:
        raise SolverError(
            f"self-check failed: tables claim {claimed}, buyer yields {outcome.revenue.raw}"
        )

    per_day = tuple(
        prod(tables.dims(tables.state_days(t))) if t >= d else 0
        for t in range(1, horizon + 1)
    )
    stats = SolveStats(
        states_total=sum(per_day),
        states_per_day=per_day,
        candidate_sizes=tuple(len(tables.rows[t]) for t in range(1, horizon + 1)),
        wall_ms=int((time.monotonic() - start) * 1000),
    )
    return SolveResult(schedule, outcome, stats)
