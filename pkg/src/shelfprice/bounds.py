"""Constructive revenue-bound schemes and certified instance generators.

The revenue floor: take the no-storage per-day optimal prices, open only
every d-th day (one schedule per offset) and block the rest with the
sentinel; buyers buy at least the single-day demand on open days, so the d
offset schedules together collect at least the no-storage optimum M and the
best of them collects at least M/d. The matching ceiling: geometric
instances on which every fixed price collects exactly b per block, pushing
revenue down to M/d times a factor that approaches one as the value ladder
steepens. All certificates compare cross-multiplied integers; no epsilon is
ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .buyer import best_response
from .candidates import oracle_grid
from .dp import INT64_SAFE, SolveResult, SolverError, solve_cliff
from .model import (
    Cliff,
    Fractional,
    Instance,
    PriceSchedule,
    ValuationMatrix,
    evaluate_outcome,
)
from . import money
from .money import Money
from .oracle import BudgetExceededError, oracle_optimal


class ConfigError(ValueError):
    """Generator configuration outside the supported range."""


def compute_M(instance: Instance) -> Money:
    """Optimal revenue when every good must be consumed on its purchase day.

    Each day contributes its best posted-price revenue max_j j * v[j][t].
    """
    total = 0
    for col in instance.valuations.days:
        total += max((j * v.raw for j, v in enumerate(col, 1)), default=0)
    return Money(total)


def day_one_optimal_prices(instance: Instance) -> tuple[Money, ...]:
    """Per-day revenue-maximizing posted prices for the no-storage game.

    Ties resolve to the smallest price (the largest served quantity); days
    with no positive-value demand are blocked with the sentinel.
    """
    sentinel = instance.sentinel_price()
    out = []
    for col in instance.valuations.days:
        best_rev, best_price = 0, None
        for j, v in enumerate(col, 1):
            r = j * v.raw
            if r > best_rev or (r == best_rev and best_price is not None and v.raw < best_price):
                best_rev, best_price = r, v.raw
        out.append(Money(best_price) if best_rev > 0 else sentinel)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class LowerBoundCertificate:
    schedules: tuple[PriceSchedule, ...]
    revenues: tuple[Money, ...]
    best_revenue: Money
    m: Money
    d: int
    passed: bool  # d * best_revenue >= M, compared exactly


def lower_bound_schedules(instance: Instance) -> LowerBoundCertificate:
    """The d offset schedules and the revenue floor they certify.

    Offset tau opens days tau, tau+d, tau+2d, ... at the per-day optimal
    price and blocks every other day with the sentinel. Each schedule is
    scored with the real best response, which may exceed the floor (buyers
    can also store from open days toward blocked ones).
    """
    if not isinstance(instance.decay, Cliff):
        raise SolverError("revenue floor requires a cliff decay profile")
    d = instance.decay.d
    sentinel = instance.sentinel_price()
    per_day = day_one_optimal_prices(instance)
    schedules, revenues = [], []
    for tau in range(1, d + 1):
        prices = tuple(
            per_day[t - 1] if (t - tau) % d == 0 and t >= tau else sentinel
            for t in range(1, instance.t + 1)
        )
        schedule = PriceSchedule(prices)
        outcome = evaluate_outcome(instance, schedule, best_response(instance, schedule))
        schedules.append(schedule)
        revenues.append(outcome.revenue)
    best = max(revenues)
    m = compute_M(instance)
    return LowerBoundCertificate(
        tuple(schedules), tuple(revenues), best, m, d,
        passed=d * best.raw >= m.raw,
    )


@dataclass(frozen=True, slots=True)
class AdversarialConfig:
    """Geometric value-ladder generator: a >= 2 ladder base, shelf-life d,
    k blocks of d days each."""

    a: int
    d: int
    k: int

    def __post_init__(self):
        if self.a < 2:
            raise ConfigError(f"ladder base must be at least 2, got {self.a}")
        if self.d < 1 or self.k < 1:
            raise ConfigError("shelf-life and block count must be at least 1")

    @property
    def b(self) -> int:
        return prod(self.a**m - 1 for m in range(1, self.d + 1))


def adversarial_instance(config: AdversarialConfig) -> Instance:
    """Instance whose optimum stays within a vanishing factor of M/d.

    Day t of block i (blocks 0-indexed, most valuable first) offers a^(d-t)
    units worth b*(a-1)/(a^(d-t+1)-1) scaled by b^(k-1-i); all values are
    integers by construction. Storage is free. Configs whose sentinel would
    overflow the solvers' 64-bit envelope are refused rather than rounded.
    """
    a, d, k, b = config.a, config.d, config.k, config.b
    n = a ** (d - 1)
    horizon = k * d
    max_val = b ** k  # value of the last day of block 0
    sentinel_bound = (n * horizon + 1) * max_val * money.SCALE + 1
    if n * horizon * (sentinel_bound + 1) >= INT64_SAFE:
        raise ConfigError(
            f"config a={a} d={d} k={k} exceeds the exact-arithmetic envelope"
        )
    days = []
    for block in range(k):
        mult = b ** (k - 1 - block)
        for t in range(1, d + 1):
            count = a ** (d - t)
            denom = a ** (d - t + 1) - 1
            num = b * (a - 1)
            if num % denom:
                raise SolverError("ladder values must be integral")
            value = num // denom * mult
            days.append([value] * count + [0] * (n - count))
    matrix = ValuationMatrix.from_units(days)
    return Instance(matrix, Cliff(d), Money(0), "single")


@dataclass(frozen=True, slots=True)
class UpperBoundCertificate:
    config: AdversarialConfig
    opt: Money
    m: Money
    lhs: int  # d * OPT * (a - 1), raw
    rhs: int  # M * a, raw
    passed: bool
    oracle_confirmed: bool
    block_optima: tuple[Money, ...]
    block_expected: tuple[Money, ...]
    blocks_passed: bool


def certify_upper_bound(config: AdversarialConfig, *, threads: int = 1,
                        oracle_budget: int = 10_000_000) -> UpperBoundCertificate:
    """Certify d * OPT * (a-1) < M * a on the generated instance.

    OPT comes from the price DP and is cross-checked against the oracle
    whenever the grid fits the budget. Each block solved in isolation must
    collect exactly b times its value multiplier.
    """
    instance = adversarial_instance(config)
    a, d, k, b = config.a, config.d, config.k, config.b
    result = solve_cliff(instance, threads=threads)
    opt = result.outcome.revenue
    oracle_attempted = oracle_confirmed = False
    try:
        check = oracle_optimal(instance, budget=oracle_budget, threads=threads)
        oracle_attempted = True
        oracle_confirmed = check.outcome.revenue == opt
    except BudgetExceededError:
        pass

    block_optima, block_expected = [], []
    for block in range(k):
        cols = instance.valuations.days[block * d:(block + 1) * d]
        sub = Instance(ValuationMatrix(cols), Cliff(d), Money(0), "single")
        block_optima.append(solve_cliff(sub, threads=threads).outcome.revenue)
        block_expected.append(Money.from_units(b * b ** (k - 1 - block)))
    blocks_passed = tuple(block_optima) == tuple(block_expected)

    m = compute_M(instance)
    lhs = d * opt.raw * (a - 1)
    rhs = m.raw * a
    return UpperBoundCertificate(
        config=config, opt=opt, m=m, lhs=lhs, rhs=rhs,
        passed=lhs < rhs and (oracle_confirmed or not oracle_attempted),
        oracle_confirmed=oracle_confirmed,
        block_optima=tuple(block_optima),
        block_expected=tuple(block_expected),
        blocks_passed=blocks_passed,
    )


@dataclass(frozen=True, slots=True)
class FractionalCertificate:
    opt: Money
    m: Money
    rho: Fraction
    d: int
    lhs: int  # d * OPT * den, raw
    rhs: int  # (den - num) * M, raw
    passed: bool
    ratio: Fraction  # observed OPT / M, reported for the ceiling direction


def certify_fractional_bounds(instance: Instance, *, threads: int = 1,
                              budget: int = 10_000_000) -> FractionalCertificate:
    """Certify d * OPT >= (1 - rho) * M exactly on a fractional instance.

    OPT is the oracle optimum over the enlarged decay grid. The matching
    ceiling has no constructive generator here; the observed OPT/M ratio is
    reported instead.
    """
    if not isinstance(instance.decay, Fractional):
        raise SolverError("fractional certificate requires a fractional decay profile")
    d = instance.decay.d
    rho = instance.decay.rho
    result = oracle_optimal(instance, oracle_grid(instance), budget=budget, threads=threads)
    opt = result.outcome.revenue
    m = compute_M(instance)
    lhs = d * opt.raw * rho.denominator
    rhs = (rho.denominator - rho.numerator) * m.raw
    ratio = Fraction(opt.raw, m.raw) if m.raw else Fraction(0)
    return FractionalCertificate(
        opt=opt, m=m, rho=rho, d=d, lhs=lhs, rhs=rhs,
        passed=lhs >= rhs, ratio=ratio,
    )
