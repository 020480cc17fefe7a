"""Finite candidate price grids that provably contain an optimal schedule.

For cliff decay an optimal schedule exists whose day-t price has the form
v(j, s) + (t - s) * c for some unit value and some day s anywhere in the
horizon (s may lie in the past or the future of t). Days on which nothing
sells are priced at a sentinel above any willingness-to-pay. For other decay
profiles no such characterization is available, so the oracle uses a larger
grid built from fraction-scaled values plus storage offsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .model import Cliff, Instance
from .money import Money


@dataclass(frozen=True, slots=True)
class CandidateSet:
    """Per-day price lists, each sorted ascending and containing the sentinel."""

    rows: tuple[tuple[Money, ...], ...]
    sentinel: Money

    def row(self, t: int) -> tuple[Money, ...]:
        return self.rows[t - 1]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    def product_size(self) -> int:
        return prod(self.sizes())


def _raw_row(instance: Instance, t: int, days) -> list[int]:
    c = instance.storage_cost.raw
    out = {instance.sentinel_price().raw}
    for s in days:
        offset = (t - s) * c
        for v in instance.valuations.column(s):
            cand = v.raw + offset
            if cand >= 0:
                out.add(cand)
    return sorted(out)


def candidate_prices_future(instance: Instance, t: int) -> tuple[Money, ...]:
    """Candidates built from day t onwards (the per-day choice set of the DP)."""
    if not (1 <= t <= instance.t):
        raise ValueError(f"day {t} outside [1, {instance.t}]")
    return tuple(Money(x) for x in _raw_row(instance, t, range(t, instance.t + 1)))


def candidate_prices_all(instance: Instance, t: int) -> tuple[Money, ...]:
    """Candidates built from every day; past days contribute storage mark-ups."""
    if not (1 <= t <= instance.t):
        raise ValueError(f"day {t} outside [1, {instance.t}]")
    return tuple(Money(x) for x in _raw_row(instance, t, range(1, instance.t + 1)))


def candidate_set_future(instance: Instance) -> CandidateSet:
    return CandidateSet(
        tuple(candidate_prices_future(instance, t) for t in range(1, instance.t + 1)),
        instance.sentinel_price(),
    )


def candidate_set_all(instance: Instance) -> CandidateSet:
    return CandidateSet(
        tuple(candidate_prices_all(instance, t) for t in range(1, instance.t + 1)),
        instance.sentinel_price(),
    )


def decay_price_grid(instance: Instance) -> CandidateSet:
    """Enlarged day-independent grid for non-cliff decay profiles.

    Prices are fraction-scaled unit values plus whole multiples of the
    storage cost. Scaled values that fall off the money grid are floored,
    which can only lower the grid optimum, so lower-bound certificates built
    on it remain sound.
    """
    c = instance.storage_cost.raw
    horizon = instance.t
    levels = {instance.decay.fraction(age) for age in range(1, horizon + 1)}
    levels.add(1)
    raw = {instance.sentinel_price().raw}
    for col in instance.valuations.days:
        for v in col:
            for level in levels:
                scaled = v.raw * level.numerator // level.denominator
                for m in range(horizon + 1):
                    raw.add(scaled + m * c)
    row = tuple(Money(x) for x in sorted(raw))
    return CandidateSet(tuple(row for _ in range(horizon)), instance.sentinel_price())


def oracle_grid(instance: Instance) -> CandidateSet:
    """Default search grid for the brute-force oracle."""
    if isinstance(instance.decay, Cliff):
        return candidate_set_all(instance)
    return decay_price_grid(instance)
