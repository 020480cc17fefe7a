"""Core domain types: valuations, decay profiles, game instances, schedules, plans.

Everything is immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

from . import money
from .money import Money, MoneyError, fraction_to_decimal

ONE = Fraction(1)
NIL = Fraction(0)


class InstanceError(ValueError):
    """Malformed or inconsistent game description."""


class PlanError(ValueError):
    """Structurally invalid purchase plan."""


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(Decimal(str(text)))
    except InvalidOperation:
        raise InstanceError(f"not a decimal fraction: {text!r}") from None


@dataclass(frozen=True, slots=True)
class Cliff:
    """Full value while stored strictly less than ``d`` days, worthless after.

    Age ``l`` counts the purchase day, so ``l = 1`` means bought and consumed
    the same day and the value survives for ages ``l <= d``.
    """

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise InstanceError(f"shelf-life must be at least 1 day, got {self.d}")

    def fraction(self, age: int) -> Fraction:
        return ONE if age <= self.d else NIL

    def span(self, horizon: int) -> int:
        return min(self.d, horizon)

    def clamped(self, horizon: int) -> "Cliff":
        return self if self.d <= horizon else Cliff(horizon)

    def to_json(self) -> dict:
        return {"kind": "cliff", "d": self.d}


@dataclass(frozen=True, slots=True)
class Fractional:
    """Full value for ages up to ``d``, a fixed fraction ``rho`` afterwards."""

    d: int
    rho: Fraction

    def __post_init__(self):
        if self.d < 1:
            raise InstanceError(f"shelf-life must be at least 1 day, got {self.d}")
        if not (0 <= self.rho < 1):
            raise InstanceError(f"residual fraction must lie in [0, 1), got {self.rho}")

    def fraction(self, age: int) -> Fraction:
        return ONE if age <= self.d else self.rho

    def span(self, horizon: int) -> int:
        return horizon if self.rho > 0 else min(self.d, horizon)

    def clamped(self, horizon: int) -> "Fractional":
        return self if self.d <= horizon else Fractional(horizon, self.rho)

    def to_json(self) -> dict:
        return {"kind": "fractional", "d": self.d, "r": fraction_to_decimal(self.rho)}


@dataclass(frozen=True, slots=True)
class Step:
    """Arbitrary non-increasing value profile, one fraction per age 1..T."""

    fractions: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.fractions:
            raise InstanceError("step profile needs at least one level")
        if self.fractions[0] != 1:
            raise InstanceError("fresh goods must keep full value (r(1) = 1)")
        prev = ONE
        for f in self.fractions:
            if not (0 <= f <= 1):
                raise InstanceError(f"decay fraction {f} outside [0, 1]")
            if f > prev:
                raise InstanceError("decay fractions must be non-increasing")
            prev = f

    def fraction(self, age: int) -> Fraction:
        if age <= len(self.fractions):
            return self.fractions[age - 1]
        return NIL

    def span(self, horizon: int) -> int:
        best = 0
        for age in range(1, min(len(self.fractions), horizon) + 1):
            if self.fractions[age - 1] > 0:
                best = age
        return best

    def clamped(self, horizon: int) -> "Step":
        return self

    def to_json(self) -> dict:
        return {"kind": "step", "r": [fraction_to_decimal(f) for f in self.fractions]}


Decay = Union[Cliff, Fractional, Step]


def decay_from_json(data: dict, horizon: int) -> Decay:
    if not isinstance(data, dict) or "kind" not in data:
        raise InstanceError("decay must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "cliff":
        return Cliff(int(data["d"]))
    if kind == "fractional":
        return Fractional(int(data["d"]), _parse_fraction(data["r"]))
    if kind == "step":
        levels = tuple(_parse_fraction(x) for x in data["r"])
        if len(levels) != horizon:
            raise InstanceError(
                f"step profile needs one fraction per day (expected {horizon}, got {len(levels)})"
            )
        return Step(levels)
    raise InstanceError(f"unknown decay kind: {kind!r}")


@dataclass(frozen=True, slots=True)
class ValuationMatrix:
    """Per-day unit values, each day sorted non-increasing.

    ``days[t-1][i-1]`` is the value of the i-th unit consumed fresh on day t:
    the i-th highest buyer value that day (multi-buyer) or the i-th marginal
    value (single-buyer). Appending a zero-value virtual unit is always valid,
    which is how the demand cap is modelled.
    """

    days: tuple[tuple[Money, ...], ...]

    def __post_init__(self):
        if not self.days:
            raise InstanceError("horizon must be at least one day")
        n = len(self.days[0])
        if n == 0:
            raise InstanceError("unit count must be at least one")
        for t, col in enumerate(self.days, 1):
            if len(col) != n:
                raise InstanceError(f"day {t} has {len(col)} values, expected {n}")
            prev = None
            for v in col:
                if v.raw < 0:
                    raise InstanceError(f"negative valuation {v} on day {t}")
                if prev is not None and v > prev:
                    raise InstanceError(f"day {t} values are not non-increasing")
                prev = v

    @property
    def n(self) -> int:
        return len(self.days[0])

    @property
    def t(self) -> int:
        return len(self.days)

    def value(self, i: int, t: int) -> Money:
        """Value of the i-th unit (1-based) on day t (1-based)."""
        return self.days[t - 1][i - 1]

    def column(self, t: int) -> tuple[Money, ...]:
        return self.days[t - 1]

    def max_value(self) -> Money:
        return max(col[0] for col in self.days)

    @classmethod
    def from_units(cls, rows: list[list[int]]) -> "ValuationMatrix":
        return cls(tuple(tuple(Money.from_units(v) for v in row) for row in rows))


@dataclass(frozen=True, slots=True)
class Instance:
    """A full game description: valuations, decay, storage cost, buyer mode.

    Shelf-lives longer than the horizon are clamped to the horizon at
    construction; storage beyond the last day is unobservable.
    """

    valuations: ValuationMatrix
    decay: Decay
    storage_cost: Money
    mode: str = "single"

    def __post_init__(self):
        if self.storage_cost.raw < 0:
            raise InstanceError(f"storage cost must be non-negative, got {self.storage_cost}")
        if self.mode not in ("single", "multi"):
            raise InstanceError(f"mode must be 'single' or 'multi', got {self.mode!r}")
        if isinstance(self.decay, Step) and len(self.decay.fractions) != self.t:
            raise InstanceError("step profile needs one fraction per day of the horizon")
        object.__setattr__(self, "decay", self.decay.clamped(self.t))

    @property
    def n(self) -> int:
        return self.valuations.n

    @property
    def t(self) -> int:
        return self.valuations.t

    def sentinel_price(self) -> Money:
        """A finite price provably above any buyer willingness-to-pay."""
        return Money((self.n * self.t + 1) * self.valuations.max_value().raw + 1)

    def effective_value(self, i: int, t: int, age: int) -> Fraction:
        """Value of unit (i, t) when consumed ``age - 1`` days after purchase."""
        return self.valuations.value(i, t).as_fraction() * self.decay.fraction(age)

    def with_decay(self, decay: Decay) -> "Instance":
        return replace(self, decay=decay)

    def with_storage_cost(self, storage_cost: Money) -> "Instance":
        return replace(self, storage_cost=storage_cost)


@dataclass(frozen=True, slots=True)
class PriceSchedule:
    """The seller's pre-announced prices, one per day, all non-negative."""

    prices: tuple[Money, ...]

    def __post_init__(self):
        if not self.prices:
            raise InstanceError("schedule must cover at least one day")
        for t, p in enumerate(self.prices, 1):
            if p.raw < 0:
                raise InstanceError(f"negative price {p} on day {t}")

    def __len__(self) -> int:
        return len(self.prices)

    def day(self, t: int) -> Money:
        return self.prices[t - 1]

    def raw(self) -> tuple[int, ...]:
        return tuple(p.raw for p in self.prices)

    @classmethod
    def from_units(cls, units: list[int]) -> "PriceSchedule":
        return cls(tuple(Money.from_units(u) for u in units))


@dataclass(frozen=True, slots=True)
class PurchasePlan:
    """Purchase day for each filled consumption slot.

    Slot (i, t) is the i-th unit consumed on day t; ``assignments`` holds
    (i, t, s) triples meaning that unit is bought on day s. Slots not listed
    are not purchased. Within a consumption day the most recently bought
    units are consumed as the highest-value slots, so assignments produced
    by the best response have purchase days non-increasing in i.
    """

    assignments: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, t, s in self.assignments:
            if (i, t) in seen:
                raise PlanError(f"duplicate assignment for slot ({i}, {t})")
            seen.add((i, t))
        if tuple(sorted(self.assignments)) != self.assignments:
            raise PlanError("assignments must be sorted by (unit, day)")

    @classmethod
    def from_mapping(cls, mapping: dict[tuple[int, int], int]) -> "PurchasePlan":
        return cls(tuple(sorted((i, t, s) for (i, t), s in mapping.items())))

    @classmethod
    def empty(cls) -> "PurchasePlan":
        return cls(())

    def purchase_day(self, i: int, t: int) -> int | None:
        for ii, tt, s in self.assignments:
            if ii == i and tt == t:
                return s
        return None

    def quantities(self, horizon: int) -> tuple[int, ...]:
        """Units bought per day."""
        q = [0] * horizon
        for _, _, s in self.assignments:
            q[s - 1] += 1
        return tuple(q)


@dataclass(frozen=True, slots=True)
class Outcome:
    """Seller revenue, total buyer utility and per-day purchased quantities.

    Revenue is always exact Money. Utility is kept as an exact rational:
    decay fractions can push per-slot values off the money grid.
    """

    revenue: Money
    buyer_utility: Fraction
    quantities: tuple[int, ...]


def validate_plan(instance: Instance, plan: PurchasePlan) -> None:
    n, horizon = instance.n, instance.t
    for i, t, s in plan.assignments:
        if not (1 <= t <= horizon):
            raise PlanError(f"assignment references day {t} outside [1, {horizon}]")
        if not (1 <= i <= n):
            raise PlanError(f"assignment references unit {i} outside [1, {n}]")
        if not (1 <= s <= t):
            raise PlanError(f"slot ({i}, {t}) bought on invalid day {s}")
        if instance.decay.fraction(t - s + 1) == 0:
            raise PlanError(
                f"slot ({i}, {t}) bought on day {s} would be worthless at consumption"
            )


def evaluate_outcome(instance: Instance, prices: PriceSchedule, plan: PurchasePlan) -> Outcome:
    """Revenue and utility of an arbitrary (structurally valid) plan."""
    if len(prices) != instance.t:
        raise PlanError(f"schedule covers {len(prices)} days, instance has {instance.t}")
    validate_plan(instance, plan)
    c = instance.storage_cost.raw
    revenue = 0
    utility_raw: Fraction | int = 0
    for i, t, s in plan.assignments:
        p = prices.day(s).raw
        revenue += p
        frac = instance.decay.fraction(t - s + 1)
        v = instance.valuations.value(i, t).raw
        worth = v if frac == 1 else Fraction(v) * frac
        utility_raw = utility_raw + worth - (p + c * (t - s))
    return Outcome(
        Money(revenue), Fraction(utility_raw) / money.SCALE, plan.quantities(instance.t)
    )


def load_instance(document) -> Instance:
    """Parse and validate an instance document (JSON text or dict).

    Valuations arrive as one row per day holding N decimal strings. In
    multi-buyer mode each day is re-sorted descending (the canonical form);
    single-buyer marginal values must already be non-increasing.
    """
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from None
    elif isinstance(document, dict):
        data = document
    else:
        raise InstanceError(f"unsupported document type: {type(document).__name__}")

    for key in ("N", "T", "storage_cost", "mode", "decay", "values"):
        if key not in data:
            raise InstanceError(f"missing field {key!r}")
    n, horizon = int(data["N"]), int(data["T"])
    if n < 1 or horizon < 1:
        raise InstanceError(f"N and T must be positive, got N={n} T={horizon}")
    mode = data["mode"]
    try:
        cost = Money.parse(str(data["storage_cost"]))
    except MoneyError as exc:
        raise InstanceError(str(exc)) from None
    decay = decay_from_json(data["decay"], horizon)

    rows = data["values"]
    if len(rows) != horizon:
        raise InstanceError(f"expected {horizon} day rows, got {len(rows)}")
    days = []
    for t, row in enumerate(rows, 1):
        if len(row) != n:
            raise InstanceError(f"day {t} has {len(row)} values, expected {n}")
        try:
            col = [Money.parse(str(x)) for x in row]
        except MoneyError as exc:
            raise InstanceError(f"day {t}: {exc}") from None
        if mode == "multi":
            col.sort(reverse=True)
        days.append(tuple(col))
    return Instance(ValuationMatrix(tuple(days)), decay, cost, mode)


def save_instance(instance: Instance) -> dict:
    """Inverse of load_instance; round-trips bit-exactly."""
    return {
        "N": instance.n,
        "T": instance.t,
        "storage_cost": str(instance.storage_cost),
        "mode": instance.mode,
        "decay": instance.decay.to_json(),
        "values": [[str(v) for v in col] for col in instance.valuations.days],
    }


def instance_to_json(instance: Instance) -> str:
    return json.dumps(save_instance(instance), sort_keys=True)
