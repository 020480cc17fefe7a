"""Buyer best response to an announced price schedule.

Each consumption slot (unit i, day t) is optimized independently: supply is
unlimited and storage cost is linear, so slots never couple. Ties between
purchase days break toward the latest day (least storage), which also keeps
the produced plan consistent with consuming the most recently bought units
as the highest-value slots.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Instance, PlanError, PriceSchedule, PurchasePlan, validate_plan


def purchase_window(instance: Instance, t: int) -> range:
    """Days on which a unit consumed on day t can usefully be bought."""
    span = instance.decay.span(instance.t)
    return range(max(1, t - span + 1), t + 1)


def slot_options(instance: Instance, prices: PriceSchedule, i: int, t: int):
    """Yield (purchase day, exact utility) for slot (i, t).

    Days on which the unit would be worthless at consumption are skipped.
    """
    v = instance.valuations.value(i, t).raw
    c = instance.storage_cost.raw
    for s in purchase_window(instance, t):
        frac = instance.decay.fraction(t - s + 1)
        if frac == 0:
            continue
        worth = v if frac == 1 else Fraction(v) * frac
        yield s, worth - prices.day(s).raw - c * (t - s)


def _best_option(instance, prices, i, t):
    best_s, best_u = None, None
    for s, u in slot_options(instance, prices, i, t):
        if best_u is None or u >= best_u:
            best_s, best_u = s, u
    return best_s, best_u


def best_response(instance: Instance, prices: PriceSchedule) -> PurchasePlan:
    """Utility-maximizing purchase plan for the announced schedule.

    A slot is filled when its best utility is >= 0: buyers do purchase at
    exactly zero utility, matching the demand rule used by the seller-side
    solvers. Runs in O(T^2 N).
    """
    if len(prices) != instance.t:
        raise PlanError(f"schedule covers {len(prices)} days, instance has {instance.t}")
    assignments = {}
    for t in range(instance.t, 0, -1):
        for i in range(1, instance.n + 1):
            s, u = _best_option(instance, prices, i, t)
            if s is not None and u >= 0:
                assignments[(i, t)] = s
    return PurchasePlan.from_mapping(assignments)


def verify_no_deviation(instance: Instance, prices: PriceSchedule, plan: PurchasePlan) -> bool:
    """True iff no single slot can strictly gain by moving or toggling.

    Also rejects plans where an assigned slot ties with a later purchase day:
    ties must resolve to the least storage.
    """
    validate_plan(instance, plan)
    c = instance.storage_cost.raw
    for t in range(1, instance.t + 1):
        for i in range(1, instance.n + 1):
            s0 = plan.purchase_day(i, t)
            options = dict()
            for s, u in slot_options(instance, prices, i, t):
                options[s] = u
            if s0 is None:
                if options and max(options.values()) > 0:
                    return False
                continue
            if s0 not in options:
                return False
            u0 = options[s0]
            if u0 < 0:
                return False
            for s, u in options.items():
                if u > u0:
                    return False
                if u == u0 and s > s0:
                    return False
    return True
