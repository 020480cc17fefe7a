from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_cliff_instance, spike_instance
from shelfprice.candidates import (
    CandidateSet,
    candidate_prices_all,
    candidate_prices_future,
    candidate_set_all,
    decay_price_grid,
    oracle_grid,
)
from shelfprice.model import Cliff, Fractional, Instance, ValuationMatrix
from shelfprice.money import Money
from shelfprice.oracle import oracle_optimal


def units(prices):
    return [p.raw / 1000 for p in prices]


class TestRows:
    def test_spike_free_storage_day_one(self, spike):
        row = candidate_prices_future(spike, 1)
        assert units(row) == [1, 1000, spike.sentinel_price().raw / 1000]

    def test_spike_costly_storage_day_one(self, spike_c2):
        # future values discounted by storage; negatives discarded
        row = candidate_prices_future(spike_c2, 1)
        assert units(row) == [1, 996, spike_c2.sentinel_price().raw / 1000]

    def test_last_day_future_row_is_own_column(self, spike_c2):
        row = candidate_prices_future(spike_c2, 3)
        assert units(row) == [1000, spike_c2.sentinel_price().raw / 1000]

    def test_all_days_row_includes_past_markups(self, spike_c2):
        row = candidate_prices_all(spike_c2, 3)
        for expected in (5, 3, 1000):  # 1+2c, 1+c, value itself
            assert Money.from_units(expected) in row

    def test_free_storage_rows_constant(self, spike):
        rows = [candidate_prices_all(spike, t) for t in (1, 2, 3)]
        assert rows[0] == rows[1] == rows[2]

    def test_degenerate_zero_values(self):
        inst = Instance(ValuationMatrix.from_units([[0], [0]]), Cliff(1), Money(0))
        row = candidate_prices_all(inst, 1)
        assert units(row) == [0, inst.sentinel_price().raw / 1000]

    def test_day_out_of_range(self, spike):
        with pytest.raises(ValueError):
            candidate_prices_future(spike, 4)


@given(st.integers(0, 10_000))
def test_row_invariants(seed):
    inst = random_cliff_instance(seed)
    for t in range(1, inst.t + 1):
        future = candidate_prices_future(inst, t)
        full = candidate_prices_all(inst, t)
        assert set(future) <= set(full)
        assert inst.sentinel_price() in future
        assert inst.sentinel_price() in full
        assert all(p.raw >= 0 for p in full)
        assert list(full) == sorted(full)
        assert len(full) <= inst.n * inst.t + 1


@pytest.mark.parametrize("seed", range(200, 212))
def test_midpoint_augmentation_never_improves(seed):
    # grid optimality: inserting midpoints between adjacent candidates
    # cannot raise the oracle optimum
    inst = random_cliff_instance(seed, max_t=4)
    base = candidate_set_all(inst)
    augmented_rows = []
    for row in base.rows:
        raw = [p.raw for p in row]
        mids = {(a + b) // 2 for a, b in zip(raw, raw[1:])}
        augmented_rows.append(tuple(Money(x) for x in sorted(set(raw) | mids)))
    augmented = CandidateSet(tuple(augmented_rows), base.sentinel)
    assert (
        oracle_optimal(inst, augmented).outcome.revenue
        == oracle_optimal(inst, base).outcome.revenue
    )


class TestDecayGrid:
    def test_contains_scaled_values_and_sentinel(self):
        inst = spike_instance(0).with_decay(Fractional(2, Fraction(1, 2)))
        grid = decay_price_grid(inst)
        row = grid.row(1)
        assert Money.from_units(500) in row  # 1000 * 1/2
        assert Money.parse("0.5") in row  # 1 * 1/2
        assert inst.sentinel_price() in row
        assert grid.rows[0] == grid.rows[2]  # day-independent

    def test_storage_offsets_present(self):
        inst = spike_instance(2).with_decay(Fractional(2, Fraction(1, 2)))
        row = decay_price_grid(inst).row(1)
        assert Money.from_units(1000 + 3 * 2) in row

    def test_oracle_grid_dispatch(self, spike):
        assert oracle_grid(spike) == candidate_set_all(spike)
        frac = spike.with_decay(Fractional(2, Fraction(1, 2)))
        assert oracle_grid(frac) == decay_price_grid(frac)


def test_product_size(spike):
    grid = candidate_set_all(spike)
    assert grid.product_size() == 3**3
