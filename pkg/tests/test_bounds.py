from fractions import Fraction

import pytest

from conftest import random_cliff_instance, spike_instance
from shelfprice.bounds import (
    AdversarialConfig,
    ConfigError,
    adversarial_instance,
    certify_fractional_bounds,
    certify_upper_bound,
    compute_M,
    day_one_optimal_prices,
    lower_bound_schedules,
)
from shelfprice.dp import SolverError, solve_cliff
from shelfprice.model import Cliff, Fractional, Instance, ValuationMatrix
from shelfprice.money import Money


class TestComputeM:
    def test_spike(self, spike):
        assert compute_M(spike) == Money.from_units(1002)

    def test_adversarial_base_case(self):
        inst = adversarial_instance(AdversarialConfig(2, 2, 1))
        assert compute_M(inst) == Money.from_units(5)

    def test_all_zero(self):
        inst = Instance(ValuationMatrix.from_units([[0], [0]]), Cliff(1), Money(0))
        assert compute_M(inst) == Money(0)

    def test_quantity_tradeoff(self):
        # two units at 4 beat one at 6
        inst = Instance(ValuationMatrix.from_units([[6, 4]]), Cliff(1), Money(0))
        assert compute_M(inst) == Money.from_units(8)
        assert day_one_optimal_prices(inst) == (Money.from_units(4),)


class TestLowerBound:
    def test_spike_offsets(self, spike):
        cert = lower_bound_schedules(spike)
        sentinel = spike.sentinel_price()
        assert cert.schedules[0].prices == (
            Money.from_units(1), sentinel, Money.from_units(1000))
        assert cert.schedules[1].prices == (
            sentinel, Money.from_units(1), sentinel)
        # open-day demand plus storage purchases toward blocked days
        assert cert.revenues[0] == Money.from_units(1002)
        assert cert.revenues[1] == Money.from_units(2)
        assert cert.best_revenue == Money.from_units(1002)
        assert cert.passed  # 2 * 1002 >= 1002

    def test_degenerate_one_day_shelf_life(self):
        inst = random_cliff_instance(11).with_decay(Cliff(1))
        cert = lower_bound_schedules(inst)
        assert len(cert.schedules) == 1
        assert cert.best_revenue == cert.m

    def test_adversarial_base_case(self):
        inst = adversarial_instance(AdversarialConfig(2, 2, 1))
        cert = lower_bound_schedules(inst)
        assert 2 * cert.best_revenue.raw >= cert.m.raw
        assert cert.best_revenue == Money.from_units(3)

    @pytest.mark.parametrize("seed", range(1000, 1030))
    def test_floor_holds_on_random_instances(self, seed):
        inst = random_cliff_instance(seed)
        cert = lower_bound_schedules(inst)
        assert cert.passed
        # and therefore the true optimum clears the floor as well
        opt = solve_cliff(inst).outcome.revenue
        assert inst.decay.d * opt.raw >= cert.m.raw


class TestAdversarialInstance:
    def test_base_case_values(self):
        inst = adversarial_instance(AdversarialConfig(2, 2, 1))
        assert [[v.raw // 1000 for v in col] for col in inst.valuations.days] == [
            [1, 1], [3, 0]]
        assert inst.storage_cost == Money(0)
        assert inst.decay == Cliff(2)

    def test_two_blocks_scale_geometrically(self):
        inst = adversarial_instance(AdversarialConfig(2, 2, 2))
        assert [[v.raw // 1000 for v in col] for col in inst.valuations.days] == [
            [3, 3], [9, 0], [1, 1], [3, 0]]

    def test_single_day_ladder(self):
        inst = adversarial_instance(AdversarialConfig(3, 1, 1))
        assert [[v.raw // 1000 for v in col] for col in inst.valuations.days] == [[2]]

    def test_overflow_refused(self):
        with pytest.raises(ConfigError):
            adversarial_instance(AdversarialConfig(3, 4, 4))

    def test_invalid_configs(self):
        with pytest.raises(ConfigError):
            AdversarialConfig(1, 2, 1)
        with pytest.raises(ConfigError):
            AdversarialConfig(2, 0, 1)


class TestUpperBoundCertificate:
    def test_base_case(self):
        cert = certify_upper_bound(AdversarialConfig(2, 2, 1))
        assert cert.opt == Money.from_units(3)
        assert cert.m == Money.from_units(5)
        assert cert.lhs == 2 * cert.opt.raw and cert.rhs == 2 * cert.m.raw
        assert cert.passed and cert.oracle_confirmed and cert.blocks_passed

    def test_two_blocks(self):
        cert = certify_upper_bound(AdversarialConfig(2, 2, 2))
        assert cert.opt == Money.from_units(12)
        assert cert.m == Money.from_units(20)
        assert cert.block_optima == (Money.from_units(9), Money.from_units(3))
        assert cert.passed and cert.blocks_passed

    def test_wider_ladder(self):
        cert = certify_upper_bound(AdversarialConfig(3, 2, 1))
        assert cert.opt == Money.from_units(16)
        assert cert.m == Money.from_units(28)
        assert cert.lhs == 64_000 and cert.rhs == 84_000
        assert cert.passed

    def test_ratio_tightens_as_ladder_steepens(self):
        # OPT/M approaches 1/d from above as a grows
        ratios = []
        for a in (2, 3, 4):
            cert = certify_upper_bound(AdversarialConfig(a, 2, 1))
            ratios.append(Fraction(cert.opt.raw, cert.m.raw))
        assert all(r > Fraction(1, 2) for r in ratios)
        assert ratios == sorted(ratios, reverse=True)


class TestFractionalCertificate:
    def test_zero_residual_reduces_to_cliff_floor(self):
        inst = random_cliff_instance(2006, max_t=4).with_decay(
            Fractional(2, Fraction(0)))
        cert = certify_fractional_bounds(inst)
        assert cert.passed
        assert cert.rhs == 2 * cert.m.raw - cert.m.raw  # (1-0)*M vs d*OPT form

    def test_spike_with_residual_value(self, spike):
        inst = spike.with_decay(Fractional(2, Fraction(1, 2)))
        cert = certify_fractional_bounds(inst)
        assert cert.passed
        assert 2 * cert.opt.raw * 2 >= 1 * cert.m.raw

    @pytest.mark.parametrize("seed", range(1100, 1115))
    @pytest.mark.parametrize("rho", [Fraction(1, 4), Fraction(1, 2)])
    def test_random_instances_never_violate(self, seed, rho):
        inst = random_cliff_instance(seed, max_n=2, max_t=3, vmax=6,
                                     costs=(0, 1)).with_decay(Fractional(2, rho))
        cert = certify_fractional_bounds(inst)
        assert cert.passed

    def test_requires_fractional_profile(self, spike):
        with pytest.raises(SolverError):
            certify_fractional_bounds(spike)


def test_monotone_in_shelf_life_on_adversarial_instances():
    for cfg in (AdversarialConfig(2, 2, 1), AdversarialConfig(2, 2, 2),
                AdversarialConfig(3, 2, 1)):
        inst = adversarial_instance(cfg)
        revenues = [
            solve_cliff(inst.with_decay(Cliff(d))).outcome.revenue
            for d in range(1, inst.t + 1)
        ]
        assert all(a >= b for a, b in zip(revenues, revenues[1:]))
