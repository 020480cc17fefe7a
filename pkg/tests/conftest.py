import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from shelfprice.model import Cliff, Instance, ValuationMatrix
from shelfprice.money import Money

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


SPIKE_DOC = {
    "N": 1,
    "T": 3,
    "storage_cost": "0",
    "mode": "single",
    "decay": {"kind": "cliff", "d": 2},
    "values": [["1"], ["1"], ["1000"]],
}


def spike_instance(cost_units: int = 0) -> Instance:
    """Three-day single-buyer game with a value spike on the last day.

    The optimal schedule makes the buyer store on day one, and raising the
    storage cost from 0 to 2 strictly lowers the optimal revenue
    (1002 -> 1001).
    """
    matrix = ValuationMatrix.from_units([[1], [1], [1000]])
    return Instance(matrix, Cliff(2), Money.from_units(cost_units), "single")


def random_cliff_instance(seed: int, *, max_n: int = 3, max_t: int = 5,
                          max_d: int = 3, costs=(0, 1, 2), vmax: int = 10,
                          min_t: int = 1) -> Instance:
    """Deterministic small random instance with integer unit values."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(1, max_n + 1))
    t = int(rng.integers(min_t, max_t + 1))
    d = int(rng.integers(1, min(max_d, t) + 1))
    c = int(costs[rng.integers(0, len(costs))])
    vals = rng.integers(0, vmax + 1, size=(t, n))
    rows = [sorted((int(x) for x in vals[i]), reverse=True) for i in range(t)]
    matrix = ValuationMatrix.from_units(rows)
    return Instance(matrix, Cliff(d), Money.from_units(c), "single")


@pytest.fixture
def spike():
    return spike_instance(0)


@pytest.fixture
def spike_c2():
    return spike_instance(2)
