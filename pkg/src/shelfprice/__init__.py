"""Exact solvers for pre-announced pricing of goods with a limited shelf-life.

A seller commits to one price per day before trade starts; buyers respond by
buying, storing (at a linear per-day cost) and consuming goods whose value
decays with storage age. The package computes buyer best responses, optimal
seller schedules (a windowed dynamic program for cliff decay, a restricted
search for infinite shelf-life), brute-force oracles for verification,
certified revenue bounds, and a seeded experiment harness.
"""

__version__ = "0.1.0"

from .baseline import solve_no_storage
from .bounds import (
    AdversarialConfig,
    ConfigError,
    adversarial_instance,
    certify_fractional_bounds,
    certify_upper_bound,
    compute_M,
    lower_bound_schedules,
)
from .buyer import best_response, verify_no_deviation
from .candidates import (
    CandidateSet,
    candidate_prices_all,
    candidate_prices_future,
    candidate_set_all,
    candidate_set_future,
    decay_price_grid,
    oracle_grid,
)
from .dp import (
    SolveResult,
    SolveStats,
    SolverError,
    TimeLimitExceeded,
    solve_cliff,
    window_cost,
    window_demand,
)
from .experiments import (
    CellRow,
    SweepConfig,
    averaged_rows,
    averages_to_csv,
    emit_figure_data,
    figure_data,
    run_sweep,
    sample_instance,
    sample_valuations,
)
from .model import (
    Cliff,
    Fractional,
    Instance,
    InstanceError,
    Outcome,
    PlanError,
    PriceSchedule,
    PurchasePlan,
    Step,
    ValuationMatrix,
    evaluate_outcome,
    instance_to_json,
    load_instance,
    save_instance,
    validate_plan,
)
from .money import Money, MoneyError, fraction_str, set_precision
from .oracle import BudgetExceededError, OracleResult, oracle_optimal, oracle_pareto

__all__ = [
    "AdversarialConfig",
    "BudgetExceededError",
    "CandidateSet",
    "CellRow",
    "Cliff",
    "ConfigError",
    "Fractional",
    "Instance",
    "InstanceError",
    "Money",
    "MoneyError",
    "OracleResult",
    "Outcome",
    "PlanError",
    "PriceSchedule",
    "PurchasePlan",
    "SolveResult",
    "SolveStats",
    "SolverError",
    "Step",
    "SweepConfig",
    "TimeLimitExceeded",
    "ValuationMatrix",
    "adversarial_instance",
    "averaged_rows",
    "averages_to_csv",
    "best_response",
    "candidate_prices_all",
    "candidate_prices_future",
    "candidate_set_all",
    "candidate_set_future",
    "certify_fractional_bounds",
    "certify_upper_bound",
    "compute_M",
    "decay_price_grid",
    "emit_figure_data",
    "evaluate_outcome",
    "figure_data",
    "fraction_str",
    "instance_to_json",
    "load_instance",
    "lower_bound_schedules",
    "oracle_grid",
    "oracle_optimal",
    "oracle_pareto",
    "run_sweep",
    "sample_instance",
    "sample_valuations",
    "save_instance",
    "set_precision",
    "solve_cliff",
    "solve_no_storage",
    "validate_plan",
    "verify_no_deviation",
    "window_cost",
    "window_demand",
]
