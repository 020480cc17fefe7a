"""Command-line entry point wiring every module.

Exit codes: 0 success, 1 domain errors (budget, overflow, invalid input
content), 2 usage errors (bad arguments, missing files). All results are
reproducible: wall-clock diagnostics go to the log, never into reports,
and randomness only enters through explicit seeds.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .baseline import solve_no_storage
from .bounds import (
    AdversarialConfig,
    ConfigError,
    certify_fractional_bounds,
    certify_upper_bound,
    compute_M,
    lower_bound_schedules,
)
from .buyer import best_response
from .dp import SolverError, TimeLimitExceeded, solve_cliff
from .experiments import (
    FIGURES,
    SweepConfig,
    averages_to_csv,
    emit_figure_data,
    rows_from_csv,
    rows_to_csv,
    run_sweep,
)
from .model import (
    InstanceError,
    PlanError,
    PriceSchedule,
    evaluate_outcome,
    load_instance,
)
from .money import Money, MoneyError, fraction_str
from .oracle import BudgetExceededError, oracle_optimal

log = logging.getLogger("shelfprice")

DOMAIN_ERRORS = (
    InstanceError, PlanError, MoneyError, SolverError,
    BudgetExceededError, ConfigError, TimeLimitExceeded, OverflowError,
)


def _setup_logging() -> None:
    level = os.environ.get("SHELFPRICE_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _read_instance(path: str):
    return load_instance(Path(path).read_text())


def _parse_prices(text: str, instance) -> PriceSchedule:
    sentinel = instance.sentinel_price()
    prices = []
    for token in text.split(","):
        token = token.strip()
        prices.append(sentinel if token == "L" else Money.parse(token))
    return PriceSchedule(tuple(prices))


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.report == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _schedule_strs(schedule: PriceSchedule) -> list[str]:
    return [str(p) for p in schedule.prices]


def cmd_solve(args) -> int:
    instance = _read_instance(args.instance)
    if args.model == "infinite":
        result = solve_no_storage(instance, threads=args.threads)
    else:
        result = solve_cliff(
            instance, threads=args.threads, time_limit_s=args.time_limit)
    log.info("solved in %d ms", result.stats.wall_ms)
    payload = {
        "model": args.model,
        "schedule": _schedule_strs(result.schedule),
        "revenue": str(result.outcome.revenue),
        "utility": fraction_str(result.outcome.buyer_utility),
        "quantities": list(result.outcome.quantities),
        "states_total": result.stats.states_total,
        "candidate_sizes": list(result.stats.candidate_sizes),
    }
    _emit(args, payload, [
        "prices: " + ",".join(payload["schedule"]),
        f"revenue: {payload['revenue']}",
        f"utility: {payload['utility']}",
        "quantities: " + ",".join(str(q) for q in payload["quantities"]),
        f"states: {payload['states_total']}",
    ])
    return 0


def cmd_respond(args) -> int:
    instance = _read_instance(args.instance)
    prices = _parse_prices(args.prices, instance)
    plan = best_response(instance, prices)
    outcome = evaluate_outcome(instance, prices, plan)
    payload = {
        "assignments": [
            {"unit": i, "day": t, "buy_day": s} for i, t, s in plan.assignments
        ],
        "quantities": list(outcome.quantities),
        "revenue": str(outcome.revenue),
        "utility": fraction_str(outcome.buyer_utility),
    }
    lines = [
        f"unit {i} for day {t}: buy day {s} (stored {t - s})"
        for i, t, s in plan.assignments
    ] or ["no purchases"]
    lines += [
        "quantities: " + ",".join(str(q) for q in outcome.quantities),
        f"revenue: {payload['revenue']}",
        f"utility: {payload['utility']}",
    ]
    _emit(args, payload, lines)
    return 0


def cmd_oracle(args) -> int:
    instance = _read_instance(args.instance)
    result = oracle_optimal(instance, budget=args.budget, threads=args.threads)
    log.info("enumerated %d schedules in %d ms",
             result.schedules_evaluated, result.wall_ms)
    payload = {
        "schedule": _schedule_strs(result.schedule),
        "revenue": str(result.outcome.revenue),
        "utility": fraction_str(result.outcome.buyer_utility),
        "schedules_evaluated": result.schedules_evaluated,
    }
    _emit(args, payload, [
        "prices: " + ",".join(payload["schedule"]),
        f"revenue: {payload['revenue']}",
        f"utility: {payload['utility']}",
        f"schedules: {payload['schedules_evaluated']}",
    ])
    return 0


def _pass_str(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_bounds_lower(args) -> int:
    instance = _read_instance(args.instance)
    cert = lower_bound_schedules(instance)
    payload = {
        "d": cert.d,
        "m": str(cert.m),
        "best_revenue": str(cert.best_revenue),
        "revenues": [str(r) for r in cert.revenues],
        "passed": cert.passed,
    }
    _emit(args, payload, [
        f"M = {cert.m}, best offset revenue = {cert.best_revenue}",
        f"{_pass_str(cert.passed)}: d*best >= M "
        f"({cert.d}*{cert.best_revenue} vs {cert.m})",
    ])
    return 0 if cert.passed else 1


def cmd_bounds_adversarial(args) -> int:
    cert = certify_upper_bound(
        AdversarialConfig(args.a, args.d, args.k), threads=args.threads)
    payload = {
        "a": args.a, "d": args.d, "k": args.k,
        "opt": str(cert.opt), "m": str(cert.m),
        "lhs": cert.lhs, "rhs": cert.rhs,
        "oracle_confirmed": cert.oracle_confirmed,
        "blocks_passed": cert.blocks_passed,
        "passed": cert.passed,
    }
    _emit(args, payload, [
        f"OPT = {cert.opt}, M = {cert.m}",
        f"{_pass_str(cert.lhs < cert.rhs)}: d*OPT*(a-1) < M*a ({cert.lhs} < {cert.rhs})",
        f"{_pass_str(cert.blocks_passed)}: per-block optima "
        + ",".join(str(x) for x in cert.block_optima),
        f"{_pass_str(cert.passed)}: certificate",
    ])
    return 0 if cert.passed and cert.blocks_passed else 1


def cmd_bounds_fractional(args) -> int:
    instance = _read_instance(args.instance)
    cert = certify_fractional_bounds(instance, threads=args.threads, budget=args.budget)
    payload = {
        "opt": str(cert.opt), "m": str(cert.m),
        "rho": fraction_str(cert.rho), "d": cert.d,
        "lhs": cert.lhs, "rhs": cert.rhs,
        "ratio": fraction_str(cert.ratio),
        "passed": cert.passed,
    }
    _emit(args, payload, [
        f"OPT = {cert.opt}, M = {cert.m}, residual fraction {fraction_str(cert.rho)}",
        f"{_pass_str(cert.passed)}: d*OPT >= (1-rho)*M ({cert.lhs} >= {cert.rhs})",
        f"observed OPT/M = {fraction_str(cert.ratio)}",
    ])
    return 0 if cert.passed else 1


def cmd_experiment_sweep(args) -> int:
    config = SweepConfig.from_json(Path(args.config).read_text())
    rows = run_sweep(config, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "raw.csv").write_text(rows_to_csv(rows))
    (out / "averages.csv").write_text(averages_to_csv(rows))
    incomplete = [r for r in rows if r.status != "ok"]
    print(f"wrote {out / 'raw.csv'} and {out / 'averages.csv'} "
          f"({len(rows)} rows, {len(incomplete)} incomplete)")
    return 0


def cmd_experiment_plot(args) -> int:
    rows = rows_from_csv(Path(args.csv).read_text())
    out_svg = Path(args.out)
    out_csv = out_svg.with_suffix(".csv")
    data = emit_figure_data(rows, args.figure, out_csv, out_svg)
    if data.missing:
        print("missing series: " + ",".join(data.missing))
    print(f"wrote {out_csv} and {out_svg}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shelfprice",
        description="Exact pricing solvers for goods with a limited shelf-life",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker cap; results never depend on it")
        p.add_argument("--report", choices=("text", "json"), default="text")

    p = sub.add_parser("solve", help="optimal pre-announced prices")
    p.add_argument("--instance", required=True)
    p.add_argument("--model", choices=("cliff", "infinite"), default="cliff")
    p.add_argument("--time-limit", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("respond", help="buyer best response to given prices")
    p.add_argument("--instance", required=True)
    p.add_argument("--prices", required=True,
                   help="comma-separated amounts; L means the no-sale sentinel")
    common(p)
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("oracle", help="exhaustive optimum over the candidate grid")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    common(p)
    p.set_defaults(func=cmd_oracle)

    pb = sub.add_parser("bounds", help="revenue bound certificates")
    bsub = pb.add_subparsers(dest="bounds_command", required=True)

    p = bsub.add_parser("lower", help="offset-schedule revenue floor")
    p.add_argument("--instance", required=True)
    common(p)
    p.set_defaults(func=cmd_bounds_lower)

    p = bsub.add_parser("adversarial", help="tightness certificate")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_bounds_adversarial)

    p = bsub.add_parser("fractional", help="residual-value revenue floor")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    common(p)
    p.set_defaults(func=cmd_bounds_fractional)

    pe = sub.add_parser("experiment", help="seeded sweeps and figures")
    esub = pe.add_subparsers(dest="experiment_command", required=True)

    p = esub.add_parser("sweep", help="run a sweep config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_experiment_sweep)

    p = esub.add_parser("plot", help="figure CSV + SVG from sweep rows")
    p.add_argument("--csv", required=True)
    p.add_argument("--figure", choices=FIGURES, required=True)
    p.add_argument("--out", required=True, help="output .svg path")
    common(p)
    p.set_defaults(func=cmd_experiment_plot)

    return parser


def dispatch(argv) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
