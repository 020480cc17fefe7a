"""Seeded storage-cost / shelf-life sweeps with figure-data emission.

Valuations are sampled per buyer: a base value from one normal distribution,
then a per-day value around that base from a second, tighter one. Negatives
truncate to zero, values quantize onto the money grid before solving, and
every cell is solved independently, so any (seed, d, c) cell reproduces in
isolation. All randomness flows through explicit seeds into a fixed, named
generator (PCG64); rows are emitted in sorted key order so CSV output is
reproducible bit for bit (the wall_ms diagnostic column aside).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .baseline import solve_no_storage
from .dp import TimeLimitExceeded, solve_cliff
from .model import Cliff, Instance, InstanceError, ValuationMatrix
from . import money
from .money import Money, fraction_str

log = logging.getLogger(__name__)

INFINITE = "infinite"

CSV_COLUMNS = ("seed", "N", "T", "variance", "model", "d", "c",
               "revenue", "utility", "wall_ms", "status")


@dataclass(frozen=True, slots=True)
class SweepConfig:
    """One experiment family: grid of shelf-lives and storage costs."""

    n: int = 5
    t: int = 20
    base_mean: float = 30.0
    base_variance: float = 10.0
    daily_variance: float = 5.0
    base_stddev: float | None = None   # overrides base_variance when set
    daily_stddev: float | None = None  # overrides daily_variance when set
    costs: tuple[Money, ...] = tuple(Money.from_units(c) for c in range(6))
    durations: tuple = (2, 3, 4, INFINITE)
    seeds: tuple[int, ...] = tuple(range(30))
    mode: str = "multi"
    cell_time_limit_s: float | None = None

    def __post_init__(self):
        if self.base_variance < 0 or self.daily_variance < 0:
            raise InstanceError("variances must be non-negative")
        for dur in self.durations:
            if dur != INFINITE and (not isinstance(dur, int) or dur < 1):
                raise InstanceError(f"duration must be a positive int or {INFINITE!r}: {dur!r}")

    def effective_base_stddev(self) -> float:
        return self.base_stddev if self.base_stddev is not None else math.sqrt(self.base_variance)

    def effective_daily_stddev(self) -> float:
        return self.daily_stddev if self.daily_stddev is not None else math.sqrt(self.daily_variance)

    def variance_label(self) -> str:
        var = self.daily_variance if self.daily_stddev is None else self.daily_stddev**2
        return f"{var:g}"

    @classmethod
    def from_json(cls, data) -> "SweepConfig":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        kwargs = dict(data)
        if "costs" in kwargs:
            kwargs["costs"] = tuple(Money.parse(str(c)) for c in kwargs["costs"])
        if "durations" in kwargs:
            kwargs["durations"] = tuple(
                d if d == INFINITE else int(d) for d in kwargs["durations"]
            )
        if "seeds" in kwargs:
            kwargs["seeds"] = tuple(int(s) for s in kwargs["seeds"])
        return cls(**kwargs)

    def to_json(self) -> dict:
        out = {
            "n": self.n, "t": self.t,
            "base_mean": self.base_mean, "base_variance": self.base_variance,
            "daily_variance": self.daily_variance,
            "costs": [str(c) for c in self.costs],
            "durations": list(self.durations),
            "seeds": list(self.seeds),
            "mode": self.mode,
        }
        if self.base_stddev is not None:
            out["base_stddev"] = self.base_stddev
        if self.daily_stddev is not None:
            out["daily_stddev"] = self.daily_stddev
        if self.cell_time_limit_s is not None:
            out["cell_time_limit_s"] = self.cell_time_limit_s
        return out


def sample_valuations(config: SweepConfig, seed: int) -> ValuationMatrix:
    """Deterministic valuation draw for one seed (PCG64, fixed draw order)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    base = rng.normal(config.base_mean, config.effective_base_stddev(), size=config.n)
    daily = rng.normal(base[:, None], config.effective_daily_stddev(), size=(config.n, config.t))
    raw = np.rint(np.maximum(daily, 0.0) * money.SCALE).astype(np.int64)
    days = []
    for t in range(config.t):
        col = sorted((int(x) for x in raw[:, t]), reverse=True)
        days.append(tuple(Money(x) for x in col))
    return ValuationMatrix(tuple(days))


def sample_instance(config: SweepConfig, seed: int, duration=None,
                    cost: Money | None = None) -> Instance:
    """Instance for one sweep cell; defaults to the config's first cell."""
    duration = duration if duration is not None else config.durations[0]
    cost = cost if cost is not None else config.costs[0]
    d = config.t if duration == INFINITE else min(duration, config.t)
    return Instance(sample_valuations(config, seed), Cliff(d), cost, config.mode)


@dataclass(frozen=True, slots=True)
class CellRow:
    seed: int
    n: int
    t: int
    variance: str
    model: str  # "cliff" | "infinite"
    d: int | None  # None for the infinite model
    c: Money
    revenue: Money | None
    utility: Fraction | None
    wall_ms: int
    status: str

    def key(self):
        return (self.seed, self.model == INFINITE, self.d or 0, self.c.raw)

    def csv_values(self) -> tuple:
        return (
            self.seed, self.n, self.t, self.variance, self.model,
            "" if self.d is None else self.d, str(self.c),
            "" if self.revenue is None else str(self.revenue),
            "" if self.utility is None else fraction_str(self.utility),
            self.wall_ms, self.status,
        )


def _run_cell(config: SweepConfig, seed: int, duration, cost: Money) -> CellRow:
    instance = sample_instance(config, seed, duration, cost)
    model = INFINITE if duration == INFINITE else "cliff"
    started = time.monotonic()
    try:
        if duration == INFINITE:
            result = solve_no_storage(instance)
        else:
            result = solve_cliff(instance, time_limit_s=config.cell_time_limit_s)
        revenue, utility, status = result.outcome.revenue, result.outcome.buyer_utility, "ok"
    except TimeLimitExceeded:
        revenue = utility = None
        status = "timeout"
    except Exception as exc:  # recorded, never silently dropped
        revenue = utility = None
        status = f"error:{type(exc).__name__}"
        log.warning("cell seed=%s d=%s c=%s failed: %s", seed, duration, cost, exc)
    wall_ms = int((time.monotonic() - started) * 1000)
    return CellRow(
        seed=seed, n=config.n, t=config.t, variance=config.variance_label(),
        model=model, d=None if duration == INFINITE else int(duration),
        c=cost, revenue=revenue, utility=utility, wall_ms=wall_ms, status=status,
    )


def run_sweep(config: SweepConfig, *, threads: int = 1) -> list[CellRow]:
    """One row per (seed, duration, cost), sorted by key; cells independent."""
    cells = [
        (seed, duration, cost)
        for seed in config.seeds
        for duration in config.durations
        for cost in config.costs
    ]
    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda c: _run_cell(config, *c), cells))
    else:
        rows = [_run_cell(config, *cell) for cell in cells]
    return sorted(rows, key=CellRow.key)


def rows_to_csv(rows: list[CellRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_values())
    return buf.getvalue()


AVERAGE_COLUMNS = ("model", "d", "c", "variance", "N", "T", "n_seeds",
                   "revenue_mean", "utility_mean")


def averaged_rows(rows: list[CellRow]) -> list[tuple]:
    """Across-seed exact means per (model, d, c, variance); ok cells only."""
    groups: dict = {}
    for row in rows:
        if row.status != "ok":
            continue
        key = (row.model == INFINITE, row.d or 0, row.c.raw,
               row.variance, row.model, row.c, row.n, row.t)
        groups.setdefault(key, []).append(row)
    out = []
    for key in sorted(groups):
        cells = groups[key]
        _, d, _, variance, model, cost, n, t = key
        rev = sum(Fraction(r.revenue.raw, money.SCALE) for r in cells) / len(cells)
        util = sum(r.utility for r in cells) / len(cells)
        out.append((
            model, "" if model == INFINITE else d, str(cost), variance, n, t,
            len(cells), fraction_str(rev), fraction_str(util),
        ))
    return out


def averages_to_csv(rows: list[CellRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AVERAGE_COLUMNS)
    for record in averaged_rows(rows):
        writer.writerow(record)
    return buf.getvalue()


def rows_from_csv(text: str) -> list[CellRow]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        rows.append(CellRow(
            seed=int(rec["seed"]), n=int(rec["N"]), t=int(rec["T"]),
            variance=rec["variance"], model=rec["model"],
            d=int(rec["d"]) if rec["d"] else None,
            c=Money.parse(rec["c"]),
            revenue=Money.parse(rec["revenue"]) if rec["revenue"] else None,
            utility=_parse_fraction_field(rec["utility"]) if rec["utility"] else None,
            wall_ms=int(rec["wall_ms"]), status=rec["status"],
        ))
    return rows


def _parse_fraction_field(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(Money.parse(text).raw, money.SCALE)


def _series_label(row: CellRow, by: str) -> str:
    if by == "duration":
        head = INFINITE if row.model == INFINITE else f"d={row.d}"
        return f"{head} var={row.variance}"
    return f"c={row.c} var={row.variance}"


@dataclass(frozen=True, slots=True)
class FigureData:
    xlabel: str
    ylabel: str
    xs: tuple  # sorted x positions
    series: dict  # label -> {x: value string}
    missing: tuple[str, ...]


FIGURES = ("profit_vs_cost", "utility_vs_cost", "utility_vs_duration")


def figure_data(rows: list[CellRow], figure: str,
                expected_series: tuple[str, ...] = ()) -> FigureData:
    """Seed-averaged series for one figure; exact means, no floats."""
    if figure not in FIGURES:
        raise InstanceError(f"unknown figure {figure!r}; pick one of {FIGURES}")
    groups: dict = {}
    for row in rows:
        if row.status != "ok":
            continue
        if figure == "profit_vs_cost":
            label, x = _series_label(row, "duration"), str(row.c)
            value = Fraction(row.revenue.raw, money.SCALE)
        elif figure == "utility_vs_cost":
            label, x = _series_label(row, "duration"), str(row.c)
            value = row.utility
        else:  # utility_vs_duration; the infinite model plots at x = T
            label, x = _series_label(row, "cost"), row.t if row.d is None else row.d
            value = row.utility
        groups.setdefault(label, {}).setdefault(x, []).append(value)
    series = {
        label: {x: fraction_str(sum(vals) / len(vals)) for x, vals in per_x.items()}
        for label, per_x in groups.items()
    }
    xs = sorted({x for per_x in series.values() for x in per_x},
                key=lambda x: (Money.parse(x).raw if isinstance(x, str) else x))
    missing = tuple(s for s in expected_series if s not in series)
    if figure == "utility_vs_duration":
        xlabel, ylabel = "shelf-life d", "mean buyer utility"
    elif figure == "utility_vs_cost":
        xlabel, ylabel = "storage cost c", "mean buyer utility"
    else:
        xlabel, ylabel = "storage cost c", "mean revenue"
    return FigureData(xlabel, ylabel, tuple(xs), series, missing)


def write_figure_csv(data: FigureData, path) -> None:
    with open(path, "w", newline="") as fh:
        if data.missing:
            fh.write(f"# missing: {','.join(data.missing)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        labels = sorted(data.series)
        writer.writerow([data.xlabel] + labels)
        for x in data.xs:
            writer.writerow([x] + [data.series[l].get(x, "") for l in labels])


def write_figure_svg(data: FigureData, path) -> None:
    """Deterministic SVG line chart (fixed hash salt, no timestamps)."""
    import matplotlib
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    with matplotlib.rc_context({"svg.hashsalt": "shelfprice"}):
        fig = Figure(figsize=(7, 4.5))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        for label in sorted(data.series):
            per_x = data.series[label]
            xs = [x for x in data.xs if x in per_x]
            xticks = [float(Money.parse(x).raw) / money.SCALE if isinstance(x, str) else x
                      for x in xs]
            ys = [float(Fraction(per_x[x])) if "/" in per_x[x] else float(per_x[x])
                  for x in xs]
            ax.plot(xticks, ys, marker="o", label=label)
        ax.set_xlabel(data.xlabel)
        ax.set_ylabel(data.ylabel)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.savefig(path, format="svg", metadata={"Date": None})


def emit_figure_data(rows: list[CellRow], figure: str, csv_path, svg_path,
                     expected_series: tuple[str, ...] = ()) -> FigureData:
    """CSV plus companion SVG for one figure; missing series are listed in
    the CSV header and the chart is produced regardless."""
    data = figure_data(rows, figure, expected_series)
    write_figure_csv(data, csv_path)
    write_figure_svg(data, svg_path)
    return data
