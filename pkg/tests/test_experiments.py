import math

import pytest

from shelfprice.experiments import (
    INFINITE,
    SweepConfig,
    emit_figure_data,
    figure_data,
    rows_from_csv,
    rows_to_csv,
    run_sweep,
    sample_instance,
    sample_valuations,
)
from shelfprice.model import InstanceError
from shelfprice.money import Money


def tiny_config(**kwargs):
    defaults = dict(
        n=2, t=4, base_mean=6.0, base_variance=2.0, daily_variance=1.0,
        costs=(Money(0), Money.from_units(1)),
        durations=(2, INFINITE),
        seeds=(0, 1, 2),
    )
    defaults.update(kwargs)
    return SweepConfig(**defaults)


class TestSampling:
    def test_shape_and_invariants(self):
        config = SweepConfig(n=5, t=20, daily_variance=5.0)
        matrix = sample_valuations(config, 42)
        assert matrix.n == 5 and matrix.t == 20
        for t in range(1, 21):
            col = [v.raw for v in matrix.column(t)]
            assert all(x >= 0 for x in col)
            assert col == sorted(col, reverse=True)

    def test_zero_daily_variance_repeats_base_values(self):
        config = SweepConfig(n=3, t=5, daily_variance=0.0)
        matrix = sample_valuations(config, 7)
        first = matrix.column(1)
        assert all(matrix.column(t) == first for t in range(2, 6))

    def test_same_seed_same_matrix(self):
        config = tiny_config()
        assert sample_valuations(config, 3) == sample_valuations(config, 3)
        assert sample_valuations(config, 3) != sample_valuations(config, 4)

    def test_stddev_override(self):
        var = SweepConfig(n=2, t=2, daily_variance=4.0)
        sd = SweepConfig(n=2, t=2, daily_variance=123.0, daily_stddev=2.0)
        assert sample_valuations(var, 5) == sample_valuations(sd, 5)
        assert math.isclose(float(sd.variance_label()), 4.0)

    def test_sample_instance_cell(self):
        config = tiny_config()
        inst = sample_instance(config, 0, 2, Money.from_units(1))
        assert inst.decay.d == 2
        assert inst.storage_cost == Money.from_units(1)
        inst_inf = sample_instance(config, 0, INFINITE, Money(0))
        assert inst_inf.decay.d == config.t

    def test_config_validation(self):
        with pytest.raises(InstanceError):
            SweepConfig(daily_variance=-1.0)
        with pytest.raises(InstanceError):
            SweepConfig(durations=(0,))


class TestSweep:
    def test_rows_complete_and_sorted(self):
        config = tiny_config()
        rows = run_sweep(config)
        assert len(rows) == len(config.seeds) * len(config.durations) * len(config.costs)
        assert [r.key() for r in rows] == sorted(r.key() for r in rows)
        assert all(r.status == "ok" for r in rows)

    def test_empty_cost_grid(self):
        rows = run_sweep(tiny_config(costs=()))
        assert rows == []

    def test_deterministic_modulo_wall_time(self):
        config = tiny_config()
        a, b = run_sweep(config), run_sweep(config, threads=4)

        def strip(row):
            vals = row.csv_values()
            return vals[:9] + vals[10:]  # drop the wall_ms diagnostic

        assert [strip(r) for r in a] == [strip(r) for r in b]

    def test_infinite_model_monotone_in_cost(self):
        config = tiny_config(costs=tuple(Money.from_units(c) for c in range(3)))
        rows = run_sweep(config)
        for seed in config.seeds:
            revs = [r.revenue for r in rows if r.seed == seed and r.model == INFINITE]
            assert all(x <= y for x, y in zip(revs, revs[1:]))

    def test_csv_round_trip(self):
        rows = run_sweep(tiny_config())
        text = rows_to_csv(rows)
        assert rows_from_csv(text) == rows
        header = text.splitlines()[0]
        assert header == "seed,N,T,variance,model,d,c,revenue,utility,wall_ms,status"


class TestFigures:
    def test_profit_vs_cost_series(self):
        rows = run_sweep(tiny_config())
        data = figure_data(rows, "profit_vs_cost")
        assert "d=2 var=1" in data.series
        assert f"{INFINITE} var=1" in data.series
        assert data.xs == ("0", "1")

    def test_missing_series_listed(self, tmp_path):
        rows = run_sweep(tiny_config())
        data = emit_figure_data(
            rows, "profit_vs_cost",
            tmp_path / "fig.csv", tmp_path / "fig.svg",
            expected_series=("d=2 var=1", "d=9 var=9"),
        )
        assert data.missing == ("d=9 var=9",)
        text = (tmp_path / "fig.csv").read_text()
        assert text.startswith("# missing: d=9 var=9")
        assert (tmp_path / "fig.svg").stat().st_size > 0

    def test_duration_axis_ends_at_horizon(self):
        rows = run_sweep(tiny_config())
        data = figure_data(rows, "utility_vs_duration")
        assert data.xs == (2, 4)  # infinite model plotted at the horizon

    def test_emitted_files_deterministic(self, tmp_path):
        rows = run_sweep(tiny_config())
        for tag in ("a", "b"):
            emit_figure_data(rows, "utility_vs_cost",
                             tmp_path / f"{tag}.csv", tmp_path / f"{tag}.svg")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

    def test_unknown_figure(self):
        with pytest.raises(InstanceError):
            figure_data([], "nope")


def test_config_json_round_trip():
    config = tiny_config(cell_time_limit_s=5.0, daily_stddev=2.0)
    assert SweepConfig.from_json(config.to_json()) == config


class TestAverages:
    def test_exact_means_per_cell_group(self):
        from shelfprice.experiments import averaged_rows

        rows = run_sweep(tiny_config())
        records = averaged_rows(rows)
        groups = len(tiny_config().durations) * len(tiny_config().costs)
        assert len(records) == groups
        assert all(rec[6] == len(tiny_config().seeds) for rec in records)

    def test_csv_header(self):
        from shelfprice.experiments import averages_to_csv

        text = averages_to_csv(run_sweep(tiny_config()))
        assert text.splitlines()[0] == \
            "model,d,c,variance,N,T,n_seeds,revenue_mean,utility_mean"
