"""Experiment orchestration: sweeps, aggregation, artifact files."""

from __future__ import annotations

import json
import math

import pytest

from bloomclock import (
    ConfigurationError,
    ExperimentConfig,
    SweepSpec,
    average_over,
    curve_rows,
    ratio_to_width,
    run_experiment,
    run_sweep,
    write_artifacts_json,
    write_curve_csv,
    write_sweep_csv,
)
from bloomclock.experiments import read_curve_csv, sweep_table

SMALL = ExperimentConfig("complete", n=10, m=3, k=2, gsn_limit=400)


def test_run_experiment_aggregate_is_mean():
    artifact = run_experiment(SMALL, (1, 2, 3))
    assert artifact.seeds == (1, 2, 3)
    assert len(artifact.reports) == 3
    for field in ("precision", "accuracy", "recall", "fpr", "alpha"):
        values = [getattr(r, field) for r in artifact.reports]
        assert getattr(artifact.aggregate, field) == pytest.approx(math.fsum(values) / 3)


def test_run_experiment_needs_seeds():
    with pytest.raises(ConfigurationError):
        run_experiment(SMALL, ())


def test_run_experiment_deterministic():
    a = run_experiment(SMALL, (5, 6))
    b = run_experiment(SMALL, (5, 6))
    assert a == b


def test_ratio_to_width_rounds_half_up():
    assert ratio_to_width(0.1, 125) == 13
    assert ratio_to_width(0.1, 50) == 5
    assert ratio_to_width(0.01, 10) == 1
    with pytest.raises(ConfigurationError):
        ratio_to_width(0.0, 50)


def test_sweep_expansion():
    spec = SweepSpec(
        topology="complete",
        n_values=(10, 20),
        m_ratios=(0.1, 0.2),
        k_values=(1, 2),
        pr_i_values=(0.0,),
        seeds=(1,),
        gsn_limit=100,
    )
    configs = spec.expand()
    assert len(configs) == 8
    assert {(c.n, c.m) for c in configs} == {(10, 1), (10, 2), (20, 2), (20, 4)}


def test_sweep_mixes_absolute_and_ratio_widths():
    spec = SweepSpec(n_values=(50,), m_values=(3,), m_ratios=(0.1,), seeds=(1,))
    assert spec.widths(50) == [3, 5]


def test_sweep_requires_widths_and_ns():
    with pytest.raises(ConfigurationError):
        SweepSpec(n_values=(10,), seeds=(1,)).expand()
    with pytest.raises(ConfigurationError):
        SweepSpec(m_values=(2,), seeds=(1,)).expand()


def test_sweep_cells_are_independent():
    spec = SweepSpec(
        n_values=(10,), m_values=(2, 3), k_values=(1, 2), seeds=(1, 2), gsn_limit=300
    )
    full = run_sweep(spec)
    reduced = run_sweep(
        SweepSpec(n_values=(10,), m_values=(3,), k_values=(1, 2), seeds=(1, 2), gsn_limit=300)
    )
    kept = [a for a in full if a.config.m == 3]
    assert kept == reduced


def test_average_over_groups():
    spec = SweepSpec(n_values=(10,), m_values=(2, 3), k_values=(1, 2), seeds=(1,), gsn_limit=300)
    artifacts = run_sweep(spec)
    grouped = average_over(artifacts, ("m",))
    assert {tuple(key.items()) for key, _ in grouped} == {
        (("topology", "complete"), ("n", 10), ("k", 1), ("pr_i", 0.0)),
        (("topology", "complete"), ("n", 10), ("k", 2), ("pr_i", 0.0)),
    }
    for key, agg in grouped:
        members = [a for a in artifacts if a.config.k == key["k"]]
        assert agg.precision == pytest.approx(
            math.fsum(a.aggregate.precision for a in members) / len(members)
        )


def test_average_over_unknown_field():
    with pytest.raises(ConfigurationError):
        average_over([], ("width",))


def test_sweep_table_rounds_to_three_decimals():
    artifacts = run_sweep(SweepSpec(n_values=(10,), m_values=(3,), seeds=(1, 2), gsn_limit=300))
    row = sweep_table(artifacts)[0]
    assert row["n"] == 10 and row["seeds"] == 2
    assert row["precision"] == round(artifacts[0].aggregate.precision, 3)


def test_sweep_csv_and_json(tmp_path):
    artifacts = run_sweep(SweepSpec(n_values=(10,), m_values=(3,), seeds=(1, 2), gsn_limit=300))
    csv_path = tmp_path / "sweep.csv"
    json_path = tmp_path / "sweep.json"
    write_sweep_csv(artifacts, csv_path)
    write_artifacts_json(artifacts, json_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("topology,n,m,k,pr_i,seeds,precision")
    assert len(lines) == 2
    payload = json.loads(json_path.read_text())
    cell = payload["cells"][0]
    assert cell["config"]["n"] == 10
    assert cell["per_seed"][0]["seed"] == 1
    # raw values in JSON, not the 3-decimal table rounding
    assert cell["aggregate"]["precision"] == artifacts[0].aggregate.precision


def test_curve_csv_round_trip(tmp_path):
    rows = curve_rows(ExperimentConfig("complete", n=10, m=3, k=2, gsn_limit=400, seed=3), 100, 101, 200)
    path = tmp_path / "curve.csv"
    write_curve_csv(rows, path)
    header = path.read_text().splitlines()[0]
    assert header == "z_gsn,pr_p,pr_fp_step,pr_fp_smooth,outcome"
    assert read_curve_csv(path) == rows
