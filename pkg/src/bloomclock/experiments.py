"""Experiment orchestration: multi-seed runs, parameter sweeps, artifact emission.

A run artifact holds the per-seed slice metrics plus their arithmetic mean;
a sweep expands the cartesian product of parameter lists into independent
cells.  Tables are written as CSV rounded to three decimals, full artifacts
as JSON with raw values; neither carries timestamps, so byte-identical
reruns stay byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, replace
from itertools import product
from pathlib import Path
from typing import Sequence

from .errors import ConfigurationError
from .metrics import CurveRow, MetricsReport, SliceSpec, probability_curve, slice_metrics
from .simulation import ExperimentConfig, run

CURVE_HEADER = ("z_gsn", "pr_p", "pr_fp_step", "pr_fp_smooth", "outcome")
_METRIC_FIELDS = ("precision", "accuracy", "recall", "fpr", "alpha")


@dataclass(frozen=True)
class AggregateMetrics:
    """Arithmetic means of the ratio metrics over a set of reports."""

    precision: float
    accuracy: float
    recall: float
    fpr: float
    alpha: float


@dataclass(frozen=True)
class RunArtifact:
    """One configuration's per-seed reports plus their aggregate."""

    config: ExperimentConfig
    seeds: tuple[int, ...]
    reports: tuple[MetricsReport, ...]
    aggregate: AggregateMetrics


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def aggregate_reports(reports: Sequence[MetricsReport]) -> AggregateMetrics:
    return AggregateMetrics(
        **{field: _mean([getattr(r, field) for r in reports]) for field in _METRIC_FIELDS}
    )


def run_experiment(
    config: ExperimentConfig,
    seeds: Sequence[int],
    slice_spec: SliceSpec | None = None,
) -> RunArtifact:
    """Run one configuration once per seed and average the slice metrics."""
    if not seeds:
        raise ConfigurationError("need at least one seed")
    reports = tuple(slice_metrics(run(replace(config, seed=seed)), slice_spec) for seed in seeds)
    return RunArtifact(
        config=config, seeds=tuple(seeds), reports=reports, aggregate=aggregate_reports(reports)
    )


def ratio_to_width(ratio: float, n: int) -> int:
    """Clock width from a ratio of n, rounded half-up with a floor of 1."""
    if ratio <= 0:
        raise ConfigurationError(f"width ratio must be positive, got {ratio}")
    return max(1, int(math.floor(ratio * n + 0.5)))


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian sweep over (n, pr_i, m, k); widths may be absolute, ratios of n, or both."""

    topology: str = "complete"
    n_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()
    m_ratios: tuple[float, ...] = ()
    k_values: tuple[int, ...] = (2,)
    pr_i_values: tuple[float, ...] = (0.0,)
    seeds: tuple[int, ...] = (1, 2, 3)
    gsn_limit: int | None = None
    messages_per_client: int | None = None
    slice_spec: SliceSpec | None = None

    def widths(self, n: int) -> list[int]:
        widths = list(self.m_values) + [ratio_to_width(r, n) for r in self.m_ratios]
        if not widths:
            raise ConfigurationError("sweep needs m values or m ratios")
        return sorted(set(widths))

    def expand(self) -> list[ExperimentConfig]:
        if not self.n_values:
            raise ConfigurationError("sweep needs at least one n value")
        if not self.k_values or not self.pr_i_values:
            raise ConfigurationError("sweep needs at least one k and one pr_i value")
        configs = []
        for n, pr_i in product(self.n_values, self.pr_i_values):
            for m, k in product(self.widths(n), self.k_values):
                configs.append(
                    ExperimentConfig(
                        topology=self.topology,
                        n=n,
                        m=m,
                        k=k,
                        pr_i=pr_i,
                        seed=self.seeds[0],
                        gsn_limit=self.gsn_limit,
                        messages_per_client=self.messages_per_client,
                    )
                )
        return configs


def run_sweep(spec: SweepSpec) -> list[RunArtifact]:
    """One independent artifact per sweep cell, in expansion order."""
    return [run_experiment(config, spec.seeds, spec.slice_spec) for config in spec.expand()]


_CELL_FIELDS = ("topology", "n", "m", "k", "pr_i")


def average_over(
    artifacts: Sequence[RunArtifact], averaged: Sequence[str]
) -> list[tuple[dict, AggregateMetrics]]:
    """Group cells by the parameters not being averaged and mean their aggregates.

    Supports presentations like metrics per pr_i averaged over the m and k
    grid: ``average_over(artifacts, ("m", "k"))``.
    """
    unknown = set(averaged) - set(_CELL_FIELDS)
    if unknown:
        raise ConfigurationError(f"cannot average over unknown fields {sorted(unknown)}")
    key_fields = [f for f in _CELL_FIELDS if f not in averaged]
    groups: dict[tuple, list[RunArtifact]] = {}
    for artifact in artifacts:
        key = tuple(getattr(artifact.config, f) for f in key_fields)
        groups.setdefault(key, []).append(artifact)
    rows = []
    for key, members in groups.items():
        merged = AggregateMetrics(
            **{
                field: _mean([getattr(a.aggregate, field) for a in members])
                for field in _METRIC_FIELDS
            }
        )
        rows.append((dict(zip(key_fields, key)), merged))
    return rows


def curve_rows(config: ExperimentConfig, y_gsn: int, z_from: int, z_to: int) -> list[CurveRow]:
    """Run the configured simulation and evaluate the probability curve."""
    return probability_curve(run(config), y_gsn, z_from, z_to)


def _artifact_dict(artifact: RunArtifact) -> dict:
    return {
        "config": asdict(artifact.config),
        "seeds": list(artifact.seeds),
        "per_seed": [
            {"seed": seed, **asdict(report)}
            for seed, report in zip(artifact.seeds, artifact.reports)
        ],
        "aggregate": asdict(artifact.aggregate),
    }


def write_artifacts_json(artifacts: Sequence[RunArtifact], path: str | Path) -> None:
    """Full artifacts with raw (unrounded) values."""
    payload = {"cells": [_artifact_dict(a) for a in artifacts]}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def sweep_table(artifacts: Sequence[RunArtifact]) -> list[dict]:
    """One row of 3-decimal metrics per cell, for table presentation."""
    rows = []
    for artifact in artifacts:
        row = {field: getattr(artifact.config, field) for field in _CELL_FIELDS}
        row["seeds"] = len(artifact.seeds)
        row.update(
            {field: round(getattr(artifact.aggregate, field), 3) for field in _METRIC_FIELDS}
        )
        rows.append(row)
    return rows


def write_sweep_csv(artifacts: Sequence[RunArtifact], path: str | Path) -> None:
    rows = sweep_table(artifacts)
    _write_csv(rows, path)


def write_grouped_csv(
    grouped: Sequence[tuple[dict, AggregateMetrics]], path: str | Path
) -> None:
    rows = []
    for key, aggregate in grouped:
        row = dict(key)
        row.update({field: round(getattr(aggregate, field), 3) for field in _METRIC_FIELDS})
        rows.append(row)
    _write_csv(rows, path)


def _write_csv(rows: Sequence[dict], path: str | Path) -> None:
    if not rows:
        raise ConfigurationError("no rows to write")
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def write_curve_csv(rows: Sequence[CurveRow], path: str | Path) -> None:
    """Curve CSV with header z_gsn,pr_p,pr_fp_step,pr_fp_smooth,outcome."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CURVE_HEADER)
        for row in rows:
            writer.writerow([row.z_gsn, repr(row.pr_p), repr(row.pr_fp_step), repr(row.pr_fp_smooth), row.outcome])


def read_curve_csv(path: str | Path) -> list[CurveRow]:
    """Parse a curve CSV back into rows (lossless round trip with ``write_curve_csv``)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if tuple(header) != CURVE_HEADER:
            raise ValueError(f"unexpected curve header {header}")
        return [
            CurveRow(int(gsn), float(pr_p), float(fp_step), float(fp_smooth), outcome)
            for gsn, pr_p, fp_step, fp_smooth, outcome in reader
        ]
