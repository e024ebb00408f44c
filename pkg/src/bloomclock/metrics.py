"""Pairwise classification of an execution slice against the vector-clock oracle.

Events are subsampled on a GSN grid, every ordered pair of sampled events is
classified (both directions, so the causality spread tops out at 0.5), and
the confusion counts feed the usual ratio metrics.  The Bloom test cannot
produce false negatives, so recall is 1 whenever any positive exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .probability import classify_probabilities
from .simulation import EventRecord, ExecutionLog


@dataclass(frozen=True)
class SliceSpec:
    """GSN grid for sampling: start (default 10*n), stride, end (default log end)."""

    start_gsn: int | None = None
    stride: int = 100
    end_gsn: int | None = None

    def __post_init__(self) -> None:
        if self.start_gsn is not None and self.start_gsn < 1:
            raise ValueError(f"start_gsn must be at least 1, got {self.start_gsn}")
        if self.stride < 1:
            raise ValueError(f"stride must be at least 1, got {self.stride}")
        if self.end_gsn is not None and self.end_gsn < 1:
            raise ValueError(f"end_gsn must be at least 1, got {self.end_gsn}")

    def resolve(self, log: ExecutionLog) -> tuple[int, int, int]:
        start = self.start_gsn if self.start_gsn is not None else 10 * log.config.n
        end = self.end_gsn if self.end_gsn is not None else len(log.events)
        return start, self.stride, end


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: ConfusionCounts) -> ConfusionCounts:
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


@dataclass(frozen=True)
class MetricsReport:
    """Confusion counts with the ratio metrics and the causality spread alpha.

    ``sentinels`` names any ratio that fell back to its defined sentinel
    because the denominator was empty (precision and recall to 1.0, fpr to
    0.0).
    """

    counts: ConfusionCounts
    precision: float
    accuracy: float
    recall: float
    fpr: float
    alpha: float
    sentinels: tuple[str, ...] = ()


@dataclass(frozen=True)
class CurveRow:
    z_gsn: int
    pr_p: float
    pr_fp_step: float
    pr_fp_smooth: float
    outcome: str


def sample_slice(log: ExecutionLog, spec: SliceSpec | None = None) -> list[EventRecord]:
    """Events at gsn = start, start+stride, ... <= end."""
    spec = spec if spec is not None else SliceSpec()
    start, stride, end = spec.resolve(log)
    if end > len(log.events):
        raise ValueError(f"end_gsn {end} beyond log end {len(log.events)}")
    if start > end:
        raise ValueError(f"empty slice: start_gsn {start} beyond end_gsn {end}")
    sampled = []
    for gsn in range(start, end + 1, stride):
        event = log.events[gsn - 1]
        if event.gsn != gsn:
            raise ValueError(f"log is not contiguous at gsn {gsn}")
        sampled.append(event)
    return sampled


def classify_pair(y: EventRecord, z: EventRecord) -> str:
    """Outcome of testing y -> z: the vector oracle against the Bloom dominance test."""
    oracle = y.vector_ts.happened_before(z.vector_ts)
    predicted = y.bloom_ts.leq(z.bloom_ts)
    if oracle:
        return "TP" if predicted else "FN"
    return "FP" if predicted else "TN"


def confusion_counts(events: Sequence[EventRecord]) -> ConfusionCounts:
    """Classify every ordered pair of distinct events (both directions), vectorized."""
    if len(events) < 2:
        raise ValueError(f"need at least two events to form pairs, got {len(events)}")
    vecs = np.asarray([e.vector_ts.counters for e in events], dtype=np.int64)
    blooms = np.asarray([e.bloom_ts.counters for e in events], dtype=np.int64)
    count = len(events)
    # Chunk rows so the broadcast buffers stay around tens of megabytes.
    rows = max(1, (1 << 26) // max(1, count * vecs.shape[1]))
    tp = fp = tn = fn = 0
    for lo in range(0, count, rows):
        hi = min(count, lo + rows)
        vle = (vecs[lo:hi, None, :] <= vecs[None, :, :]).all(axis=2)
        veq = (vecs[lo:hi, None, :] == vecs[None, :, :]).all(axis=2)
        oracle = vle & ~veq
        predicted = (blooms[lo:hi, None, :] <= blooms[None, :, :]).all(axis=2)
        keep = np.ones((hi - lo, count), dtype=bool)
        keep[np.arange(hi - lo), np.arange(lo, hi)] = False
        tp += int((oracle & predicted & keep).sum())
        fp += int((~oracle & predicted & keep).sum())
        tn += int((~oracle & ~predicted & keep).sum())
        fn += int((oracle & ~predicted & keep).sum())
    return ConfusionCounts(tp, fp, tn, fn)


def compute_metrics(counts: ConfusionCounts) -> MetricsReport:
    """Ratio metrics over the counted pairs, with defined sentinels for empty denominators."""
    total = counts.total
    if total == 0:
        raise ValueError("cannot compute metrics over zero pairs")
    sentinels = []
    if counts.tp + counts.fp > 0:
        precision = counts.tp / (counts.tp + counts.fp)
    else:
        precision = 1.0
        sentinels.append("precision")
    if counts.tp + counts.fn > 0:
        recall = counts.tp / (counts.tp + counts.fn)
    else:
        recall = 1.0
        sentinels.append("recall")
    if counts.fp + counts.tn > 0:
        fpr = counts.fp / (counts.fp + counts.tn)
    else:
        fpr = 0.0
        sentinels.append("fpr")
    accuracy = (counts.tp + counts.tn) / total
    return MetricsReport(
        counts=counts,
        precision=precision,
        accuracy=accuracy,
        recall=recall,
        fpr=fpr,
        alpha=causality_spread(counts),
        sentinels=tuple(sentinels),
    )


def causality_spread(counts: ConfusionCounts) -> float:
    """Fraction of tested ordered pairs that are truly causally related."""
    total = counts.total
    if total == 0:
        raise ValueError("cannot compute causality spread over zero pairs")
    return (counts.tp + counts.fn) / total


def slice_metrics(log: ExecutionLog, spec: SliceSpec | None = None) -> MetricsReport:
    """Sample the slice, classify all ordered pairs, and compute the ratios."""
    return compute_metrics(confusion_counts(sample_slice(log, spec)))


def probability_curve(
    log: ExecutionLog, y_gsn: int, z_from: int, z_to: int
) -> list[CurveRow]:
    """Per-pair probabilities of a fixed event y against every z in a GSN window."""
    if not 1 <= y_gsn < z_from:
        raise ValueError(f"need 1 <= y_gsn < z_from, got y_gsn={y_gsn}, z_from={z_from}")
    if not z_from <= z_to <= len(log.events):
        raise ValueError(
            f"need z_from <= z_to <= log end, got z_from={z_from}, z_to={z_to}, end={len(log.events)}"
        )
    y = log.events[y_gsn - 1]
    rows = []
    for z in log.events[z_from - 1 : z_to]:
        report = classify_probabilities(y.bloom_ts, z.bloom_ts)
        rows.append(
            CurveRow(
                z_gsn=z.gsn,
                pr_p=report.pr_p,
                pr_fp_step=report.pr_fp_step,
                pr_fp_smooth=report.pr_fp_smooth,
                outcome=classify_pair(y, z),
            )
        )
    return rows
