"""UAR, confusion matrices, random baselines, and seed aggregation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MetricError


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # (C, C) ints, rows = true class, cols = predicted

    @property
    def C(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class AggregateResult:
    per_seed: tuple[float, ...]
    mean: float
    std: float

    def __str__(self) -> str:
        return f"{self.mean:.4f}±{self.std:.4f}"


def confusion_matrix(preds, labels, C: int) -> ConfusionMatrix:
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if preds.shape != labels.shape:
        raise MetricError("preds and labels must have equal length")
    if preds.size and (preds.min() < 0 or preds.max() >= C
                       or labels.min() < 0 or labels.max() >= C):
        raise MetricError(f"class index out of range for C={C}")
    counts = np.zeros((C, C), dtype=np.int64)
    np.add.at(counts, (labels, preds), 1)
    return ConfusionMatrix(counts=counts)


def uar(preds, labels, C: int, strict: bool = True) -> float:
    """Unweighted average recall: mean over classes of per-class recall."""
    cm = confusion_matrix(preds, labels, C)
    support = cm.counts.sum(axis=1)
    missing = np.flatnonzero(support == 0)
    if missing.size:
        if strict:
            raise MetricError(
                f"class {int(missing[0])} has no true instances (strict mode)")
        warnings.warn(f"classes with no support excluded from UAR: {missing.tolist()}")
    present = support > 0
    recalls = np.diag(cm.counts)[present] / support[present]
    return float(recalls.mean())


def random_baseline(labels, C: int, n_trials: int, seed: int) -> AggregateResult:
    """UAR of a uniform-random predictor, aggregated over trials."""
    if n_trials < 1:
        raise MetricError("n_trials must be >= 1")
    labels = np.asarray(labels, dtype=np.int64)
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(n_trials):
        preds = rng.integers(0, C, size=labels.shape[0])
        trials.append(uar(preds, labels, C))
    return aggregate(trials)


def aggregate(values) -> AggregateResult:
    """Mean and population std (divide by n) of per-seed results."""
    values = [float(v) for v in values]
    if not values:
        raise MetricError("aggregate of empty list")
    arr = np.asarray(values, dtype=np.float64)
    return AggregateResult(per_seed=tuple(values), mean=float(arr.mean()),
                           std=float(arr.std()))
