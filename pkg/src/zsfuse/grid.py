"""Audio-repeat x text-repeat grid execution and summary reporting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .embedio import EmbeddingTable
from .errors import GridError
from .fusion import DEFAULT_EPSILON, FusedVector, fuse, fuse_none
from .labels import LabelSet
from .manifest import DatasetManifest, SplitAssignment
from .metrics import AggregateResult, uar
from .prompts import build_prompt_matrix
from .training import TrainConfig, TrainResult, train
from .zeroshot import ZeroShotVector, ensemble, score_matrix, zero_shot_predict

GRID_A = (1, 2, 3, 4)
GRID_T = (1, 2, 3, 4)


@dataclass(frozen=True)
class AmplificationConfig:
    a: int
    t: int

    def __post_init__(self):
        if not (1 <= self.a <= 4 and 1 <= self.t <= 4):
            raise GridError(f"a and t must be in 1..4, got a={self.a}, t={self.t}")

    @property
    def key(self) -> str:
        return f"a{self.a}×t{self.t}"


@dataclass(frozen=True)
class GridSummary:
    best_cell: tuple[int, int]
    best: AggregateResult
    default: AggregateResult
    worst_cell: tuple[int, int]
    worst: AggregateResult
    range_delta: float
    no_alm_baseline: Optional[AggregateResult]


def audio_embedding(table: EmbeddingTable, utterance_id: str, a: int) -> np.ndarray:
    """Look up an audio embedding; the a=1 table may carry bare ids."""
    key = f"{utterance_id}@a{a}"
    if key in table.entries:
        return table.get(key)
    if a == 1 and utterance_id in table.entries:
        return table.get(utterance_id)
    raise GridError(f"no audio embedding for {key!r}")


def zero_shot_scores(manifest: DatasetManifest, audio_table: EmbeddingTable,
                     text_table: EmbeddingTable, label_set: LabelSet,
                     a: int, t: int) -> dict[str, np.ndarray]:
    """Per-utterance ensemble score vectors s for one (a, t) cell."""
    prompt_matrix = build_prompt_matrix(label_set, t)
    out = {}
    for rec in manifest.records:
        audio = audio_embedding(audio_table, rec.id, a)
        sm = score_matrix(audio, prompt_matrix, text_table, utterance_id=rec.id)
        out[rec.id] = ensemble(sm).s
    return out


def _validate_inputs(manifest, alm_audio_tables, text_table, label_set,
                     a_values, t_values):
    missing = []
    for a in a_values:
        table = alm_audio_tables.get(a)
        if table is None:
            missing.append(f"audio table for a={a}")
            continue
        for rec in manifest.records:
            if (f"{rec.id}@a{a}" not in table.entries
                    and not (a == 1 and rec.id in table.entries)):
                missing.append(f"audio embedding {rec.id}@a{a}")
                break
    for t in t_values:
        for spec in build_prompt_matrix(label_set, t).flat():
            if spec.prompt_id not in text_table.entries:
                missing.append(f"text embedding {spec.prompt_id}")
    if missing:
        raise GridError("missing inputs: " + "; ".join(missing[:10]))


def run_zero_shot_grid(manifest: DatasetManifest, alm_audio_tables: dict,
                       text_table: EmbeddingTable, label_set: LabelSet,
                       a_values=GRID_A, t_values=GRID_T) -> dict[tuple[int, int], float]:
    """Zero-shot UAR per (a, t) cell, no training involved."""
    _validate_inputs(manifest, alm_audio_tables, text_table, label_set,
                     a_values, t_values)
    labels = manifest.labels_by_id()
    cells = {}
    for a in a_values:
        for t in t_values:
            scores = zero_shot_scores(manifest, alm_audio_tables[a], text_table,
                                      label_set, a, t)
            preds = []
            truth = []
            for rec in manifest.records:
                preds.append(zero_shot_predict(
                    ZeroShotVector(utterance_id=rec.id, s=scores[rec.id])))
                truth.append(labels[rec.id])
            cells[(a, t)] = uar(preds, truth, label_set.E, strict=False)
    return cells


def run_grid(manifest: DatasetManifest, split: SplitAssignment,
             fm_table: EmbeddingTable, alm_audio_tables: dict,
             text_table: EmbeddingTable, label_set: LabelSet,
             train_config: TrainConfig, a_values=GRID_A, t_values=GRID_T,
             epsilon: float = DEFAULT_EPSILON):
    """Train-and-evaluate every (a, t) cell plus the no-ALM baseline.

    Returns (cells: {(a, t) -> AggregateResult}, summary: GridSummary,
    results: {(a, t) -> TrainResult}).
    """
    _validate_inputs(manifest, alm_audio_tables, text_table, label_set,
                     a_values, t_values)
    labels = manifest.labels_by_id()

    cells: dict[tuple[int, int], AggregateResult] = {}
    results: dict[tuple[int, int], TrainResult] = {}
    for a in a_values:
        for t in t_values:
            scores = zero_shot_scores(manifest, alm_audio_tables[a], text_table,
                                      label_set, a, t)
            features = {
                rec.id: fuse(fm_table.get(rec.id), scores[rec.id],
                             epsilon=epsilon, utterance_id=rec.id)
                for rec in manifest.records
            }
            result = train(features, labels, split, train_config, label_set.E)
            cells[(a, t)] = result.test_uar
            results[(a, t)] = result

    baseline_features = {
        rec.id: fuse_none(fm_table.get(rec.id), utterance_id=rec.id)
        for rec in manifest.records
    }
    baseline = train(baseline_features, labels, split, train_config,
                     label_set.E).test_uar

    summary = summarize_cells(cells, baseline)
    return cells, summary, results


def summarize_cells(cells: dict[tuple[int, int], AggregateResult],
                    baseline: Optional[AggregateResult] = None) -> GridSummary:
    """Best/default/worst over the cell map; ties break to the lower (a, t)."""
    if not cells:
        raise GridError("empty cell map")
    ordered = sorted(cells)  # lexicographic (a, t); first hit wins ties
    best_cell = worst_cell = ordered[0]
    for cell in ordered[1:]:
        if cells[cell].mean > cells[best_cell].mean:
            best_cell = cell
        if cells[cell].mean < cells[worst_cell].mean:
            worst_cell = cell
    default_cell = (1, 1) if (1, 1) in cells else ordered[0]
    return GridSummary(
        best_cell=best_cell, best=cells[best_cell],
        default=cells[default_cell],
        worst_cell=worst_cell, worst=cells[worst_cell],
        range_delta=cells[best_cell].mean - cells[worst_cell].mean,
        no_alm_baseline=baseline,
    )


def cells_to_csv(cells: dict[tuple[int, int], AggregateResult]) -> str:
    lines = ["a,t,mean,std"]
    for (a, t) in sorted(cells):
        r = cells[(a, t)]
        lines.append(f"{a},{t},{r.mean:.6f},{r.std:.6f}")
    return "\n".join(lines) + "\n"


def zero_shot_cells_to_csv(cells: dict[tuple[int, int], float],
                           a_values=GRID_A, t_values=GRID_T) -> str:
    """4x4 heatmap CSV: one row per a, one column per t."""
    header = "a\\t," + ",".join(f"t{t}" for t in t_values)
    lines = [header]
    for a in a_values:
        lines.append(f"a{a}," + ",".join(f"{cells[(a, t)]:.6f}" for t in t_values))
    return "\n".join(lines) + "\n"
