"""Zero-shot scoring: P x E cosine similarity, prompt ensembling, prediction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedio import EmbeddingTable
from .errors import DimensionError, ZsfuseError
from .prompts import PromptMatrix


@dataclass(frozen=True)
class ScoreMatrix:
    utterance_id: str
    values: np.ndarray  # (P, E) float64 in [-1, 1]


@dataclass(frozen=True)
class ZeroShotVector:
    utterance_id: str
    s: np.ndarray  # (E,) float64


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionError(f"cosine: shapes differ, {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0:
        raise ZsfuseError("cosine: first argument has zero norm")
    if nv == 0.0:
        raise ZsfuseError("cosine: second argument has zero norm")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def score_matrix(audio_emb, prompt_matrix: PromptMatrix,
                 text_table: EmbeddingTable, utterance_id: str = "") -> ScoreMatrix:
    audio = np.asarray(audio_emb, dtype=np.float64)
    P = len(prompt_matrix.prompts)
    E = prompt_matrix.label_set.E
    values = np.empty((P, E), dtype=np.float64)
    for p, row in enumerate(prompt_matrix.prompts):
        for e, spec in enumerate(row):
            if spec.prompt_id not in text_table.entries:
                raise ZsfuseError(
                    f"no text embedding for prompt {spec.prompt_id!r}")
            values[p, e] = cosine(audio, text_table.get(spec.prompt_id))
    return ScoreMatrix(utterance_id=utterance_id, values=values)


def ensemble(matrix: ScoreMatrix) -> ZeroShotVector:
    return ZeroShotVector(utterance_id=matrix.utterance_id,
                          s=matrix.values.mean(axis=0))


def zero_shot_predict(vector: ZeroShotVector) -> int:
    """Index of the best ensemble score; ties break to the lowest class index."""
    if vector.s.shape[0] < 2:
        raise DimensionError("zero_shot_predict needs at least 2 classes")
    return int(np.argmax(vector.s))
