"""Synthetic world generator: desk-scale manifests and embedding tables.

Builds a dataset whose foundation-model features form Gaussian class clusters
and whose dual-encoder embeddings carry a tunable amount of class signal, so
the whole pipeline can be exercised without any real encoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedio import EmbeddingTable
from .errors import ZsfuseError
from .labels import DEFAULT_LEXICON, LabelSet
from .manifest import DatasetManifest, UtteranceRecord
from .prompts import build_prompt_matrix

AUDIO_REPEATS = (1, 2, 3, 4)
TEXT_REPEATS = (1, 2, 3, 4)


@dataclass(frozen=True)
class SyntheticWorldConfig:
    n_classes: int = 4
    dim_fm: int = 16
    dim_alm: int = 16
    cluster_separation: float = 2.0
    zero_shot_informativeness: float = 0.9
    n_per_class: int = 30
    seed: int = 0
    n_speakers: int = 6
    n_sessions: int = 5
    prompt_jitter: float = 0.05
    repeat_jitter: float = 0.02

    def validate(self) -> None:
        if not 2 <= self.n_classes <= len(DEFAULT_LEXICON):
            raise ZsfuseError(f"n_classes must be in [2, 8], got {self.n_classes}")
        if self.dim_alm < self.n_classes:
            raise ZsfuseError("dim_alm must be >= n_classes for orthogonal class axes")
        if self.dim_fm < self.n_classes:
            raise ZsfuseError("dim_fm must be >= n_classes for orthogonal class means")
        if not 0.0 <= self.zero_shot_informativeness <= 1.0:
            raise ZsfuseError("zero_shot_informativeness must be in [0, 1]")
        if self.cluster_separation < 0:
            raise ZsfuseError("cluster_separation must be non-negative")
        if self.n_per_class < 1:
            raise ZsfuseError("n_per_class must be >= 1")


def _orthonormal_directions(rng: np.random.Generator, dim: int, n: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((dim, n)))
    return q.T  # rows are orthonormal


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def synth_world(config: SyntheticWorldConfig):
    """Returns (manifest, fm_table, alm_audio_tables, alm_text_table).

    alm_audio_tables maps audio-repeat a -> table keyed "{utterance_id}@a{a}";
    the a=1 table doubles as the unamplified export. Text embeddings cover
    every (template, class, t) prompt for t in 1..4, keyed by prompt_id.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)

    # 4-class worlds mirror the RAVDESS/IEMOCAP label set {A,H,N,S}
    priority = ["A", "H", "N", "S", "U", "C", "D", "F"]
    codes = sorted(priority[:config.n_classes])
    label_set = LabelSet.from_codes(codes)
    E = label_set.E

    class_axes_alm = _orthonormal_directions(rng, config.dim_alm, E)
    class_means_fm = config.cluster_separation * _orthonormal_directions(
        rng, config.dim_fm, E)

    # text embeddings: class axis plus a small per-prompt offset, unit norm
    text_table = EmbeddingTable(dim=config.dim_alm, encoder_id="synth-alm-text")
    for t in TEXT_REPEATS:
        for spec in build_prompt_matrix(label_set, t).flat():
            j = label_set.index_of(spec.class_code)
            vec = class_axes_alm[j] + config.prompt_jitter * rng.standard_normal(
                config.dim_alm)
            text_table.add(spec.prompt_id, _unit(vec))

    records = []
    fm_table = EmbeddingTable(dim=config.dim_fm, encoder_id="synth-fm")
    base_audio: dict[str, np.ndarray] = {}
    w = config.zero_shot_informativeness
    for j, code in enumerate(codes):
        for k in range(config.n_per_class):
            uid = f"u{code}{k:04d}"
            idx = j * config.n_per_class + k
            records.append(UtteranceRecord(
                id=uid,
                speaker_id=f"spk{idx % config.n_speakers:02d}",
                session_id=f"s{idx % config.n_sessions + 1}",
                label_code=code,
                duration_s=3.0,
            ))
            fm_table.add(uid, class_means_fm[j] + rng.standard_normal(config.dim_fm))
            noise = _unit(rng.standard_normal(config.dim_alm))
            base_audio[uid] = _unit(w * class_axes_alm[j] + (1.0 - w) * noise)

    alm_audio_tables: dict[int, EmbeddingTable] = {}
    for a in AUDIO_REPEATS:
        table = EmbeddingTable(dim=config.dim_alm, encoder_id=f"synth-alm-audio-a{a}")
        for uid, vec in base_audio.items():
            if a == 1:
                out = vec
            else:
                out = _unit(vec + config.repeat_jitter * rng.standard_normal(
                    config.dim_alm))
            table.add(f"{uid}@a{a}", out)
        alm_audio_tables[a] = table

    manifest = DatasetManifest(name=f"synth-{config.seed}", label_set=label_set,
                               records=tuple(records))
    return manifest, fm_table, alm_audio_tables, text_table
