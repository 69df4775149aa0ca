"""Export jobs: run frozen encoders over a manifest or prompt TSV and emit
embedding files the engine can consume directly."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .audio import load_wav, prepare_audio
from .encoders import load_alm_encoder, load_fm_encoder
from .zsem import ExportError, write_zsem


@dataclass(frozen=True)
class ExportJob:
    kind: str  # fm | alm-audio | alm-text
    checkpoint: str
    out_path: str
    manifest_path: Optional[str] = None
    prompts_path: Optional[str] = None
    a: int = 1
    cap_seconds: Optional[float] = None
    pool: str = "mean"

    def __post_init__(self):
        if self.kind not in ("fm", "alm-audio", "alm-text"):
            raise ExportError(f"unknown export kind {self.kind!r}")
        if self.kind == "alm-text":
            if self.prompts_path is None:
                raise ExportError("alm-text jobs need a prompt TSV")
        elif self.manifest_path is None:
            raise ExportError(f"{self.kind} jobs need a manifest")
        if self.a < 1:
            raise ExportError(f"audio-repeat factor must be >= 1, got {self.a}")
        if self.pool not in ("mean", "max"):
            raise ExportError(f"unknown pooling {self.pool!r}")


def read_manifest_records(path) -> list[dict]:
    """Utterance records from the engine's manifest JSON document."""
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    try:
        records = doc["records"]
    except (KeyError, TypeError) as exc:
        raise ExportError(f"malformed manifest {path}: no records array") from exc
    for rec in records:
        if "id" not in rec:
            raise ExportError(f"malformed manifest {path}: record without id")
    return records


def read_prompt_tsv(path) -> list[tuple[str, str]]:
    """(prompt_id, text) pairs from a `zsfuse prompts` TSV."""
    pairs = []
    seen = set()
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ExportError(f"{path}:{lineno}: expected prompt_id<TAB>text")
            prompt_id, text = parts
            if prompt_id in seen:
                raise ExportError(f"{path}:{lineno}: duplicate prompt_id "
                                  f"{prompt_id!r}")
            seen.add(prompt_id)
            pairs.append((prompt_id, text))
    if not pairs:
        raise ExportError(f"{path}: empty prompt TSV")
    return pairs


def _utterance_audio(rec: dict, manifest_path: str):
    audio_path = rec.get("audio_path")
    if not audio_path:
        raise ExportError(f"record {rec['id']} has no audio_path")
    if not os.path.isabs(audio_path):
        audio_path = os.path.join(os.path.dirname(os.path.abspath(manifest_path)),
                                  audio_path)
    return load_wav(audio_path)


def export_fm_features(job: ExportJob) -> None:
    """Per utterance: resample, run the FM, pool frame features over time."""
    encoder = load_fm_encoder(job.checkpoint)
    records = read_manifest_records(job.manifest_path)
    entries: dict[str, np.ndarray] = {}
    for rec in records:
        wav, rate = _utterance_audio(rec, job.manifest_path)
        wav = prepare_audio(wav, rate, encoder.sample_rate)
        frames = encoder.frame_features(wav)
        pooled = frames.mean(axis=0) if job.pool == "mean" else frames.max(axis=0)
        entries[rec["id"]] = pooled.astype(np.float32)
    write_zsem(entries, encoder.dim, job.out_path)


def export_alm_audio(job: ExportJob) -> None:
    """Tile the waveform a times end-to-end, cap, then encode.

    Keys are "{utterance_id}@a{a}".
    """
    encoder = load_alm_encoder(job.checkpoint)
    records = read_manifest_records(job.manifest_path)
    entries: dict[str, np.ndarray] = {}
    for rec in records:
        wav, rate = _utterance_audio(rec, job.manifest_path)
        wav = prepare_audio(wav, rate, encoder.sample_rate, a=job.a,
                            max_seconds=job.cap_seconds)
        entries[f"{rec['id']}@a{job.a}"] = encoder.encode_audio(wav)
    write_zsem(entries, encoder.dim, job.out_path)


def export_alm_text(job: ExportJob) -> None:
    """One vector per prompt, keyed by prompt_id."""
    encoder = load_alm_encoder(job.checkpoint)
    pairs = read_prompt_tsv(job.prompts_path)
    entries = {prompt_id: encoder.encode_text(text) for prompt_id, text in pairs}
    write_zsem(entries, encoder.dim, job.out_path)


def run_job(job: ExportJob) -> None:
    if job.kind == "fm":
        export_fm_features(job)
    elif job.kind == "alm-audio":
        export_alm_audio(job)
    else:
        export_alm_text(job)
