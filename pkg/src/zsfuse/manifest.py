"""Dataset manifests and the three split protocols.

Splits are pure functions of (manifest, arguments, seed): speaker-disjoint
shuffling, leave-one-session-out folds, and externally provided partitions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ManifestError, SplitError
from .labels import EmotionLabel, LabelSet

PARTITIONS = ("train", "val", "test")


@dataclass(frozen=True)
class UtteranceRecord:
    id: str
    speaker_id: str
    label_code: str
    duration_s: float
    session_id: Optional[str] = None
    audio_path: Optional[str] = None

    def __post_init__(self):
        if self.duration_s < 0:
            raise ManifestError(f"record {self.id}: negative duration")


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    label_set: LabelSet
    records: tuple[UtteranceRecord, ...]

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise ManifestError(f"duplicate utterance id {rec.id!r}")
            seen.add(rec.id)
            if rec.label_code not in self.label_set:
                raise ManifestError(
                    f"record {rec.id}: label {rec.label_code!r} not in label set "
                    f"{self.label_set.codes}")

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def labels_by_id(self) -> dict[str, int]:
        return {r.id: self.label_set.index_of(r.label_code) for r in self.records}


@dataclass(frozen=True)
class SplitAssignment:
    mapping: dict[str, str]
    fold_index: Optional[int] = None

    def __post_init__(self):
        for uid, part in self.mapping.items():
            if part not in PARTITIONS:
                raise SplitError(f"id {uid}: unknown partition {part!r}")

    def ids_in(self, partition: str) -> list[str]:
        return sorted(uid for uid, p in self.mapping.items() if p == partition)


def speaker_disjoint_split(manifest: DatasetManifest, n_train_speakers: int,
                           n_val_speakers: int, n_test_speakers: int,
                           seed: int) -> SplitAssignment:
    """Assign whole speakers to partitions after a seeded shuffle."""
    speakers = sorted({r.speaker_id for r in manifest.records})
    expected = n_train_speakers + n_val_speakers + n_test_speakers
    if expected != len(speakers):
        raise SplitError(
            f"speaker counts {n_train_speakers}+{n_val_speakers}+{n_test_speakers}"
            f"={expected} but manifest has {len(speakers)} distinct speakers")
    if min(n_train_speakers, n_val_speakers, n_test_speakers) < 1:
        raise SplitError("every partition needs at least one speaker")

    rng = np.random.default_rng(seed)
    order = [speakers[i] for i in rng.permutation(len(speakers))]
    part_of = {}
    for spk in order[:n_train_speakers]:
        part_of[spk] = "train"
    for spk in order[n_train_speakers:n_train_speakers + n_val_speakers]:
        part_of[spk] = "val"
    for spk in order[n_train_speakers + n_val_speakers:]:
        part_of[spk] = "test"
    mapping = {r.id: part_of[r.speaker_id] for r in manifest.records}
    return SplitAssignment(mapping=mapping)


def loso_folds(manifest: DatasetManifest) -> list[SplitAssignment]:
    """One fold per session: test = session i, val = next session (wrapping),
    train = the rest."""
    for rec in manifest.records:
        if rec.session_id is None:
            raise SplitError(f"record {rec.id} has no session_id")
    sessions = sorted({r.session_id for r in manifest.records})
    if len(sessions) < 3:
        raise SplitError(f"need >= 3 sessions for LOSO, got {len(sessions)}")

    folds = []
    for i, test_sess in enumerate(sessions):
        val_sess = sessions[(i + 1) % len(sessions)]
        mapping = {}
        for rec in manifest.records:
            if rec.session_id == test_sess:
                mapping[rec.id] = "test"
            elif rec.session_id == val_sess:
                mapping[rec.id] = "val"
            else:
                mapping[rec.id] = "train"
        folds.append(SplitAssignment(mapping=mapping, fold_index=i))
    return folds


PROVIDED_TAGS = {"train": "train", "dev": "val", "test1": "test", "test2": "test"}


def load_provided_partitions(manifest: DatasetManifest, partition_file) -> SplitAssignment:
    """Map an external id<TAB>tag file onto train/val/test.

    test1 and test2 merge into test; dev becomes val.
    """
    file_tags: dict[str, str] = {}
    with open(partition_file, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ManifestError(f"{partition_file}:{lineno}: expected id<TAB>tag")
            uid, tag = parts
            if tag not in PROVIDED_TAGS:
                raise ManifestError(
                    f"{partition_file}:{lineno}: unknown partition tag {tag!r}")
            if uid in file_tags:
                raise ManifestError(f"{partition_file}:{lineno}: duplicate id {uid!r}")
            file_tags[uid] = tag

    manifest_ids = set(manifest.ids)
    missing = sorted(manifest_ids - set(file_tags))
    extra = sorted(set(file_tags) - manifest_ids)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"ids missing from partition file: {missing[:10]}")
        if extra:
            parts.append(f"ids not in manifest: {extra[:10]}")
        raise SplitError("; ".join(parts))

    mapping = {uid: PROVIDED_TAGS[tag] for uid, tag in file_tags.items()}
    return SplitAssignment(mapping=mapping)


# --- manifest / split file I/O (JSON) ---

def manifest_to_dict(manifest: DatasetManifest) -> dict:
    return {
        "name": manifest.name,
        "labels": [
            {"code": lb.code, "name": lb.name, "adjective": lb.adjective,
             "adverb_phrase": lb.adverb_phrase, "noun": lb.noun}
            for lb in manifest.label_set.labels
        ],
        "records": [
            {k: v for k, v in {
                "id": r.id, "speaker_id": r.speaker_id, "session_id": r.session_id,
                "label_code": r.label_code, "duration_s": r.duration_s,
                "audio_path": r.audio_path,
            }.items() if v is not None}
            for r in manifest.records
        ],
    }


def manifest_from_dict(data: dict) -> DatasetManifest:
    try:
        labels = tuple(EmotionLabel(**lb) for lb in data["labels"])
        records = tuple(UtteranceRecord(**rec) for rec in data["records"])
        return DatasetManifest(name=data["name"], label_set=LabelSet(labels),
                               records=records)
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"malformed manifest document: {exc}") from exc


def save_manifest(manifest: DatasetManifest, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest_to_dict(manifest), f, indent=2, sort_keys=True)
        f.write("\n")


def load_manifest(path) -> DatasetManifest:
    with open(path, "r", encoding="utf-8") as f:
        return manifest_from_dict(json.load(f))


def save_split(split: SplitAssignment, path) -> None:
    doc = {"fold_index": split.fold_index, "mapping": split.mapping}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def load_split(path) -> SplitAssignment:
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    return SplitAssignment(mapping=doc["mapping"], fold_index=doc.get("fold_index"))
