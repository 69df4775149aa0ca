import pytest

from zsfuse.labels import LabelSet
from zsfuse.manifest import DatasetManifest, UtteranceRecord


@pytest.fixture
def four_class_set():
    return LabelSet.from_codes(["A", "H", "N", "S"])


@pytest.fixture
def eight_class_set():
    return LabelSet.from_codes(list("ACDFHNSU"))


def make_manifest(n_speakers=24, per_speaker=28, n_sessions=None,
                  codes=("A", "H", "N", "S"), name="synthetic"):
    """Round-robin manifest: `per_speaker` utterances for each speaker."""
    label_set = LabelSet.from_codes(codes)
    records = []
    i = 0
    for spk in range(n_speakers):
        for _ in range(per_speaker):
            session = f"s{i % n_sessions + 1}" if n_sessions else None
            records.append(UtteranceRecord(
                id=f"utt{i:05d}", speaker_id=f"spk{spk:02d}",
                session_id=session, label_code=codes[i % len(codes)],
                duration_s=3.0))
            i += 1
    return DatasetManifest(name=name, label_set=label_set, records=tuple(records))
