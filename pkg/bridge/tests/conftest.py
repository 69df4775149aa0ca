import json

import numpy as np
import pytest
from scipy.io import wavfile


def write_tone(path, seconds, rate=16000, freq=440.0):
    t = np.arange(int(seconds * rate)) / rate
    wav = (0.4 * np.sin(2 * np.pi * freq * t)).astype(np.float32)
    wavfile.write(path, rate, wav)
    return wav


@pytest.fixture
def manifest_dir(tmp_path):
    """Small manifest with real WAV files next to it."""
    durations = {"u1": 2.0, "u2": 4.0, "u3": 1.5}
    records = []
    for i, (uid, seconds) in enumerate(durations.items()):
        write_tone(tmp_path / f"{uid}.wav", seconds, freq=300.0 + 100 * i)
        records.append({"id": uid, "speaker_id": f"spk{i}", "label_code": "A",
                        "duration_s": seconds, "audio_path": f"{uid}.wav"})
    doc = {
        "name": "bridge-test",
        "labels": [
            {"code": "A", "name": "anger", "adjective": "angry",
             "adverb_phrase": "angrily", "noun": "anger"},
            {"code": "H", "name": "happiness", "adjective": "happy",
             "adverb_phrase": "happily", "noun": "happiness"},
        ],
        "records": records,
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return tmp_path
