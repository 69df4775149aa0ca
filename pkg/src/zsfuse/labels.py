"""Emotion label sets: class codes, word forms, and the canonical ordering.

The label order (alphabetical by code) fixes the layout of every score vector
and the argmax tie-break downstream, so it is enforced here once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ManifestError

# code -> (name, adjective, adverb_phrase, noun)
DEFAULT_LEXICON = {
    "A": ("anger", "angry", "angrily", "anger"),
    "C": ("contempt", "contemptuous", "contemptuously", "contempt"),
    "D": ("disgust", "disgusted", "in a disgusted manner", "disgust"),
    "F": ("fear", "fearful", "fearfully", "fear"),
    "H": ("happiness", "happy", "happily", "happiness"),
    "N": ("neutral", "neutral", "neutrally", "neutrality"),
    "S": ("sadness", "sad", "sadly", "sadness"),
    "U": ("surprise", "surprised", "with surprise", "surprise"),
}


@dataclass(frozen=True)
class EmotionLabel:
    code: str
    name: str
    adjective: str
    adverb_phrase: str
    noun: str

    def __post_init__(self):
        if len(self.code) != 1:
            raise ManifestError(f"label code must be one letter, got {self.code!r}")
        for attr in ("name", "adjective", "adverb_phrase", "noun"):
            if not getattr(self, attr):
                raise ManifestError(f"label {self.code}: empty {attr}")


@dataclass(frozen=True)
class LabelSet:
    labels: tuple[EmotionLabel, ...]

    def __post_init__(self):
        codes = [lb.code for lb in self.labels]
        if len(set(codes)) != len(codes):
            raise ManifestError(f"duplicate label codes: {codes}")
        if len(codes) < 2:
            raise ManifestError("a label set needs at least 2 classes")
        if codes != sorted(codes):
            raise ManifestError(f"labels must be sorted by code, got {codes}")

    @property
    def E(self) -> int:
        return len(self.labels)

    @property
    def codes(self) -> list[str]:
        return [lb.code for lb in self.labels]

    def index_of(self, code: str) -> int:
        for i, lb in enumerate(self.labels):
            if lb.code == code:
                return i
        raise ManifestError(f"unknown label code {code!r}")

    def __contains__(self, code: str) -> bool:
        return any(lb.code == code for lb in self.labels)

    @classmethod
    def from_codes(cls, codes, lexicon=None) -> "LabelSet":
        """Build a label set from one-letter codes using the default lexicon.

        `lexicon` may override word forms per code:
        {code: {"adjective": ..., "adverb_phrase": ..., "noun": ...}}.
        """
        lexicon = lexicon or {}
        labels = []
        for code in sorted(set(codes)):
            if code not in DEFAULT_LEXICON:
                raise ManifestError(f"unknown label code {code!r}")
            name, adj, adv, noun = DEFAULT_LEXICON[code]
            override = lexicon.get(code, {})
            labels.append(EmotionLabel(
                code=code,
                name=override.get("name", name),
                adjective=override.get("adjective", adj),
                adverb_phrase=override.get("adverb_phrase", adv),
                noun=override.get("noun", noun),
            ))
        return cls(labels=tuple(labels))


def load_lexicon(path) -> dict:
    """Read a lexicon-override file: JSON mapping code -> word forms."""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ManifestError(f"lexicon file {path}: expected a JSON object")
    return data
