"""Prompt rendering: the 3 x E template grid with text-side amplification.

Template kinds, in fixed order:
  emotion_speech   -> "{adjective} speech"
  speaker_centric  -> "a person speaking {adverb_phrase}"
  voice_attribute  -> "{noun} in the voice"

Amplification for t >= 2 prefixes "{t} instances of " to the base form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PromptError
from .labels import EmotionLabel, LabelSet

TEMPLATE_KINDS = ("emotion_speech", "speaker_centric", "voice_attribute")
P = len(TEMPLATE_KINDS)


@dataclass(frozen=True)
class PromptSpec:
    prompt_id: str
    class_code: str
    kind: str
    t: int
    text: str


@dataclass(frozen=True)
class PromptMatrix:
    label_set: LabelSet
    t: int
    prompts: tuple[tuple[PromptSpec, ...], ...]  # P rows x E columns

    def __post_init__(self):
        if len(self.prompts) != P:
            raise PromptError(f"expected {P} template rows, got {len(self.prompts)}")
        for row in self.prompts:
            if len(row) != self.label_set.E:
                raise PromptError("prompt row length does not match label set")

    def flat(self) -> list[PromptSpec]:
        return [spec for row in self.prompts for spec in row]


def prompt_id(kind: str, class_code: str, t: int) -> str:
    return f"{kind}:{class_code}:t{t}"


def render_prompt(label: EmotionLabel, kind: str, t: int) -> PromptSpec:
    if kind not in TEMPLATE_KINDS:
        raise PromptError(f"unknown template kind {kind!r}")
    if t < 1:
        raise PromptError(f"text-repeat factor must be >= 1, got {t}")

    if kind == "emotion_speech":
        base = f"{label.adjective} speech"
    elif kind == "speaker_centric":
        base = f"a person speaking {label.adverb_phrase}"
    else:
        base = f"{label.noun} in the voice"

    text = base if t == 1 else f"{t} instances of {base}"
    return PromptSpec(prompt_id=prompt_id(kind, label.code, t),
                      class_code=label.code, kind=kind, t=t, text=text)


def build_prompt_matrix(label_set: LabelSet, t: int) -> PromptMatrix:
    rows = tuple(
        tuple(render_prompt(label, kind, t) for label in label_set.labels)
        for kind in TEMPLATE_KINDS
    )
    return PromptMatrix(label_set=label_set, t=t, prompts=rows)
