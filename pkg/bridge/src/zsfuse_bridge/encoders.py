"""Encoder wrappers: pretrained checkpoints plus a deterministic stand-in.

Checkpoint identifiers:
  "dummy:<dim>[:<rate>]"  hash-seeded deterministic encoder, no downloads;
                          used for format-conformance tests and dry runs
  short names (wavlm-base-plus, hubert-large, clap, ...) or any HuggingFace
  id, loaded via transformers (requires the "models" extra)
"""

from __future__ import annotations

import hashlib

import numpy as np

from .zsem import ExportError

FM_CHECKPOINTS = {
    "wavlm-base-plus": "microsoft/wavlm-base-plus",
    "wavlm-large": "microsoft/wavlm-large",
    "hubert-base": "facebook/hubert-base-ls960",
    "hubert-large": "facebook/hubert-large-ll60k",
}

ALM_CHECKPOINTS = {
    "clap": "laion/clap-htsat-unfused",
    "reclap": "microsoft/msclap",
    "clsp": "clsp",
}

DUMMY_FRAME = 320  # samples per synthetic frame


def _hash_vector(data: bytes, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(data).digest()[:8], "little")
    rng = np.random.default_rng(seed)
    return rng.standard_normal(dim).astype(np.float32)


class DummyEncoder:
    """Deterministic encoder: embeddings are pure functions of the input bytes."""

    def __init__(self, dim: int, sample_rate: int = 16000):
        if dim < 1:
            raise ExportError(f"dummy encoder dim must be positive, got {dim}")
        self.dim = dim
        self.sample_rate = sample_rate

    def frame_features(self, waveform: np.ndarray) -> np.ndarray:
        """One feature row per DUMMY_FRAME-sample window (FM stand-in)."""
        wav = np.asarray(waveform, dtype=np.float32)
        n_frames = max(1, len(wav) // DUMMY_FRAME)
        frames = np.empty((n_frames, self.dim), dtype=np.float32)
        for i in range(n_frames):
            chunk = wav[i * DUMMY_FRAME:(i + 1) * DUMMY_FRAME]
            frames[i] = _hash_vector(chunk.tobytes(), self.dim)
        return frames

    def encode_audio(self, waveform: np.ndarray) -> np.ndarray:
        wav = np.asarray(waveform, dtype=np.float32)
        return _hash_vector(wav.tobytes(), self.dim)

    def encode_text(self, text: str) -> np.ndarray:
        return _hash_vector(text.encode("utf-8"), self.dim)


class TransformersFmEncoder:
    """Frozen speech foundation model exposing frame-level features."""

    def __init__(self, checkpoint: str):
        try:
            import torch
            from transformers import AutoFeatureExtractor, AutoModel
        except ImportError as exc:
            raise ExportError(
                "transformers/torch not installed; use a dummy:<dim> checkpoint "
                "or install the 'models' extra") from exc
        self._torch = torch
        self.extractor = AutoFeatureExtractor.from_pretrained(checkpoint)
        self.model = AutoModel.from_pretrained(checkpoint).eval()
        self.sample_rate = self.extractor.sampling_rate
        self.dim = self.model.config.hidden_size

    def frame_features(self, waveform: np.ndarray) -> np.ndarray:
        inputs = self.extractor(waveform, sampling_rate=self.sample_rate,
                                return_tensors="pt")
        with self._torch.no_grad():
            out = self.model(**inputs).last_hidden_state
        return out.squeeze(0).numpy().astype(np.float32)


class TransformersClapEncoder:
    """Frozen CLAP-style dual encoder (audio and text sides)."""

    def __init__(self, checkpoint: str):
        try:
            import torch
            from transformers import ClapModel, ClapProcessor
        except ImportError as exc:
            raise ExportError(
                "transformers/torch not installed; use a dummy:<dim> checkpoint "
                "or install the 'models' extra") from exc
        self._torch = torch
        self.processor = ClapProcessor.from_pretrained(checkpoint)
        self.model = ClapModel.from_pretrained(checkpoint).eval()
        self.sample_rate = self.processor.feature_extractor.sampling_rate
        self.dim = self.model.config.projection_dim

    def encode_audio(self, waveform: np.ndarray) -> np.ndarray:
        inputs = self.processor(audios=waveform, sampling_rate=self.sample_rate,
                                return_tensors="pt")
        with self._torch.no_grad():
            out = self.model.get_audio_features(**inputs)
        return out.squeeze(0).numpy().astype(np.float32)

    def encode_text(self, text: str) -> np.ndarray:
        inputs = self.processor(text=text, return_tensors="pt", padding=True)
        with self._torch.no_grad():
            out = self.model.get_text_features(**inputs)
        return out.squeeze(0).numpy().astype(np.float32)


def _parse_dummy(ckpt: str) -> DummyEncoder:
    parts = ckpt.split(":")
    try:
        dim = int(parts[1])
        rate = int(parts[2]) if len(parts) > 2 else 16000
    except (IndexError, ValueError) as exc:
        raise ExportError(f"bad dummy checkpoint spec {ckpt!r}; "
                          "expected dummy:<dim>[:<rate>]") from exc
    return DummyEncoder(dim=dim, sample_rate=rate)


def load_fm_encoder(ckpt: str):
    if ckpt.startswith("dummy:"):
        return _parse_dummy(ckpt)
    return TransformersFmEncoder(FM_CHECKPOINTS.get(ckpt, ckpt))


def load_alm_encoder(ckpt: str):
    if ckpt.startswith("dummy:"):
        return _parse_dummy(ckpt)
    return TransformersClapEncoder(ALM_CHECKPOINTS.get(ckpt, ckpt))
