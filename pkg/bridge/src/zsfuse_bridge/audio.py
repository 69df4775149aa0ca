"""Waveform loading, resampling, and repetition-based amplification."""

from __future__ import annotations

from math import gcd

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

from .zsem import ExportError


def load_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file as mono float32 in [-1, 1] plus its sample rate."""
    try:
        rate, data = wavfile.read(path)
    except (ValueError, OSError) as exc:
        raise ExportError(f"cannot decode audio file {path}: {exc}") from exc
    if data.ndim == 2:  # average channels
        data = data.mean(axis=1)
    if np.issubdtype(data.dtype, np.integer):
        scale = float(np.iinfo(data.dtype).max)
        data = data.astype(np.float32) / scale
    else:
        data = data.astype(np.float32)
    return data, rate


def resample(waveform: np.ndarray, orig_rate: int, target_rate: int) -> np.ndarray:
    if orig_rate == target_rate:
        return waveform
    g = gcd(orig_rate, target_rate)
    out = resample_poly(waveform.astype(np.float64),
                        target_rate // g, orig_rate // g)
    return out.astype(np.float32)


def tile_waveform(waveform: np.ndarray, a: int) -> np.ndarray:
    """Exact sample-level concatenation: output length = a * input length."""
    if a < 1:
        raise ExportError(f"audio-repeat factor must be >= 1, got {a}")
    return waveform if a == 1 else np.tile(waveform, a)


def cap_waveform(waveform: np.ndarray, rate: int,
                 max_seconds: float | None) -> np.ndarray:
    if max_seconds is None:
        return waveform
    if max_seconds <= 0:
        raise ExportError("cap must be positive seconds")
    limit = int(round(max_seconds * rate))
    return waveform[:limit]


def prepare_audio(waveform: np.ndarray, orig_rate: int, target_rate: int,
                  a: int = 1, max_seconds: float | None = None) -> np.ndarray:
    """Resample, tile a times, then truncate to the optional length cap."""
    out = resample(waveform, orig_rate, target_rate)
    out = tile_waveform(out, a)
    return cap_waveform(out, target_rate, max_seconds)
