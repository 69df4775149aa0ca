"""Late fusion: z = [h ; LN(s)].

LayerNorm here has no learnable affine terms and uses population variance.
The foundation-model feature h passes through unmodified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

DEFAULT_EPSILON = 1e-5


@dataclass(frozen=True)
class FusedVector:
    utterance_id: str
    z: np.ndarray  # (D + E,) float64
    D: int
    E: int

    def __post_init__(self):
        if self.z.shape != (self.D + self.E,):
            raise DimensionError(
                f"fused vector {self.utterance_id!r}: length {self.z.shape[0]} "
                f"!= D + E = {self.D + self.E}")


def layer_norm(s, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 1 or s.shape[0] < 2:
        raise DimensionError("layer_norm needs a vector of length >= 2")
    mu = s.mean()
    var = s.var()  # population variance, divide by E
    return (s - mu) / np.sqrt(var + epsilon)


def fuse(h, s, epsilon: float = DEFAULT_EPSILON,
         utterance_id: str = "") -> FusedVector:
    h = np.asarray(h, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if h.ndim != 1 or s.ndim != 1:
        raise DimensionError("fuse expects 1-d vectors")
    z = np.concatenate([h, layer_norm(s, epsilon)])
    return FusedVector(utterance_id=utterance_id, z=z, D=h.shape[0], E=s.shape[0])


def fuse_none(h, utterance_id: str = "") -> FusedVector:
    """FM-only baseline: z is h itself, no zero-shot block."""
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 1 or h.shape[0] == 0:
        raise DimensionError("fuse_none expects a non-empty vector")
    return FusedVector(utterance_id=utterance_id, z=h.copy(), D=h.shape[0], E=0)
