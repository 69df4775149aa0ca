"""Binary embedding table I/O (ZSEM format).

Layout, byte-exact, little-endian, no padding:
  magic "ZSEM" (4) | version u32 = 1 | dim u32 | count u64
  then per record: id_len u16 | id bytes (UTF-8) | dim x f32

Vectors are stored as f32; callers upcast to f64 for arithmetic.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadMagicError, EmbeddingFormatError, NonFiniteValueError,
                     TruncatedFileError, UnsupportedVersionError)

MAGIC = b"ZSEM"
VERSION = 1
HEADER = struct.Struct("<4sIIQ")


@dataclass
class EmbeddingTable:
    dim: int
    entries: dict[str, np.ndarray] = field(default_factory=dict)
    encoder_id: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise EmbeddingFormatError(f"dim must be positive, got {self.dim}")
        for uid, vec in self.entries.items():
            self.entries[uid] = self._check(uid, vec)

    def _check(self, uid: str, vec) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise EmbeddingFormatError(
                f"entry {uid!r}: expected {self.dim} components, got {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise NonFiniteValueError(f"entry {uid!r} contains NaN or infinity")
        return vec

    def add(self, uid: str, vec) -> None:
        if uid in self.entries:
            raise EmbeddingFormatError(f"duplicate id {uid!r}")
        self.entries[uid] = self._check(uid, vec)

    def get(self, uid: str) -> np.ndarray:
        return self.entries[uid]

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        if self.dim != other.dim or set(self.entries) != set(other.entries):
            return False
        return all(np.array_equal(v, other.entries[k]) for k, v in self.entries.items())


def write_embeddings(table: EmbeddingTable, path) -> None:
    for uid, vec in table.entries.items():
        if not np.all(np.isfinite(vec)):
            raise NonFiniteValueError(f"entry {uid!r} contains NaN or infinity")
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, table.dim, len(table.entries)))
        for uid, vec in table.entries.items():
            id_bytes = uid.encode("utf-8")
            if len(id_bytes) > 0xFFFF:
                raise EmbeddingFormatError(f"id too long: {uid[:40]!r}...")
            f.write(struct.pack("<H", len(id_bytes)))
            f.write(id_bytes)
            f.write(vec.astype("<f4", copy=False).tobytes())


def read_embeddings(path) -> EmbeddingTable:
    with open(path, "rb") as f:
        data = f.read()

    if len(data) < HEADER.size:
        raise TruncatedFileError(f"{path}: file shorter than the header")
    magic, version, dim, count = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    if dim < 1:
        raise EmbeddingFormatError(f"{path}: non-positive dim {dim}")

    entries: dict[str, np.ndarray] = {}
    off = HEADER.size
    vec_bytes = 4 * dim
    for _ in range(count):
        if off + 2 > len(data):
            raise TruncatedFileError(f"{path}: truncated record header")
        (id_len,) = struct.unpack_from("<H", data, off)
        off += 2
        if off + id_len + vec_bytes > len(data):
            raise TruncatedFileError(f"{path}: truncated record payload")
        uid = data[off:off + id_len].decode("utf-8")
        off += id_len
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=off).copy()
        off += vec_bytes
        if not np.all(np.isfinite(vec)):
            raise NonFiniteValueError(f"{path}: entry {uid!r} contains NaN or infinity")
        if uid in entries:
            raise EmbeddingFormatError(f"{path}: duplicate id {uid!r}")
        entries[uid] = vec
    if off != len(data):
        raise EmbeddingFormatError(f"{path}: {len(data) - off} trailing bytes")
    return EmbeddingTable(dim=dim, entries=entries)
