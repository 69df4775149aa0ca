"""Writer for the engine's binary embedding format (ZSEM).

Layout, little-endian, no padding:
  magic "ZSEM" (4) | version u32 = 1 | dim u32 | count u64
  per record: id_len u16 | id UTF-8 bytes | dim x f32
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

MAGIC = b"ZSEM"
VERSION = 1
HEADER = struct.Struct("<4sIIQ")


class ExportError(ValueError):
    pass


def write_zsem(entries: dict[str, np.ndarray], dim: int, path) -> None:
    """Atomically write an embedding table (temp file + rename)."""
    for uid, vec in entries.items():
        vec = np.asarray(vec)
        if vec.shape != (dim,):
            raise ExportError(f"entry {uid!r}: expected {dim} components")
        if not np.all(np.isfinite(vec)):
            raise ExportError(f"entry {uid!r} contains NaN or infinity")

    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".zsem.tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(HEADER.pack(MAGIC, VERSION, dim, len(entries)))
            for uid, vec in entries.items():
                id_bytes = uid.encode("utf-8")
                if len(id_bytes) > 0xFFFF:
                    raise ExportError(f"id too long: {uid[:40]!r}...")
                f.write(struct.pack("<H", len(id_bytes)))
                f.write(id_bytes)
                f.write(np.asarray(vec, dtype="<f4").tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
