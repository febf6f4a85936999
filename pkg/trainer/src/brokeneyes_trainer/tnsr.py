"""Writer/reader for the TNSR tensor exchange format.

Little-endian: magic "TNSR", u32 version 1, u32 ndim 3, three u32 dims
(C, H, W), u32 dtype code 1 (float32), then the row-major float32
payload with channel outermost. Independent implementation of the wire
format; the analysis toolkit on the other side validates it strictly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"TNSR"
_HEADER = struct.Struct("<4sIIIIII")


def write_tensor(values: np.ndarray, path: str | Path) -> None:
    arr = np.ascontiguousarray(values, dtype=np.float32)
    if arr.ndim != 3:
        raise ValueError(f"tensor must be 3-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("tensor contains non-finite values")
    c, h, w = arr.shape
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, 1, 3, c, h, w, 1))
        fh.write(arr.astype("<f4", copy=False).tobytes())


def read_tensor(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ValueError(f"{path}: not a TNSR file")
    _, version, ndim, c, h, w, dtype_code = _HEADER.unpack_from(data)
    if (version, ndim, dtype_code) != (1, 3, 1):
        raise ValueError(f"{path}: unsupported TNSR header")
    payload = data[_HEADER.size:]
    if len(payload) != c * h * w * 4:
        raise ValueError(f"{path}: payload size mismatch")
    return np.frombuffer(payload, dtype="<f4").reshape(c, h, w).copy()
