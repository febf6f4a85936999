"""TNSR: the little-endian float32 tensor exchange file format.

Layout, all integers little-endian u32:

    bytes 0-3   magic "TNSR"
    bytes 4-7   version (1)
    bytes 8-11  ndim (3)
    bytes 12-23 dims: channels, height, width
    bytes 24-27 dtype code (1 = float32)
    bytes 28-   channels*height*width float32 values, row-major,
                channel outermost

Feature tensors cross the process boundary between the training side and
the analysis side in this format; the round trip is bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import (
    NotFoundError,
    TensorDataError,
    TensorFormatError,
    TensorTruncationError,
)

MAGIC = b"TNSR"
VERSION = 1
DTYPE_FLOAT32 = 1

_HEADER = struct.Struct("<4sIIIIII")


def write_tensor(values: np.ndarray, path: str | Path) -> None:
    """Write a (C, H, W) float32 tensor to `path`."""
    arr = np.ascontiguousarray(values, dtype=np.float32)
    if arr.ndim != 3:
        raise TensorFormatError(f"tensor must be 3-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise TensorDataError("tensor contains non-finite values")
    c, h, w = arr.shape
    header = _HEADER.pack(MAGIC, VERSION, 3, c, h, w, DTYPE_FLOAT32)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.astype("<f4", copy=False).tobytes())


def read_tensor(path: str | Path) -> np.ndarray:
    """Read a TNSR file back as a (C, H, W) float32 array."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"no such tensor file: {path}")
    data = path.read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise TensorFormatError(f"{path}: bad magic, not a TNSR file")
    if len(data) < _HEADER.size:
        raise TensorTruncationError(f"{path}: truncated header")
    _, version, ndim, c, h, w, dtype_code = _HEADER.unpack_from(data)
    if version != VERSION:
        raise TensorFormatError(f"{path}: unsupported version {version}")
    if ndim != 3:
        raise TensorFormatError(f"{path}: expected 3 dimensions, got {ndim}")
    if dtype_code != DTYPE_FLOAT32:
        raise TensorFormatError(f"{path}: unsupported dtype code {dtype_code}")
    expected = c * h * w * 4
    payload = data[_HEADER.size:]
    if len(payload) != expected:
        raise TensorTruncationError(
            f"{path}: payload is {len(payload)} bytes, header implies {expected}"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(c, h, w)
    if not np.isfinite(values).all():
        raise TensorDataError(f"{path}: tensor contains non-finite values")
    return np.ascontiguousarray(values)
