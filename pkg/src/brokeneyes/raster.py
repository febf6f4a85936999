"""PNG/JPEG decoding and PNG encoding via Pillow.

Output is always PNG: lossless encoding keeps the pipeline's determinism
byte-testable. Pillow writes no timestamp chunks, so identical pixels
give identical files.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import NotFoundError

#: Extensions scan and batch commands consider image files.
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def load_image(path: str | Path) -> np.ndarray:
    """Decode an image file to an (H, W, 3) uint8 array.

    Raises NotFoundError for a missing file and ValueError for an
    undecodable one.
    """
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as exc:
        raise ValueError(f"cannot decode {path}: {exc}") from None


def encode_png(img: np.ndarray) -> bytes:
    """Encode an (H, W, 3) uint8 array as PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def save_png(img: np.ndarray, path: str | Path) -> bytes:
    """Encode to PNG, write to `path`, and return the written bytes."""
    data = encode_png(img)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return data
