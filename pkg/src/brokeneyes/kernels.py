"""Kernel backend selection and shared numeric helpers.

At import time the compiled extension (brokeneyes._kernels) is preferred;
if it is missing, or BROKENEYES_PURE is set to a non-empty value other
than "0", the pure NumPy backend (brokeneyes._kernels_py) is used. Both
produce bit-identical results; the benchmark under benchmarks/ measures
the speed difference.

Transcendental values are evaluated here, once, with math.exp/math.cos/
math.sin and handed to the backends as plain doubles: libm and NumPy's
vectorized routines may disagree by an ulp, which would break the
bit-identity guarantee if each backend computed them itself.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _kernels_py
from .errors import InvalidParameterError

if os.environ.get("BROKENEYES_PURE", "0") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

store_u8 = _kernels_py._store_u8


def _as_rgb(img: np.ndarray) -> np.ndarray:
    if not isinstance(img, np.ndarray) or img.ndim != 3 or img.shape[2] != 3:
        raise InvalidParameterError("image must be an (H, W, 3) array")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidParameterError("image must have at least one pixel")
    if img.dtype != np.uint8:
        raise InvalidParameterError(f"image dtype must be uint8, got {img.dtype}")
    return np.ascontiguousarray(img)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps exp(-i^2 / (2 sigma^2)) for i in [-r, r].

    Radius r = ceil(3 sigma). Weights are built with math.exp so both
    backends convolve with exactly the same doubles.
    """
    if sigma <= 0:
        raise InvalidParameterError(f"kernel sigma must be positive, got {sigma}")
    r = math.ceil(3.0 * sigma)
    denom = 2.0 * sigma * sigma
    raw = [math.exp(-(i * i) / denom) for i in range(-r, r + 1)]
    total = math.fsum(raw)
    return np.array([w / total for w in raw], dtype=np.float64)


def gaussian_blur_rgb(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur of a uint8 RGB image; sigma 0 is identity."""
    if sigma < 0:
        raise InvalidParameterError(f"blur sigma must be >= 0, got {sigma}")
    img = _as_rgb(img)
    if sigma == 0:
        return img.copy()
    return _impl.blur_rgb(img, gaussian_kernel(sigma))


def gaussian_blur_field(field: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur of an (H, W) f64 scalar field."""
    if sigma < 0:
        raise InvalidParameterError(f"blur sigma must be >= 0, got {sigma}")
    field = np.ascontiguousarray(field, dtype=np.float64)
    if sigma == 0:
        return field.copy()
    return _impl.blur_field(field, gaussian_kernel(sigma))


def resize_bilinear(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    if out_h < 1 or out_w < 1:
        raise InvalidParameterError("resize target must be at least 1x1")
    return _impl.resize_bilinear(_as_rgb(img), int(out_h), int(out_w))


def desaturate(img: np.ndarray, scale: float) -> np.ndarray:
    return _impl.desaturate(_as_rgb(img), float(scale))


def fill_ellipses(img: np.ndarray, ellipses: np.ndarray) -> np.ndarray:
    ells = np.ascontiguousarray(ellipses, dtype=np.float64).reshape(-1, 6)
    return _impl.fill_ellipses(_as_rgb(img), ells)


def radial_alpha(width: int, height: int, r0: float, r1: float) -> np.ndarray:
    """(H, W) field: 1 inside radius r0, linear falloff to 0 at r1, 0 beyond.

    Distances are Euclidean from the image center ((W-1)/2, (H-1)/2) in
    pixel-center coordinates.
    """
    cx = (width - 1) / 2.0
    cy = (height - 1) / 2.0
    dx = np.arange(width, dtype=np.float64) - cx
    dy = np.arange(height, dtype=np.float64) - cy
    d = np.sqrt(dx[None, :] * dx[None, :] + dy[:, None] * dy[:, None])
    falloff = (r1 - d) / (r1 - r0)
    return np.where(d <= r0, 1.0, np.where(d >= r1, 0.0, falloff))
