"""Pure NumPy kernels: the fallback backend.

These functions mirror the compiled extension (_kernels.pyx) operation for
operation. Bit-identical output across the two backends is a hard
requirement, so every floating-point expression here fixes an evaluation
order that the C code reproduces: accumulations run in ascending tap
order, multiply and add are separate rounded operations (the extension is
compiled with -ffp-contract=off), and all transcendental values (kernel
weights, ellipse rotations) are computed once by the caller and passed in.

Do not "simplify" arithmetic in only one backend.
"""

from __future__ import annotations

import math

import numpy as np


def _store_u8(x: np.ndarray) -> np.ndarray:
    """Round half away from zero and clamp to [0, 255].

    Values are non-negative here, so floor(x + 0.5) is half-away-from-zero.
    Fixing the rounding rule removes platform drift at .5 boundaries.
    """
    return np.clip(np.floor(x + 0.5), 0.0, 255.0).astype(np.uint8)


def blur_rgb(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable convolution of an (H, W, 3) uint8 image, clamp-to-edge.

    Horizontal pass first, vertical second; f64 throughout; rounded to
    uint8 only at the final store.
    """
    h, w, _ = img.shape
    taps = kernel.shape[0]
    r = (taps - 1) // 2
    out = np.empty((h, w, 3), np.uint8)
    for c in range(3):
        ch = img[:, :, c].astype(np.float64)
        padded = np.pad(ch, ((0, 0), (r, r)), mode="edge")
        tmp = np.zeros((h, w), np.float64)
        for k in range(taps):
            tmp += kernel[k] * padded[:, k:k + w]
        padded = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
        acc = np.zeros((h, w), np.float64)
        for k in range(taps):
            acc += kernel[k] * padded[k:k + h, :]
        out[:, :, c] = _store_u8(acc)
    return out


def blur_field(field: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable convolution of an (H, W) f64 scalar field, clamp-to-edge."""
    h, w = field.shape
    taps = kernel.shape[0]
    r = (taps - 1) // 2
    padded = np.pad(field, ((0, 0), (r, r)), mode="edge")
    tmp = np.zeros((h, w), np.float64)
    for k in range(taps):
        tmp += kernel[k] * padded[:, k:k + w]
    padded = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
    acc = np.zeros((h, w), np.float64)
    for k in range(taps):
        acc += kernel[k] * padded[k:k + h, :]
    return acc


def resize_bilinear(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize with half-pixel-center sampling, clamp-to-edge."""
    in_h, in_w, _ = img.shape
    sx = in_w / out_w
    sy = in_h / out_h
    xs = (np.arange(out_w, dtype=np.float64) + 0.5) * sx - 0.5
    ys = (np.arange(out_h, dtype=np.float64) + 0.5) * sy - 0.5
    x0f = np.floor(xs)
    y0f = np.floor(ys)
    fx = xs - x0f
    fy = ys - y0f
    x0 = x0f.astype(np.int64)
    y0 = y0f.astype(np.int64)
    x0c = np.clip(x0, 0, in_w - 1)
    x1c = np.clip(x0 + 1, 0, in_w - 1)
    y0c = np.clip(y0, 0, in_h - 1)
    y1c = np.clip(y0 + 1, 0, in_h - 1)
    src = img.astype(np.float64)
    p00 = src[y0c[:, None], x0c[None, :], :]
    p01 = src[y0c[:, None], x1c[None, :], :]
    p10 = src[y1c[:, None], x0c[None, :], :]
    p11 = src[y1c[:, None], x1c[None, :], :]
    fxb = fx[None, :, None]
    fyb = fy[:, None, None]
    h0 = (1.0 - fxb) * p00 + fxb * p01
    h1 = (1.0 - fxb) * p10 + fxb * p11
    v = (1.0 - fyb) * h0 + fyb * h1
    return _store_u8(v)


def desaturate(img: np.ndarray, scale: float) -> np.ndarray:
    """Scale HSV saturation of every pixel by `scale` and convert back.

    Hexcone conversion carried out in f64 on normalized values
    (v = max/255); only rational arithmetic, so the compiled backend can
    reproduce it exactly.
    """
    rf = img[:, :, 0].astype(np.float64)
    gf = img[:, :, 1].astype(np.float64)
    bf = img[:, :, 2].astype(np.float64)
    mx = np.maximum(np.maximum(rf, gf), bf)
    mn = np.minimum(np.minimum(rf, gf), bf)
    c = mx - mn
    c_safe = np.where(c > 0.0, c, 1.0)
    hp_r = np.mod((gf - bf) / c_safe, 6.0)
    hp_g = (bf - rf) / c_safe + 2.0
    hp_b = (rf - gf) / c_safe + 4.0
    is_r = (rf >= gf) & (rf >= bf)
    is_g = (~is_r) & (gf >= bf)
    hp = np.select([c == 0.0, is_r, is_g], [0.0, hp_r, hp_g], default=hp_b)
    mx_safe = np.where(mx > 0.0, mx, 1.0)
    s = np.where(mx > 0.0, c / mx_safe, 0.0)
    v = mx / 255.0
    s2 = s * scale
    c2 = v * s2
    xx = c2 * (1.0 - np.abs(np.mod(hp, 2.0) - 1.0))
    m = v - c2
    sextant = hp.astype(np.int64)
    z = np.zeros_like(c2)
    comp_r = np.choose(sextant, [c2, xx, z, z, xx, c2])
    comp_g = np.choose(sextant, [xx, c2, c2, xx, z, z])
    comp_b = np.choose(sextant, [z, z, xx, c2, c2, xx])
    out = np.empty_like(img)
    out[:, :, 0] = _store_u8((comp_r + m) * 255.0)
    out[:, :, 1] = _store_u8((comp_g + m) * 255.0)
    out[:, :, 2] = _store_u8((comp_b + m) * 255.0)
    return out


def fill_ellipses(img: np.ndarray, ellipses: np.ndarray) -> np.ndarray:
    """Fill rotated ellipses with black on a copy of the image.

    `ellipses` rows are (cx, cy, a, b, cos_t, sin_t). A pixel is filled
    when its integer-coordinate center satisfies the ellipse inequality;
    no anti-aliasing.
    """
    out = img.copy()
    h, w, _ = img.shape
    for row in range(ellipses.shape[0]):
        cx, cy, a, b, ct, st = (float(e) for e in ellipses[row])
        rmax = a if a > b else b
        x_lo = max(math.ceil(cx - rmax), 0)
        x_hi = min(math.floor(cx + rmax), w - 1)
        y_lo = max(math.ceil(cy - rmax), 0)
        y_hi = min(math.floor(cy + rmax), h - 1)
        if x_lo > x_hi or y_lo > y_hi:
            continue
        dx = np.arange(x_lo, x_hi + 1, dtype=np.float64) - cx
        dy = np.arange(y_lo, y_hi + 1, dtype=np.float64) - cy
        u = dx[None, :] * ct + dy[:, None] * st
        vv = dx[None, :] * (-st) + dy[:, None] * ct
        t1 = u / a
        t2 = vv / b
        inside = t1 * t1 + t2 * t2 <= 1.0
        region = out[y_lo:y_hi + 1, x_lo:x_hi + 1]
        region[inside] = 0
    return out
