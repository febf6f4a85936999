# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the fast backend.

Every function mirrors _kernels_py.py bit for bit. The floating-point
evaluation order (ascending tap accumulation, separate multiply and add,
branch structure of the HSV conversion) is part of the contract between
the two backends; the extension is built with -ffp-contract=off so the
compiler cannot fuse the multiply-add pairs that NumPy rounds separately.
All transcendentals (kernel weights, ellipse rotations) arrive
precomputed from shared Python code.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, fabs, floor, fmod


cdef inline unsigned char _store(double x) nogil:
    cdef double y = floor(x + 0.5)
    if y < 0.0:
        return 0
    if y > 255.0:
        return 255
    return <unsigned char>y


def blur_rgb(img, kernel):
    """Separable clamp-to-edge convolution of an (H, W, 3) uint8 image."""
    cdef const unsigned char[:, :, ::1] src = img
    cdef const double[::1] kern = kernel
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef Py_ssize_t taps = kern.shape[0]
    cdef Py_ssize_t r = (taps - 1) // 2
    out_arr = np.empty((h, w, 3), dtype=np.uint8)
    tmp_arr = np.empty((h, w), dtype=np.float64)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef double[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t c, y, x, k, xi, yi
    cdef double acc
    with nogil:
        for c in range(3):
            for y in range(h):
                for x in range(w):
                    acc = 0.0
                    for k in range(taps):
                        xi = x + k - r
                        if xi < 0:
                            xi = 0
                        elif xi >= w:
                            xi = w - 1
                        acc += kern[k] * <double>src[y, xi, c]
                    tmp[y, x] = acc
            for y in range(h):
                for x in range(w):
                    acc = 0.0
                    for k in range(taps):
                        yi = y + k - r
                        if yi < 0:
                            yi = 0
                        elif yi >= h:
                            yi = h - 1
                        acc += kern[k] * tmp[yi, x]
                    out[y, x, c] = _store(acc)
    return out_arr


def blur_field(field, kernel):
    """Separable clamp-to-edge convolution of an (H, W) f64 field."""
    cdef const double[:, ::1] src = field
    cdef const double[::1] kern = kernel
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef Py_ssize_t taps = kern.shape[0]
    cdef Py_ssize_t r = (taps - 1) // 2
    tmp_arr = np.empty((h, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t y, x, k, xi, yi
    cdef double acc
    with nogil:
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for k in range(taps):
                    xi = x + k - r
                    if xi < 0:
                        xi = 0
                    elif xi >= w:
                        xi = w - 1
                    acc += kern[k] * src[y, xi]
                tmp[y, x] = acc
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for k in range(taps):
                    yi = y + k - r
                    if yi < 0:
                        yi = 0
                    elif yi >= h:
                        yi = h - 1
                    acc += kern[k] * tmp[yi, x]
                out[y, x] = acc
    return out_arr


def resize_bilinear(img, out_h, out_w):
    """Bilinear resize with half-pixel-center sampling, clamp-to-edge."""
    cdef const unsigned char[:, :, ::1] src = img
    cdef Py_ssize_t oh = out_h
    cdef Py_ssize_t ow = out_w
    cdef Py_ssize_t in_h = src.shape[0]
    cdef Py_ssize_t in_w = src.shape[1]
    cdef double sx = <double>in_w / <double>ow
    cdef double sy = <double>in_h / <double>oh
    out_arr = np.empty((oh, ow, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, c, x0, y0, x0c, x1c, y0c, y1c
    cdef double posx, posy, x0f, y0f, fx, fy, omfx, omfy, h0, h1
    with nogil:
        for y in range(oh):
            posy = (<double>y + 0.5) * sy - 0.5
            y0f = floor(posy)
            fy = posy - y0f
            y0 = <Py_ssize_t>y0f
            y0c = y0
            if y0c < 0:
                y0c = 0
            elif y0c > in_h - 1:
                y0c = in_h - 1
            y1c = y0 + 1
            if y1c < 0:
                y1c = 0
            elif y1c > in_h - 1:
                y1c = in_h - 1
            omfy = 1.0 - fy
            for x in range(ow):
                posx = (<double>x + 0.5) * sx - 0.5
                x0f = floor(posx)
                fx = posx - x0f
                x0 = <Py_ssize_t>x0f
                x0c = x0
                if x0c < 0:
                    x0c = 0
                elif x0c > in_w - 1:
                    x0c = in_w - 1
                x1c = x0 + 1
                if x1c < 0:
                    x1c = 0
                elif x1c > in_w - 1:
                    x1c = in_w - 1
                omfx = 1.0 - fx
                for c in range(3):
                    h0 = omfx * <double>src[y0c, x0c, c] + fx * <double>src[y0c, x1c, c]
                    h1 = omfx * <double>src[y1c, x0c, c] + fx * <double>src[y1c, x1c, c]
                    out[y, x, c] = _store(omfy * h0 + fy * h1)
    return out_arr


def desaturate(img, scale):
    """Scale HSV saturation of every pixel by `scale` and convert back."""
    cdef const unsigned char[:, :, ::1] src = img
    cdef double sc = scale
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    out_arr = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef long sextant
    cdef double r, g, b, mx, mn, c, hp, s, v, s2, c2, xx, m
    cdef double comp_r, comp_g, comp_b
    with nogil:
        for y in range(h):
            for x in range(w):
                r = <double>src[y, x, 0]
                g = <double>src[y, x, 1]
                b = <double>src[y, x, 2]
                mx = r
                if g > mx:
                    mx = g
                if b > mx:
                    mx = b
                mn = r
                if g < mn:
                    mn = g
                if b < mn:
                    mn = b
                c = mx - mn
                if c == 0.0:
                    hp = 0.0
                elif r >= g and r >= b:
                    hp = fmod((g - b) / c, 6.0)
                    if hp < 0.0:
                        hp += 6.0
                elif g >= b:
                    hp = (b - r) / c + 2.0
                else:
                    hp = (r - g) / c + 4.0
                if mx > 0.0:
                    s = c / mx
                else:
                    s = 0.0
                v = mx / 255.0
                s2 = s * sc
                c2 = v * s2
                xx = c2 * (1.0 - fabs(fmod(hp, 2.0) - 1.0))
                m = v - c2
                sextant = <long>hp
                if sextant == 0:
                    comp_r = c2
                    comp_g = xx
                    comp_b = 0.0
                elif sextant == 1:
                    comp_r = xx
                    comp_g = c2
                    comp_b = 0.0
                elif sextant == 2:
                    comp_r = 0.0
                    comp_g = c2
                    comp_b = xx
                elif sextant == 3:
                    comp_r = 0.0
                    comp_g = xx
                    comp_b = c2
                elif sextant == 4:
                    comp_r = xx
                    comp_g = 0.0
                    comp_b = c2
                else:
                    comp_r = c2
                    comp_g = 0.0
                    comp_b = xx
                out[y, x, 0] = _store((comp_r + m) * 255.0)
                out[y, x, 1] = _store((comp_g + m) * 255.0)
                out[y, x, 2] = _store((comp_b + m) * 255.0)
    return out_arr


def fill_ellipses(img, ellipses):
    """Fill rotated ellipses (rows: cx, cy, a, b, cos_t, sin_t) with black."""
    out_arr = img.copy()
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef const double[:, ::1] ells = ellipses
    cdef Py_ssize_t h = out.shape[0]
    cdef Py_ssize_t w = out.shape[1]
    cdef Py_ssize_t n = ells.shape[0]
    cdef Py_ssize_t i, y, x, x_lo, x_hi, y_lo, y_hi
    cdef double cx, cy, a, b, ct, st, rmax, dxv, dyv, u, vv, t1, t2
    with nogil:
        for i in range(n):
            cx = ells[i, 0]
            cy = ells[i, 1]
            a = ells[i, 2]
            b = ells[i, 3]
            ct = ells[i, 4]
            st = ells[i, 5]
            rmax = a if a > b else b
            x_lo = <Py_ssize_t>ceil(cx - rmax)
            if x_lo < 0:
                x_lo = 0
            x_hi = <Py_ssize_t>floor(cx + rmax)
            if x_hi > w - 1:
                x_hi = w - 1
            y_lo = <Py_ssize_t>ceil(cy - rmax)
            if y_lo < 0:
                y_lo = 0
            y_hi = <Py_ssize_t>floor(cy + rmax)
            if y_hi > h - 1:
                y_hi = h - 1
            if x_lo > x_hi or y_lo > y_hi:
                continue
            for y in range(y_lo, y_hi + 1):
                dyv = <double>y - cy
                for x in range(x_lo, x_hi + 1):
                    dxv = <double>x - cx
                    u = dxv * ct + dyv * st
                    vv = dxv * (-st) + dyv * ct
                    t1 = u / a
                    t2 = vv / b
                    if t1 * t1 + t2 * t2 <= 1.0:
                        out[y, x, 0] = 0
                        out[y, x, 1] = 0
                        out[y, x, 2] = 0
    return out_arr
