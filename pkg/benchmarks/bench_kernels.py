#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Each operation runs on a deterministic 512x512 RGB image. Outputs are
cross-checked byte for byte before timing, so the speedup numbers always
describe two implementations of the same function.

    python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from brokeneyes import _kernels_py, kernels
from brokeneyes.filters import RetinopathyParams, plan_ellipses

try:
    from brokeneyes import _kernels as _compiled
except ImportError:
    _compiled = None


def make_image(size: int = 512) -> np.ndarray:
    rs = np.random.RandomState(42)
    yy, xx = np.mgrid[0:size, 0:size] / size
    img = np.stack(
        [
            0.5 + 0.4 * np.sin(6.28 * 3 * xx),
            0.5 + 0.4 * np.sin(6.28 * 2 * yy),
            0.5 + 0.3 * np.sin(6.28 * (xx + yy)),
        ],
        axis=2,
    )
    img += rs.uniform(-0.05, 0.05, img.shape)
    return np.clip(img * 255, 0, 255).astype(np.uint8)


def bench(fn, repeats: int) -> float:
    fn()  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _compiled is None:
        print("compiled backend not available; nothing to compare")
        return 1

    img = make_image()
    field = np.ascontiguousarray(img[:, :, 0].astype(np.float64) / 255.0)
    kernel = kernels.gaussian_kernel(4.0)
    ells = plan_ellipses(512, 512, RetinopathyParams(count_min=15, count_max=15), seed=9)

    cases = [
        ("blur_rgb sigma=4", lambda m: m.blur_rgb(img, kernel)),
        ("blur_field sigma=4", lambda m: m.blur_field(field, kernel)),
        ("resize 512->224", lambda m: m.resize_bilinear(img, 224, 224)),
        ("desaturate 0.35", lambda m: m.desaturate(img, 0.35)),
        ("fill_ellipses n=15", lambda m: m.fill_ellipses(img, ells)),
    ]

    print(f"{'operation':<22} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, op in cases:
        ref = op(_kernels_py)
        fast = op(_compiled)
        if not np.array_equal(ref, fast):
            raise AssertionError(f"backend mismatch in {name}")
        t_py = bench(lambda: op(_kernels_py), args.repeats)
        t_c = bench(lambda: op(_compiled), args.repeats)
        print(f"{name:<22} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
