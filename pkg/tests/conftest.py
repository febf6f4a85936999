"""Shared fixtures: deterministic synthetic images and corpus builders.

All fixture imagery is generated from fixed seeds so expected values
frozen into tests stay valid. Images are colorful and smooth-ish (sums of
gradients and sinusoids plus mild noise) and never contain a pure black
pixel, which lets retinopathy tests count blackened pixels exactly.
"""

from __future__ import annotations

import numpy as np
import pytest

from brokeneyes import raster


def synth_image(seed: int, height: int, width: int) -> np.ndarray:
    """Deterministic colorful test image with channel values in [1, 254]."""
    rs = np.random.RandomState(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    u = xx / max(width - 1, 1)
    v = yy / max(height - 1, 1)
    phases = rs.uniform(0, 2 * np.pi, size=6)
    freqs = rs.uniform(1.0, 4.0, size=6)
    r = 0.5 + 0.35 * np.sin(2 * np.pi * freqs[0] * u + phases[0]) + 0.15 * v
    g = 0.5 + 0.35 * np.sin(2 * np.pi * freqs[1] * v + phases[1]) + 0.15 * u
    b = 0.5 + 0.25 * np.sin(2 * np.pi * freqs[2] * (u + v) + phases[2]) + 0.2 * (1 - u)
    img = np.stack([r, g, b], axis=2)
    img += rs.uniform(-0.05, 0.05, size=img.shape)
    return np.clip(img * 253 + 1, 1, 254).astype(np.uint8)


@pytest.fixture(scope="session")
def img224() -> np.ndarray:
    return synth_image(11, 224, 224)


@pytest.fixture(scope="session")
def fixture_images() -> list[np.ndarray]:
    """20 deterministic images of assorted sizes, short side >= 96."""
    sizes = [
        (224, 224), (224, 224), (224, 224), (224, 224), (160, 240),
        (240, 160), (128, 128), (96, 144), (144, 96), (200, 200),
        (224, 168), (168, 224), (112, 112), (96, 96), (192, 256),
        (256, 192), (120, 180), (180, 120), (224, 224), (100, 100),
    ]
    return [synth_image(100 + i, h, w) for i, (h, w) in enumerate(sizes)]


def write_corpus(directory, count: int, seed: int, size: tuple[int, int] = (80, 80)) -> None:
    """Write `count` deterministic PNGs under `directory`."""
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        img = synth_image(seed + i, size[0], size[1])
        raster.save_png(img, directory / f"img{i:04d}.png")


def tree_digest(root) -> dict[str, bytes]:
    """Map of relative path -> file bytes for a whole directory tree."""
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }
