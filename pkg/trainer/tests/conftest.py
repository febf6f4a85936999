"""Desk-scale fixtures: a synthetic corpus curated through the dataset
toolkit's CLI (the only coupling between the two packages is its file
output), plus one session-scoped training run over all six conditions.

Both classes share the same smooth base imagery and overall contrast;
they differ only in the orientation of a fine stripe pattern (vertical
for "human", horizontal for "non_human", wavelength ~6 px). Orientation
is a directional cue in random-conv feature space, which a linear head
separates within the fixed 5+1-epoch recipe, and it degrades honestly:
heavy blur erases both orientations equally, masks remove part of the
striped area, occlusions remove area with per-image variance, and
horizontal flips map each orientation to itself. The curation config
widens the scotoma and occlusions so they bite at 224x224.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from brokeneyes_trainer import TrainConfig, read_manifest, train_condition
from brokeneyes_trainer.manifest import CONDITIONS

N_PER_CLASS = 20
DESK_CONFIG = TrainConfig(batch_size=2, seed=0, pretrained=False)

CURATION_CONFIG = {
    "filters": {
        "amd": {"opaque_radius_frac": 0.25, "fade_radius_frac": 0.55},
        "retinopathy": {"count_min": 15, "count_max": 30,
                        "axis_min_frac": 0.05, "axis_max_frac": 0.12},
    }
}


def _save(img: np.ndarray, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img, mode="RGB").save(path, format="PNG")


def _striped_image(seed: int, orientation: str, size: int = 224) -> np.ndarray:
    rs = np.random.RandomState(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    u, v = xx / (size - 1), yy / (size - 1)
    phases = rs.uniform(0, 2 * np.pi, 3)
    base = np.stack(
        [
            130 + 25 * np.sin(2 * np.pi * 2 * u + phases[0]),
            130 + 25 * np.sin(2 * np.pi * 2 * v + phases[1]),
            130 + 25 * np.sin(2 * np.pi * (u + v) + phases[2]),
        ],
        axis=2,
    )
    wavelength = rs.uniform(5.5, 7.0)
    amplitude = rs.uniform(50.0, 80.0)
    phase = rs.uniform(0, 2 * np.pi)
    coord = xx if orientation == "vertical" else yy
    stripes = amplitude * np.sin(2 * np.pi * coord / wavelength + phase)[:, :, None]
    noise = rs.uniform(-8.0, 8.0, size=(size, size, 3))
    return np.clip(base + stripes + noise, 0, 255).astype(np.uint8)


def make_human(seed: int, size: int = 224) -> np.ndarray:
    return _striped_image(seed, "vertical", size)


def make_non_human(seed: int, size: int = 224) -> np.ndarray:
    return _striped_image(seed, "horizontal", size)


@pytest.fixture(scope="session")
def dataset(tmp_path_factory) -> Path:
    """Six-condition dataset built by the dataset toolkit's curate CLI."""
    root = tmp_path_factory.mktemp("corpus")
    for i in range(N_PER_CLASS):
        _save(make_human(1000 + i), root / "human" / f"h{i:03d}.png")
        _save(make_non_human(2000 + i), root / "nonhuman" / f"n{i:03d}.png")
    config = root / "config.json"
    config.write_text(json.dumps(CURATION_CONFIG))
    out = root / "ds"
    result = subprocess.run(
        [
            sys.executable, "-m", "brokeneyes", "curate",
            "--human", str(root / "human"), "--nonhuman", str(root / "nonhuman"),
            "--out", str(out), "--seed", "13", "--threads", "4",
            "--config", str(config),
        ],
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        pytest.skip(f"dataset toolkit CLI unavailable or failed: {result.stderr[-500:]}")
    return out


@pytest.fixture(scope="session")
def trained(dataset, tmp_path_factory):
    """All six condition models trained at desk scale."""
    records = read_manifest(dataset / "manifest.jsonl")
    out = tmp_path_factory.mktemp("models")
    checkpoints = {
        condition: train_condition(records, dataset, condition, DESK_CONFIG, out)
        for condition in CONDITIONS
    }
    return records, checkpoints
