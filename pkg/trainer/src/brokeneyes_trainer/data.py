"""Dataset over the manifest and PNG tree."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset

from .manifest import CLASS_TO_INDEX, ManifestRecord
from .model import NORM_MEAN, NORM_STD

_MEAN = torch.tensor(NORM_MEAN).view(3, 1, 1)
_STD = torch.tensor(NORM_STD).view(3, 1, 1)


def load_input(path: str | Path) -> torch.Tensor:
    """Decode a PNG to a normalized (3, H, W) float tensor."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.float32) / 255.0
    tensor = torch.from_numpy(arr).permute(2, 0, 1)
    return (tensor - _MEAN) / _STD


class ConditionDataset(Dataset):
    """Images of one condition/split pair; labels 0=human, 1=non_human.

    Horizontal flips are the only augmentation: they leave the spatially
    asymmetric degradations (center masks, vignettes) meaningful, unlike
    crops. Flip decisions come from a dedicated generator so epochs are
    reproducible for a fixed seed.
    """

    def __init__(
        self,
        root: str | Path,
        records: list[ManifestRecord],
        augment: bool = False,
        seed: int = 0,
    ):
        self.root = Path(root)
        self.records = records
        self.augment = augment
        self.seed = seed
        self.epoch = 0

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int):
        rec = self.records[index]
        x = load_input(self.root / rec.path)
        if self.augment:
            g = torch.Generator()
            g.manual_seed((self.seed * 1_000_003 + self.epoch) * 1_000_003 + index)
            if torch.rand((), generator=g) < 0.5:
                x = torch.flip(x, dims=(2,))
        return x, CLASS_TO_INDEX[rec.class_label]
