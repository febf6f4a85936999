"""Two-stage disorder-aware fine-tuning and feature export.

Per condition: stage 1 trains only the binary head for head_epochs with
Adam and NLL loss on the frozen backbone; stage 2 unfreezes the final
convolutional block and fine-tunes for finetune_epochs at a reduced
learning rate. Validation accuracy is logged per epoch. Feature maps are
captured from the final convolutional block (512x7x7 for 224x224 input)
and written as TNSR for the analysis toolkit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import ConditionDataset, load_input
from .manifest import CLASS_TO_INDEX, ManifestRecord, select
from .model import build_model, finetune_parameters, head_parameters
from .tnsr import write_tensor

EXPORT_SHAPE = (512, 7, 7)


@dataclass(frozen=True)
class TrainConfig:
    head_epochs: int = 5
    finetune_epochs: int = 1
    head_lr: float = 1e-3
    finetune_lr: float = 1e-4
    batch_size: int = 32
    seed: int = 0
    pretrained: bool = True
    normalization: tuple = field(
        default=((0.485, 0.456, 0.406), (0.229, 0.224, 0.225))
    )

    def __post_init__(self):
        if self.head_epochs < 1 or self.finetune_epochs < 1:
            raise ValueError("epoch counts must be >= 1")
        if self.head_lr <= 0 or self.finetune_lr <= 0:
            raise ValueError("learning rates must be positive")


@dataclass
class EpochStats:
    stage: str
    epoch: int
    train_loss: float
    val_accuracy: float


@dataclass(frozen=True)
class DisorderModelSet:
    """Checkpoint and training-log paths, one entry per condition."""

    checkpoints: dict[str, Path]
    logs: dict[str, Path]

    def __post_init__(self):
        from .manifest import CONDITIONS

        for name, mapping in (("checkpoints", self.checkpoints), ("logs", self.logs)):
            if sorted(mapping) != sorted(CONDITIONS):
                raise ValueError(f"{name} must hold exactly one entry per condition")


def _loader(dataset: ConditionDataset, config: TrainConfig, shuffle: bool) -> DataLoader:
    generator = torch.Generator()
    generator.manual_seed(config.seed)
    return DataLoader(
        dataset,
        batch_size=config.batch_size,
        shuffle=shuffle,
        generator=generator if shuffle else None,
        num_workers=0,
    )


@torch.no_grad()
def _accuracy(model: nn.Module, loader: DataLoader) -> float:
    model.eval()
    correct = total = 0
    for x, y in loader:
        pred = model(x).argmax(dim=1)
        correct += int((pred == y).sum())
        total += int(y.numel())
    return correct / total if total else math.nan


def _run_stage(
    model: nn.Module,
    stage: str,
    params,
    lr: float,
    epochs: int,
    train_ds: ConditionDataset,
    val_loader: DataLoader,
    config: TrainConfig,
) -> list[EpochStats]:
    criterion = nn.NLLLoss()
    for p in model.parameters():
        p.requires_grad_(False)
    trainable = list(params)
    for p in trainable:
        p.requires_grad_(True)
    optimizer = torch.optim.Adam(trainable, lr=lr)
    history = []
    for epoch in range(epochs):
        train_ds.set_epoch(epoch)
        loader = _loader(train_ds, config, shuffle=True)
        # eval mode throughout: batch-norm running statistics stay frozen,
        # so the features the head trains on are the features it is
        # evaluated on. With desk-scale batches, letting BN track batch
        # statistics makes train-time and eval-time features diverge badly.
        model.eval()
        total_loss = 0.0
        batches = 0
        for x, y in loader:
            optimizer.zero_grad()
            loss = criterion(model(x), y)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach())
            batches += 1
        history.append(
            EpochStats(
                stage=stage,
                epoch=epoch + 1,
                train_loss=total_loss / max(batches, 1),
                val_accuracy=_accuracy(model, val_loader),
            )
        )
    return history


def train_condition(
    records: list[ManifestRecord],
    data_root: str | Path,
    condition: str,
    config: TrainConfig,
    out_dir: str | Path,
) -> Path:
    """Train one condition's model; returns the checkpoint path.

    Writes <condition>.pt and <condition>.log.json under out_dir.
    """
    train_recs = select(records, condition=condition, split="train")
    val_recs = select(records, condition=condition, split="val")
    if not train_recs:
        raise ValueError(f"no training records for condition {condition!r}")
    if not val_recs:
        raise ValueError(f"no validation records for condition {condition!r}")

    torch.manual_seed(config.seed)
    model = build_model(pretrained=config.pretrained, seed=config.seed)
    train_ds = ConditionDataset(data_root, train_recs, augment=True, seed=config.seed)
    val_loader = _loader(
        ConditionDataset(data_root, val_recs), config, shuffle=False
    )

    history = _run_stage(
        model, "head", head_parameters(model), config.head_lr,
        config.head_epochs, train_ds, val_loader, config,
    )
    history += _run_stage(
        model, "finetune", finetune_parameters(model), config.finetune_lr,
        config.finetune_epochs, train_ds, val_loader, config,
    )

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint = out_dir / f"{condition}.pt"
    torch.save(
        {"state_dict": model.state_dict(), "condition": condition, "config": asdict(config)},
        checkpoint,
    )
    log_path = out_dir / f"{condition}.log.json"
    log_path.write_text(json.dumps([asdict(h) for h in history], indent=2))
    return checkpoint


def load_checkpoint(path: str | Path) -> tuple[nn.Module, str, TrainConfig]:
    blob = torch.load(path, map_location="cpu", weights_only=False)
    saved = dict(blob["config"])
    saved["normalization"] = tuple(tuple(x) for x in saved["normalization"])
    config = TrainConfig(**saved)
    model = build_model(pretrained=False, seed=config.seed)
    model.load_state_dict(blob["state_dict"])
    model.eval()
    return model, blob["condition"], config


@torch.no_grad()
def evaluate_accuracy(
    checkpoint: str | Path,
    records: list[ManifestRecord],
    data_root: str | Path,
    condition: str,
) -> float:
    """Accuracy on the condition's test split."""
    model, _, config = load_checkpoint(checkpoint)
    test_recs = select(records, condition=condition, split="test")
    if not test_recs:
        raise ValueError(f"no test records for condition {condition!r}")
    return _accuracy(model, _loader(ConditionDataset(data_root, test_recs), config, False))


@torch.no_grad()
def evaluate_confidence(
    checkpoint: str | Path,
    records: list[ManifestRecord],
    data_root: str | Path,
    condition: str,
    out_json: str | Path | None = None,
) -> float:
    """Mean human-class probability over the condition's human test images."""
    model, _, _ = load_checkpoint(checkpoint)
    test_recs = select(records, condition=condition, split="test", class_label="human")
    if not test_recs:
        raise ValueError(f"no human test records for condition {condition!r}")
    root = Path(data_root)
    total = 0.0
    for rec in test_recs:
        log_probs = model(load_input(root / rec.path).unsqueeze(0))[0]
        total += float(torch.exp(log_probs[CLASS_TO_INDEX["human"]]))
    confidence = total / len(test_recs)
    if out_json is not None:
        out_json = Path(out_json)
        out_json.parent.mkdir(parents=True, exist_ok=True)
        out_json.write_text(json.dumps({"condition": condition, "confidence": confidence}))
    return confidence


@torch.no_grad()
def export_feature_map(
    checkpoint: str | Path, probe_image: str | Path, out_path: str | Path
) -> Path:
    """Capture the final convolutional block's output for one probe image.

    The export must be exactly 512x7x7 float32 (a 224x224 input through
    ResNet18); anything else means the hook landed on the wrong module.
    """
    model, _, _ = load_checkpoint(checkpoint)
    captured: list[torch.Tensor] = []
    handle = model.layer4.register_forward_hook(lambda mod, inp, out: captured.append(out))
    try:
        model(load_input(probe_image).unsqueeze(0))
    finally:
        handle.remove()
    features = captured[0].squeeze(0)
    if tuple(features.shape) != EXPORT_SHAPE:
        raise ValueError(
            f"feature map export expected shape {EXPORT_SHAPE}, got {tuple(features.shape)}"
        )
    write_tensor(features.numpy(), out_path)
    return Path(out_path)


def train_all(
    records: list[ManifestRecord],
    data_root: str | Path,
    config: TrainConfig,
    out_dir: str | Path,
) -> DisorderModelSet:
    """Run the two-stage protocol for all six conditions."""
    from .manifest import CONDITIONS

    checkpoints = {}
    logs = {}
    for condition in CONDITIONS:
        checkpoints[condition] = train_condition(records, data_root, condition, config, out_dir)
        logs[condition] = checkpoints[condition].parent / f"{condition}.log.json"
    return DisorderModelSet(checkpoints=checkpoints, logs=logs)


def choose_probe(records: list[ManifestRecord], condition: str) -> ManifestRecord:
    """The fixed probe: first human-class test image in manifest order,
    viewed under `condition` (the same source appears under every
    condition with the same stem)."""
    candidates = select(records, condition=condition, split="test", class_label="human")
    if not candidates:
        raise ValueError(f"no human test image to use as probe for {condition!r}")
    return candidates[0]
