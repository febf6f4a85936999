"""Disorder-aware ResNet18 fine-tuning and feature export."""

from .manifest import CONDITIONS, DISORDERS, ManifestRecord, read_manifest, select
from .model import TrainerEnvironmentError, build_model
from .tnsr import read_tensor, write_tensor
from .train import (
    DisorderModelSet,
    TrainConfig,
    choose_probe,
    evaluate_accuracy,
    evaluate_confidence,
    export_feature_map,
    load_checkpoint,
    train_all,
    train_condition,
)

__version__ = "0.1.0"

__all__ = [
    "CONDITIONS",
    "DISORDERS",
    "DisorderModelSet",
    "ManifestRecord",
    "TrainConfig",
    "TrainerEnvironmentError",
    "build_model",
    "choose_probe",
    "evaluate_accuracy",
    "evaluate_confidence",
    "export_feature_map",
    "load_checkpoint",
    "read_manifest",
    "read_tensor",
    "select",
    "train_all",
    "train_condition",
    "write_tensor",
]
