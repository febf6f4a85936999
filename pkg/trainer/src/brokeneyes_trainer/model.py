"""ResNet18 backbone with a binary log-softmax head."""

from __future__ import annotations

import torch
from torch import nn
from torchvision.models import resnet18

#: Per-channel normalization convention of the pretrained backbone.
NORM_MEAN = (0.485, 0.456, 0.406)
NORM_STD = (0.229, 0.224, 0.225)


class TrainerEnvironmentError(RuntimeError):
    """Pretrained backbone weights are required but unavailable."""


def build_model(pretrained: bool = True, seed: int = 0) -> nn.Module:
    """ResNet18 with the classifier replaced by Linear(512, 2) + log-softmax.

    With pretrained=True the backbone loads the standard ImageNet
    weights; if they cannot be obtained (offline environment without a
    cached copy) a TrainerEnvironmentError explains the situation. The
    head initialization is seeded either way.
    """
    torch.manual_seed(seed)
    if pretrained:
        try:
            from torchvision.models import ResNet18_Weights

            model = resnet18(weights=ResNet18_Weights.IMAGENET1K_V1)
        except Exception as exc:
            raise TrainerEnvironmentError(
                "pretrained ResNet18 weights unavailable (download failed and no "
                f"local cache); pass pretrained=False for a random backbone: {exc}"
            ) from exc
    else:
        model = resnet18(weights=None)
    torch.manual_seed(seed)
    model.fc = nn.Sequential(nn.Linear(model.fc.in_features, 2), nn.LogSoftmax(dim=1))
    return model


def head_parameters(model: nn.Module):
    return model.fc.parameters()


def finetune_parameters(model: nn.Module):
    """Stage-2 trainables: the final convolutional block plus the head."""
    yield from model.layer4.parameters()
    yield from model.fc.parameters()
