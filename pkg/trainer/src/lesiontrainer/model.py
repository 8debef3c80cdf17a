"""Classifier architectures. All models emit a single logit per patch."""
from __future__ import annotations

import torch
from torch import nn


class ToyCnn(nn.Module):
    """Small 4-layer network: three conv blocks and a dense head.

    Global max pooling makes it side-agnostic, mirroring the adapted
    residual-network head used at full scale.
    """

    def __init__(self):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 8, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),
            nn.Conv2d(8, 16, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),
            nn.Conv2d(16, 32, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.AdaptiveMaxPool2d(1),
        )
        self.head = nn.Linear(32, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.features(x).flatten(1)).squeeze(-1)


class _ResNetBinary(nn.Module):
    def __init__(self, backbone: nn.Module):
        super().__init__()
        self.backbone = backbone

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.backbone(x).squeeze(-1)


def build_model(name: str) -> nn.Module:
    if name == "toy-cnn":
        return ToyCnn()
    if name == "resnet50-adapted":
        # 50-layer residual net with its classification head swapped for
        # global max pooling plus a single sigmoid unit (the sigmoid lives in
        # the loss/prediction, which use logits for stability).
        from torchvision.models import resnet50

        backbone = resnet50(weights=None)
        backbone.avgpool = nn.AdaptiveMaxPool2d(1)
        backbone.fc = nn.Linear(backbone.fc.in_features, 1)
        return _ResNetBinary(backbone)
    raise ValueError(f"unknown model {name!r}")
