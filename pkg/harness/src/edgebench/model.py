"""The fixed comparison network.

Two conv blocks and one linear head, about 100k parameters at the dataset
sizes this harness targets (89k at 28x28x1, 105k at 32x32x3).  The network
is deliberately small and frozen: the object under study is the input
preprocessing, so the consumer just has to be identical across variants.
"""
import torch
from torch import nn


class SmallCNN(nn.Module):
    def __init__(self, in_channels: int, in_hw: tuple[int, int], classes: int = 10):
        super().__init__()
        height, width = in_hw
        if height < 4 or width < 4:
            raise ValueError(f"input {height}x{width} too small for two pooling stages")
        self.conv1 = nn.Conv2d(in_channels, 48, kernel_size=3, padding=1)
        self.conv2 = nn.Conv2d(48, 96, kernel_size=3, padding=1)
        self.pool = nn.MaxPool2d(2)
        self.head = nn.Linear(96 * (height // 4) * (width // 4), classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.pool(torch.relu(self.conv1(x)))
        x = self.pool(torch.relu(self.conv2(x)))
        return self.head(torch.flatten(x, 1))


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
