"""Seeded training and scoring of the comparison network."""
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from .model import SmallCNN


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 3
    batch_size: int = 128
    learning_rate: float = 1e-3

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")


def _writable(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    # frombuffer-backed arrays are read-only, which torch warns about
    return array if array.flags.writeable else array.copy()


def _to_tensors(images: np.ndarray, labels: np.ndarray):
    x = torch.from_numpy(_writable(images)).to(torch.float32) / 255.0
    y = torch.from_numpy(_writable(labels)).to(torch.int64)
    return x, y


def train_and_score(train_images, train_labels, test_images, test_labels,
                    seed: int, config: TrainConfig = TrainConfig()) -> float:
    """Train from scratch with the given seed, return test accuracy in [0, 1].

    Runs single-threaded; bitwise reproducibility of the reported accuracy
    matters more here than wall time.
    """
    torch.set_num_threads(1)
    torch.manual_seed(seed)
    x_train, y_train = _to_tensors(train_images, train_labels)
    x_test, y_test = _to_tensors(test_images, test_labels)

    model = SmallCNN(x_train.shape[1], tuple(x_train.shape[2:]))
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    shuffler = torch.Generator().manual_seed(seed)

    model.train()
    for _ in range(config.epochs):
        order = torch.randperm(len(x_train), generator=shuffler)
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            optimizer.zero_grad()
            loss = loss_fn(model(x_train[batch]), y_train[batch])
            loss.backward()
            optimizer.step()

    model.eval()
    correct = 0
    with torch.no_grad():
        for start in range(0, len(x_test), 512):
            logits = model(x_test[start:start + 512])
            correct += (logits.argmax(dim=1) == y_test[start:start + 512]).sum().item()
    return correct / len(x_test)
