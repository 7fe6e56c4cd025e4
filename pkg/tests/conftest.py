import struct

import numpy as np
import pytest

from wavedge.image import Image, smooth_plane, normalize_unit
from wavedge.pnm import write_pnm


def make_idx_pair(dirpath, images: np.ndarray, labels):
    """Write a (images, labels) IDX pair; images is (n, rows, cols) uint8."""
    n, rows, cols = images.shape
    images_path = dirpath / "images-idx3-ubyte"
    labels_path = dirpath / "labels-idx1-ubyte"
    with open(images_path, "wb") as fh:
        fh.write(struct.pack(">IIII", 0x00000803, n, rows, cols))
        fh.write(images.tobytes(order="C"))
    with open(labels_path, "wb") as fh:
        fh.write(struct.pack(">II", 0x00000801, n))
        fh.write(bytes(labels))
    return images_path, labels_path


def make_cifar_batch(path, records):
    """Write CIFAR binary records; each record is (label, planar_rgb_bytes)."""
    with open(path, "wb") as fh:
        for label, planes in records:
            fh.write(bytes([label]))
            fh.write(planes)
    return path


def make_image_dir(root, classes):
    """Build a class-per-subdirectory dataset from {name: [Image, ...]}."""
    for name, images in classes.items():
        sub = root / name
        sub.mkdir(parents=True)
        for i, img in enumerate(images):
            suffix = ".pgm" if img.channels == 1 else ".ppm"
            write_pnm(sub / f"{i:03d}{suffix}", img)
    return root


def digit_raster() -> np.ndarray:
    """A 28x28 handwritten-digit-like annulus with antialiased strokes."""
    yy, xx = np.mgrid[0:28, 0:28]
    img = np.zeros((28, 28))
    r = np.sqrt(((yy - 14) / 8.5) ** 2 + ((xx - 14) / 5.5) ** 2)
    img[(r > 0.62) & (r < 1.0)] = 1.0
    return normalize_unit(smooth_plane(img, 0.7), "rescale")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def digit() -> Image:
    return Image.from_plane(digit_raster())
