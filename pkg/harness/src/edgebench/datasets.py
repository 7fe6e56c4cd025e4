"""Readers for the dataset layouts the enhancement CLI emits.

Each loader returns (images, labels, class_names) with images uint8 of shape
(n, c, h, w) and labels int64.  A directory is classified by its
manifest.json "format" field when one is present, otherwise by inspection:
IDX files are recognized by magic, CIFAR batches by the .bin suffix, class
trees by their subdirectories.
"""
import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .pnm import read_pnm

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
CIFAR_RECORD = 3073


def _read_idx_images(path):
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16:
            raise FormatError(f"{path}: truncated IDX header")
        magic, count, rows, cols = struct.unpack(">IIII", header)
        if magic != IDX_IMAGES_MAGIC:
            raise FormatError(f"{path}: bad IDX image magic {magic:#010x}")
        raw = fh.read(count * rows * cols)
    if len(raw) != count * rows * cols:
        raise FormatError(f"{path}: expected {count * rows * cols} pixel bytes")
    return np.frombuffer(raw, dtype=np.uint8).reshape(count, 1, rows, cols)


def _read_idx_labels(path):
    with open(path, "rb") as fh:
        header = fh.read(8)
        if len(header) != 8:
            raise FormatError(f"{path}: truncated IDX header")
        magic, count = struct.unpack(">II", header)
        if magic != IDX_LABELS_MAGIC:
            raise FormatError(f"{path}: bad IDX label magic {magic:#010x}")
        raw = fh.read(count)
    if len(raw) != count:
        raise FormatError(f"{path}: expected {count} label bytes")
    return np.frombuffer(raw, dtype=np.uint8).astype(np.int64)


def _idx_magic(path):
    with open(path, "rb") as fh:
        head = fh.read(4)
    return struct.unpack(">I", head)[0] if len(head) == 4 else None


def _find_idx_pair(root):
    images = []
    labels = []
    for path in sorted(p for p in root.iterdir() if p.is_file()):
        if path.name == "manifest.json":
            continue
        magic = _idx_magic(path)
        if magic == IDX_IMAGES_MAGIC:
            images.append(path)
        elif magic == IDX_LABELS_MAGIC:
            labels.append(path)
    if len(images) != 1 or len(labels) != 1:
        raise FormatError(
            f"{root}: need exactly one IDX image file and one label file, "
            f"found {len(images)}/{len(labels)}")
    return images[0], labels[0]


def load_idx(root):
    image_path, label_path = _find_idx_pair(Path(root))
    images = _read_idx_images(image_path)
    labels = _read_idx_labels(label_path)
    if len(images) != len(labels):
        raise FormatError(f"{root}: {len(images)} images but {len(labels)} labels")
    names = tuple(str(d) for d in range(10))
    return images, labels, names


def load_cifar_bin(root):
    root = Path(root)
    paths = sorted(root.glob("*.bin"))
    if not paths:
        raise FormatError(f"{root}: no .bin batch files")
    records = []
    for path in paths:
        raw = path.read_bytes()
        if len(raw) == 0 or len(raw) % CIFAR_RECORD:
            raise FormatError(f"{path}: size is not a positive multiple of {CIFAR_RECORD}")
        records.append(np.frombuffer(raw, dtype=np.uint8).reshape(-1, CIFAR_RECORD))
    table = np.concatenate(records)
    labels = table[:, 0].astype(np.int64)
    if labels.max(initial=0) > 9:
        raise FormatError(f"{root}: label {labels.max()} out of range")
    images = table[:, 1:].reshape(-1, 3, 32, 32)
    meta = root / "batches.meta.txt"
    if meta.exists():
        names = tuple(line for line in meta.read_text().splitlines() if line)
    else:
        names = tuple(str(d) for d in range(10))
    return images, labels, names


def load_image_dir(root):
    root = Path(root)
    classes = sorted(p.name for p in root.iterdir() if p.is_dir())
    if not classes:
        raise FormatError(f"{root}: no class subdirectories")
    stack = []
    labels = []
    for index, name in enumerate(classes):
        files = sorted(p for p in (root / name).iterdir() if p.is_file())
        if not files:
            raise FormatError(f"{root / name}: empty class directory")
        for path in files:
            pixels = read_pnm(path)
            if pixels.ndim == 2:
                pixels = pixels[np.newaxis]
            else:
                pixels = pixels.transpose(2, 0, 1)
            stack.append(pixels)
            labels.append(index)
    shapes = {a.shape for a in stack}
    if len(shapes) != 1:
        raise FormatError(f"{root}: mixed image shapes {sorted(shapes)}")
    return np.stack(stack), np.asarray(labels, dtype=np.int64), tuple(classes)


_LOADERS = {"idx": load_idx, "cifar_bin": load_cifar_bin, "image_dir": load_image_dir}


def detect_format(root):
    root = Path(root)
    manifest = root / "manifest.json"
    if manifest.exists():
        try:
            fmt = json.loads(manifest.read_text())["format"]
        except (json.JSONDecodeError, KeyError) as exc:
            raise FormatError(f"{manifest}: unreadable manifest") from exc
        if fmt not in _LOADERS:
            raise FormatError(f"{manifest}: unknown format {fmt!r}")
        return fmt
    files = [p for p in root.iterdir() if p.is_file()]
    if any(_idx_magic(p) == IDX_IMAGES_MAGIC for p in files):
        return "idx"
    if any(p.suffix == ".bin" for p in files):
        return "cifar_bin"
    if any(p.is_dir() for p in root.iterdir()):
        return "image_dir"
    raise FormatError(f"{root}: cannot determine dataset layout")


def load_dataset(root):
    """Load any supported layout; returns (images, labels, class_names)."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    return _LOADERS[detect_format(root)](root)
