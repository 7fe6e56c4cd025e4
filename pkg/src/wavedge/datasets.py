"""Labeled-dataset readers and writers.

Three on-disk layouts are understood:

* ``idx``: the big-endian IDX pair (images magic 0x00000803, labels magic
  0x00000801) used by MNIST-style datasets.
* ``cifar_bin``: 3073-byte records, one label byte followed by 3072
  channel-planar RGB bytes (row-major 32x32 planes).
* ``image_dir``: one subdirectory per class holding binary P5/P6 files;
  the class index is the lexicographic rank of the subdirectory name.

Readers hand back a manifest plus a lazy item stream, so memory stays
bounded by the images actually in flight.  ``write_enhanced`` persists a
stream in the source format (or as an image_dir) and always drops a
``manifest.json`` recording the enhancement configuration next to the data.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FormatError
from .image import Image, from_u8, to_u8, u8_from_unit
from .pnm import read_pnm, write_pnm

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801
CIFAR_RECORD_BYTES = 3073
CIFAR_CLASSES = (
    "airplane", "automobile", "bird", "cat", "deer",
    "dog", "frog", "horse", "ship", "truck",
)
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class LabeledImage:
    image: Image
    label: int


@dataclass(frozen=True)
class DatasetManifest:
    format: str                      # idx | cifar_bin | image_dir
    image_shape: tuple               # (width, height, channels)
    num_items: int
    label_names: tuple
    source_paths: tuple
    records_per_file: tuple = field(default=())  # cifar_bin only

    def check_label(self, label: int) -> int:
        if not 0 <= label < len(self.label_names):
            raise FormatError(f"label {label} outside [0, {len(self.label_names)})")
        return label


# ---------------------------------------------------------------------------
# IDX
# ---------------------------------------------------------------------------

def _read_idx_headers(images_path, labels_path):
    size = os.path.getsize(images_path)
    if size < 16:
        raise FormatError(f"{images_path}: truncated IDX image header")
    with open(images_path, "rb") as fh:
        magic, count, rows, cols = struct.unpack(">IIII", fh.read(16))
    if magic != IDX_IMAGE_MAGIC:
        raise FormatError(f"{images_path}: bad magic 0x{magic:08x}, expected 0x{IDX_IMAGE_MAGIC:08x}")
    if size != 16 + count * rows * cols:
        raise FormatError(f"{images_path}: {size} bytes, expected {16 + count * rows * cols}")

    lsize = os.path.getsize(labels_path)
    if lsize < 8:
        raise FormatError(f"{labels_path}: truncated IDX label header")
    with open(labels_path, "rb") as fh:
        lmagic, lcount = struct.unpack(">II", fh.read(8))
    if lmagic != IDX_LABEL_MAGIC:
        raise FormatError(f"{labels_path}: bad magic 0x{lmagic:08x}, expected 0x{IDX_LABEL_MAGIC:08x}")
    if lsize != 8 + lcount:
        raise FormatError(f"{labels_path}: {lsize} bytes, expected {8 + lcount}")
    if count != lcount:
        raise FormatError(f"image count {count} != label count {lcount}")
    return count, rows, cols


def read_idx(images_path, labels_path):
    """Parse an IDX image/label pair; returns (manifest, lazy item stream)."""
    count, rows, cols = _read_idx_headers(images_path, labels_path)
    manifest = DatasetManifest(
        format="idx",
        image_shape=(cols, rows, 1),
        num_items=count,
        label_names=tuple(str(d) for d in range(10)),
        source_paths=(str(images_path), str(labels_path)),
    )

    def items():
        record = rows * cols
        with open(images_path, "rb") as fi, open(labels_path, "rb") as fl:
            fi.seek(16)
            fl.seek(8)
            for _ in range(count):
                buf = fi.read(record)
                label = fl.read(1)
                yield LabeledImage(from_u8(buf, cols, rows, 1), manifest.check_label(label[0]))

    return manifest, items()


def write_idx(items, manifest: DatasetManifest, images_path, labels_path) -> int:
    """Write a stream as an IDX pair with the same header layout as the source."""
    w, h, _ = manifest.image_shape
    written = 0
    with open(images_path, "wb") as fi, open(labels_path, "wb") as fl:
        fi.write(struct.pack(">IIII", IDX_IMAGE_MAGIC, manifest.num_items, h, w))
        fl.write(struct.pack(">II", IDX_LABEL_MAGIC, manifest.num_items))
        for item in items:
            fi.write(to_u8(item.image).tobytes(order="C"))
            fl.write(bytes([item.label]))
            written += 1
    if written != manifest.num_items:
        raise FormatError(f"stream yielded {written} items, manifest says {manifest.num_items}")
    return written


# ---------------------------------------------------------------------------
# CIFAR-10 binary
# ---------------------------------------------------------------------------

def _cifar_label_names(first_path) -> tuple:
    meta = Path(first_path).parent / "batches.meta.txt"
    if meta.is_file():
        names = [line.strip() for line in meta.read_text().splitlines() if line.strip()]
        if len(names) >= 10:
            return tuple(names[:10])
    return CIFAR_CLASSES


def read_cifar_bin(paths):
    """Parse CIFAR-10 binary batch files; returns (manifest, lazy item stream)."""
    paths = [str(p) for p in paths]
    if not paths:
        raise FormatError("no CIFAR batch files given")
    counts = []
    for path in paths:
        size = os.path.getsize(path)
        if size == 0 or size % CIFAR_RECORD_BYTES != 0:
            raise FormatError(
                f"{path}: {size} bytes is not a positive multiple of {CIFAR_RECORD_BYTES}"
            )
        counts.append(size // CIFAR_RECORD_BYTES)
    manifest = DatasetManifest(
        format="cifar_bin",
        image_shape=(32, 32, 3),
        num_items=sum(counts),
        label_names=_cifar_label_names(paths[0]),
        source_paths=tuple(paths),
        records_per_file=tuple(counts),
    )

    def items():
        for path, n in zip(paths, counts):
            with open(path, "rb") as fh:
                for _ in range(n):
                    record = fh.read(CIFAR_RECORD_BYTES)
                    label = manifest.check_label(record[0])
                    planes = np.frombuffer(record, dtype=np.uint8, offset=1)
                    planes = planes.reshape(3, 32, 32).astype(np.float64) / 255.0
                    yield LabeledImage(Image(planes), label)

    return manifest, items()


def write_cifar_bin(items, manifest: DatasetManifest, out_paths) -> int:
    """Write a stream back into CIFAR binary files, preserving per-file counts."""
    counts = manifest.records_per_file or (manifest.num_items,)
    if len(out_paths) != len(counts):
        raise FormatError(f"{len(out_paths)} output files for {len(counts)} source files")
    written = 0
    stream = iter(items)
    for path, n in zip(out_paths, counts):
        with open(path, "wb") as fh:
            for _ in range(n):
                item = next(stream)
                fh.write(bytes([item.label]))
                fh.write(u8_from_unit(item.image.planes).tobytes(order="C"))
                written += 1
    return written


# ---------------------------------------------------------------------------
# image_dir
# ---------------------------------------------------------------------------

def _scan_image_dir(root: Path):
    classes = sorted(p.name for p in root.iterdir() if p.is_dir())
    if not classes:
        raise FormatError(f"{root}: no class subdirectories")
    files_by_class = []
    for name in classes:
        files = sorted(
            p for p in (root / name).iterdir()
            if p.suffix.lower() in (".pgm", ".ppm")
        )
        if not files:
            raise FormatError(f"{root / name}: class directory holds no P5/P6 files")
        files_by_class.append(files)
    return classes, files_by_class


def read_image_dir(root):
    """Parse a class-per-subdirectory tree of P5/P6 files."""
    root = Path(root)
    if not root.is_dir():
        raise FormatError(f"{root}: not a directory")
    classes, files_by_class = _scan_image_dir(root)
    first = read_pnm(files_by_class[0][0])
    shape = (first.width, first.height, first.channels)
    manifest = DatasetManifest(
        format="image_dir",
        image_shape=shape,
        num_items=sum(len(f) for f in files_by_class),
        label_names=tuple(classes),
        source_paths=(str(root),),
    )

    def items():
        for label, files in enumerate(files_by_class):
            for path in files:
                img = read_pnm(path)
                if (img.width, img.height, img.channels) != shape:
                    raise FormatError(
                        f"{path}: shape {img.width}x{img.height}x{img.channels} "
                        f"differs from dataset shape {shape[0]}x{shape[1]}x{shape[2]}"
                    )
                yield LabeledImage(img, label)

    return manifest, items()


def write_image_dir(items, manifest: DatasetManifest, out_root) -> int:
    out_root = Path(out_root)
    suffix = ".pgm" if manifest.image_shape[2] == 1 else ".ppm"
    made = set()
    written = 0
    for index, item in enumerate(items):
        name = manifest.label_names[item.label]
        if name not in made:
            # only classes that actually occur; empty class dirs are unreadable
            (out_root / name).mkdir(parents=True, exist_ok=True)
            made.add(name)
        write_pnm(out_root / name / f"{index:06d}{suffix}", item.image)
        written += 1
    return written


# ---------------------------------------------------------------------------
# Enhanced-dataset emission
# ---------------------------------------------------------------------------

def write_enhanced(items, manifest: DatasetManifest, out_root, codec: str = "same",
                   enhancement: dict | None = None) -> dict:
    """Persist a (possibly transformed) stream plus its provenance manifest.

    codec "same" mirrors the source layout (IDX pair, CIFAR bin files, or
    class directories); codec "image_dir" always writes class directories.
    Returns the manifest dictionary that was written to manifest.json.
    """
    if codec not in ("same", "image_dir"):
        raise FormatError(f"unknown codec {codec!r}")
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    target = manifest.format if codec == "same" else "image_dir"

    if target == "idx":
        names = [Path(p).name for p in manifest.source_paths] or \
            ["images-idx3-ubyte", "labels-idx1-ubyte"]
        written = write_idx(items, manifest, out_root / names[0], out_root / names[1])
    elif target == "cifar_bin":
        names = [Path(p).name for p in manifest.source_paths] or ["data.bin"]
        written = write_cifar_bin(items, manifest, [out_root / n for n in names])
    else:
        written = write_image_dir(items, manifest, out_root)

    if written != manifest.num_items:
        raise FormatError(f"stream yielded {written} items, manifest says {manifest.num_items}")

    record = {
        "format": target,
        "shape": list(manifest.image_shape),
        "count": manifest.num_items,
        "classes": list(manifest.label_names),
        "enhancement": enhancement or {"method": "identity", "params": {}},
        "tool_version": __version__,
    }
    with open(out_root / MANIFEST_NAME, "w") as fh:
        json.dump(record, fh, indent=2)
    return record
