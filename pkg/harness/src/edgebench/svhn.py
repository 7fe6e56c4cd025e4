"""One-time converter from SVHN cropped-digit .mat files to a class tree.

The source stores images as X with shape (32, 32, 3, n) and labels as y in
1..10, where 10 stands for the digit zero.  Output is one subdirectory per
digit class 0-9 of binary PPM files, the layout the enhancement CLI reads
with --format image_dir.
"""
from pathlib import Path

import numpy as np
import scipy.io

from .errors import FormatError
from .pnm import write_ppm


def convert_svhn(source_file, out_root) -> dict[str, int]:
    """Convert one .mat file; returns per-class image counts."""
    try:
        # str() matters: loadmat reports a missing Path object as a generic
        # reader error instead of FileNotFoundError
        mat = scipy.io.loadmat(str(source_file))
    except FileNotFoundError:
        raise
    except Exception as exc:
        # loadmat's failure surface on corrupt bytes is wide (ValueError,
        # IndexError, EOFError, MatReadError, ...), so map it wholesale
        raise FormatError(f"{source_file}: not a readable .mat file: {exc}") from exc
    if "X" not in mat or "y" not in mat:
        raise FormatError(f"{source_file}: missing X or y variable")
    images = np.asarray(mat["X"])
    labels = np.asarray(mat["y"]).reshape(-1)
    if images.ndim != 4 or images.shape[:3] != (32, 32, 3):
        raise FormatError(f"{source_file}: X has shape {images.shape}, "
                          "expected (32, 32, 3, n)")
    if images.shape[3] != len(labels):
        raise FormatError(f"{source_file}: {images.shape[3]} images "
                          f"but {len(labels)} labels")
    if len(labels) and not (1 <= labels.min() and labels.max() <= 10):
        raise FormatError(f"{source_file}: labels outside 1..10")

    out_root = Path(out_root)
    counts = {str(d): 0 for d in range(10)}
    for d in counts:
        (out_root / d).mkdir(parents=True, exist_ok=True)
    digits = labels.astype(np.int64) % 10  # stored label 10 means digit 0
    for index, digit in enumerate(digits):
        name = str(int(digit))
        write_ppm(out_root / name / f"{index:06d}.ppm",
                  images[:, :, :, index].astype(np.uint8))
        counts[name] += 1
    return counts
