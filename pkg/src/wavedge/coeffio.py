"""Binary subband dumps: WVQ1 files plus a JSON sidecar.

A WVQ1 file holds one subband: magic ``WVQ1``, little-endian u32 width and
height, then float64 little-endian values in row-major order.  A dump of a
whole pyramid is one file per subband per channel plus ``coeffs.json``
listing levels, shapes, and file names.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .dwt import CoeffPyramid
from .errors import FormatError

MAGIC = b"WVQ1"
SIDECAR_NAME = "coeffs.json"


def write_subband(path, values: np.ndarray) -> None:
    values = np.asarray(values, dtype=np.float64)
    h, w = values.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", w, h))
        fh.write(values.astype("<f8").tobytes(order="C"))


def read_subband(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        header = fh.read(8)
        if len(header) != 8:
            raise FormatError(f"{path}: truncated header")
        w, h = struct.unpack("<II", header)
        payload = fh.read(8 * w * h)
        if len(payload) != 8 * w * h:
            raise FormatError(f"{path}: truncated payload, expected {w}x{h} float64")
        return np.frombuffer(payload, dtype="<f8").reshape(h, w).copy()


def band_name(level: int, band: str, channel: int, channels: int) -> str:
    suffix = f"_c{channel}" if channels > 1 else ""
    return f"level{level}_{band}{suffix}.wvq"


def dump_pyramids(pyramids: list, out_dir) -> dict:
    """Write per-channel pyramids as WVQ1 files plus the JSON sidecar.

    Returns the sidecar dictionary.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    channels = len(pyramids)
    entries = []
    for ch, pyr in enumerate(pyramids):
        for level, (dx, dy, dd) in enumerate(pyr.details, start=1):
            for band, values in (("dx", dx), ("dy", dy), ("dd", dd)):
                name = band_name(level, band, ch, channels)
                write_subband(out_dir / name, values)
                entries.append({
                    "file": name, "channel": ch, "level": level, "band": band,
                    "width": values.shape[1], "height": values.shape[0],
                })
        name = band_name(pyr.levels, "approx", ch, channels)
        write_subband(out_dir / name, pyr.coarsest_approx)
        entries.append({
            "file": name, "channel": ch, "level": pyr.levels, "band": "approx",
            "width": pyr.coarsest_approx.shape[1],
            "height": pyr.coarsest_approx.shape[0],
        })
    sidecar = {
        "levels": pyramids[0].levels,
        "channels": channels,
        "original_width": pyramids[0].original_shape[1],
        "original_height": pyramids[0].original_shape[0],
        "subbands": entries,
    }
    with open(out_dir / SIDECAR_NAME, "w") as fh:
        json.dump(sidecar, fh, indent=2)
    return sidecar


def load_pyramids(dump_dir) -> list:
    """Inverse of dump_pyramids."""
    dump_dir = Path(dump_dir)
    with open(dump_dir / SIDECAR_NAME) as fh:
        sidecar = json.load(fh)
    levels = sidecar["levels"]
    shape = (sidecar["original_height"], sidecar["original_width"])
    arrays = {}
    for entry in sidecar["subbands"]:
        arrays[(entry["channel"], entry["level"], entry["band"])] = \
            read_subband(dump_dir / entry["file"])
    pyramids = []
    for ch in range(sidecar["channels"]):
        details = tuple(
            (arrays[(ch, lv, "dx")], arrays[(ch, lv, "dy")], arrays[(ch, lv, "dd")])
            for lv in range(1, levels + 1)
        )
        pyramids.append(CoeffPyramid(details, arrays[(ch, levels, "approx")], shape))
    return pyramids
