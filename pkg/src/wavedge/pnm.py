"""Binary portable graymap (P5) and pixmap (P6) files, maxval 255 only."""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .image import Image, from_u8, to_u8


def _read_header_token(fh) -> bytes:
    token = b""
    while True:
        ch = fh.read(1)
        if not ch:
            raise FormatError("unexpected end of file in header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = fh.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def read_pnm(path) -> Image:
    """Read a binary P5/P6 file into an Image."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
        if magic == b"P5":
            channels = 1
        elif magic == b"P6":
            channels = 3
        else:
            raise FormatError(f"{path}: not a binary P5/P6 file (magic {magic!r})")
        try:
            width = int(_read_header_token(fh))
            height = int(_read_header_token(fh))
            maxval = int(_read_header_token(fh))
        except ValueError as exc:
            raise FormatError(f"{path}: malformed header: {exc}") from None
        if maxval != 255:
            raise FormatError(f"{path}: unsupported maxval {maxval} (only 255)")
        payload = fh.read(width * height * channels)
    if len(payload) != width * height * channels:
        raise FormatError(f"{path}: truncated pixel data")
    return from_u8(payload, width, height, channels)


def encode_pnm(img: Image) -> bytes:
    """Serialize an Image as P5 (one channel) or P6 (three channels)."""
    pixels = to_u8(img)
    magic = b"P5" if img.channels == 1 else b"P6"
    header = magic + f"\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + pixels.tobytes(order="C")


def write_pnm(path, img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pnm(img))


def write_plane_pnm(path, values: np.ndarray, rescale: bool = True) -> None:
    """Dump one real-valued plane as a graymap for visual inspection.

    With rescale, [min, max] maps affinely onto [0, 255] (a constant plane
    maps to black); otherwise values are assumed to already sit in [0, 1].
    """
    values = np.asarray(values, dtype=np.float64)
    if rescale:
        lo = values.min()
        span = values.max() - lo
        values = (values - lo) / span if span > 0 else np.zeros_like(values)
    write_pnm(path, Image.from_plane(np.clip(values, 0.0, 1.0)))
