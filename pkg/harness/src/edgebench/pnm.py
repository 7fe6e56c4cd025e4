"""Minimal binary PGM/PPM codec (maxval 255 only)."""
import numpy as np

from .errors import FormatError


def _token(fh):
    tok = b""
    while True:
        ch = fh.read(1)
        if not ch:
            raise FormatError("truncated header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = fh.read(1)
            continue
        if ch.isspace():
            if tok:
                return tok
            continue
        tok += ch


def read_pnm(path):
    """Return uint8 pixels, shape (h, w) for P5 or (h, w, 3) for P6."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
        if magic not in (b"P5", b"P6"):
            raise FormatError(f"{path}: not a binary PGM/PPM")
        width, height, maxval = (int(_token(fh)) for _ in range(3))
        if maxval != 255:
            raise FormatError(f"{path}: unsupported maxval {maxval}")
        channels = 1 if magic == b"P5" else 3
        raw = fh.read(width * height * channels)
    if len(raw) != width * height * channels:
        raise FormatError(f"{path}: truncated pixel data")
    pixels = np.frombuffer(raw, dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return pixels.reshape(shape)


def write_ppm(path, pixels):
    """Write uint8 pixels of shape (h, w, 3) as binary P6."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3), got {pixels.shape}")
    height, width = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (width, height))
        fh.write(pixels.tobytes())
