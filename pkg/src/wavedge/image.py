"""Core image type, 8-bit conversion, and Gaussian smoothing.

Images are real-valued, channel-planar arrays of shape (channels, height,
width) with a nominal value range of [0, 1].  Everything downstream (the
wavelet transforms and both enhancement pipelines) operates on these planes,
one channel at a time.  All functions here are pure: inputs are never
mutated and results are freshly allocated, so values are safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import FormatError, ParameterError


@dataclass(frozen=True)
class Image:
    """A real-valued image: float64 planes of shape (channels, height, width).

    Treat the underlying array as immutable once the Image is constructed.
    """

    planes: np.ndarray

    def __post_init__(self):
        planes = np.asarray(self.planes, dtype=np.float64)
        if planes.ndim != 3:
            raise ValueError(f"planes must be 3-D (channels, height, width), got ndim={planes.ndim}")
        c, h, w = planes.shape
        if c not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {c}")
        if h < 1 or w < 1:
            raise ValueError(f"image dimensions must be >= 1, got {h}x{w}")
        if not np.all(np.isfinite(planes)):
            raise ValueError("image data contains NaN or infinity")
        object.__setattr__(self, "planes", planes)

    @property
    def channels(self) -> int:
        return self.planes.shape[0]

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @classmethod
    def from_plane(cls, plane: np.ndarray) -> "Image":
        """Wrap a single 2-D array as a one-channel image."""
        plane = np.asarray(plane, dtype=np.float64)
        if plane.ndim != 2:
            raise ValueError(f"expected a 2-D plane, got ndim={plane.ndim}")
        return cls(plane[np.newaxis, :, :])

    def plane(self, index: int = 0) -> np.ndarray:
        """One channel plane as a 2-D array."""
        return self.planes[index]


def unit_from_u8(values: np.ndarray) -> np.ndarray:
    """Map 8-bit values to [0, 1] reals: b -> b / 255."""
    return np.asarray(values, dtype=np.float64) / 255.0


def u8_from_unit(values: np.ndarray) -> np.ndarray:
    """Map reals to 8-bit: round-half-up of clamp(v, 0, 1) * 255."""
    clamped = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.floor(clamped * 255.0 + 0.5).astype(np.uint8)


def from_u8(buf, width: int, height: int, channels: int) -> Image:
    """Decode interleaved 8-bit pixels (row-major, pixel-major) into an Image.

    Raises FormatError if the buffer length does not match
    width * height * channels.
    """
    data = np.frombuffer(bytes(buf), dtype=np.uint8) if isinstance(buf, (bytes, bytearray, memoryview)) \
        else np.asarray(buf, dtype=np.uint8).ravel()
    expected = width * height * channels
    if data.size != expected:
        raise FormatError(
            f"pixel buffer has {data.size} bytes, expected {expected} "
            f"({width}x{height}x{channels})"
        )
    interleaved = unit_from_u8(data).reshape(height, width, channels)
    return Image(np.ascontiguousarray(interleaved.transpose(2, 0, 1)))


def to_u8(img: Image) -> np.ndarray:
    """Encode an Image as interleaved 8-bit pixels of shape (height, width, channels).

    Values outside [0, 1] saturate; ties round up (0.5 * 255 -> 128).
    """
    return np.ascontiguousarray(u8_from_unit(img.planes).transpose(1, 2, 0))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled Gaussian taps with radius ceil(3*sigma), renormalized to sum 1."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(k * k) / (2.0 * sigma * sigma))
    return taps / taps.sum()


def smooth_plane(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing of one plane with edge-replicated borders."""
    taps = gaussian_kernel(sigma)
    out = correlate1d(np.asarray(plane, dtype=np.float64), taps, axis=1, mode="nearest")
    return correlate1d(out, taps, axis=0, mode="nearest")


def gaussian_smooth(img: Image, sigma: float) -> Image:
    """Smooth every channel plane independently; dimensions are preserved."""
    return Image(np.stack([smooth_plane(p, sigma) for p in img.planes]))


def normalize_unit(values: np.ndarray, mode: str = "rescale") -> np.ndarray:
    """Map raw reals into [0, 1].

    "rescale" affinely maps [min, max] to [0, 1] (a constant array maps to
    zeros); "clamp" clips to [0, 1].
    """
    values = np.asarray(values, dtype=np.float64)
    if mode == "clamp":
        return np.clip(values, 0.0, 1.0)
    if mode == "rescale":
        lo = values.min()
        span = values.max() - lo
        if span <= 1e-300:
            return np.zeros_like(values)
        return (values - lo) / span
    raise ParameterError(f"unknown output mapping {mode!r} (expected 'rescale' or 'clamp')")
