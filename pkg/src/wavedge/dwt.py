"""Orthonormal Haar discrete wavelet transform, 1-D and separable 2-D.

Conventions, pinned once and relied on everywhere:

* Analysis pair per adjacent-sample pair (x0, x1):
  approx = (x0 + x1) / sqrt(2), detail = (x0 - x1) / sqrt(2).
* 2-D transform runs along rows (the x axis) first, then along columns.
* Subbands are named by derivative axis: ``detail_x`` is high-pass along
  rows + low-pass along columns (it responds to variation *along x*, i.e.
  to vertical edges), ``detail_y`` the transpose case, ``detail_diag``
  high-pass along both.
* Odd dimensions are extended by one replicated sample on the high side
  before transforming; the inverse strips the pad, so reconstruction is
  exact for every shape.  Subband dimensions are ceil(n / 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .image import Image

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class CoeffQuad:
    """One decomposition level: approximation plus the three detail subbands."""

    approx: np.ndarray
    detail_x: np.ndarray
    detail_y: np.ndarray
    detail_diag: np.ndarray

    def __post_init__(self):
        shape = self.approx.shape
        for band in (self.detail_x, self.detail_y, self.detail_diag):
            if band.shape != shape:
                raise ValueError(f"subband shapes differ: {band.shape} vs {shape}")


@dataclass(frozen=True)
class CoeffPyramid:
    """A J-level decomposition of one plane.

    ``details`` holds (detail_x, detail_y, detail_diag) triples ordered
    finest-first; ``coarsest_approx`` is the approximation left after the
    last level.  ``original_shape`` is (height, width) of the input plane;
    every intermediate shape follows from it by repeated ceil-halving.
    """

    details: tuple
    coarsest_approx: np.ndarray
    original_shape: tuple

    @property
    def levels(self) -> int:
        return len(self.details)


def haar_fwd_1d(signal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Single-level Haar analysis of an even-length signal.

    Returns (approx, detail), each half the input length.
    """
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim != 1 or signal.size < 2 or signal.size % 2 != 0:
        raise ValueError(f"signal length must be even and >= 2, got shape {signal.shape}")
    even, odd = signal[0::2], signal[1::2]
    return (even + odd) / _SQRT2, (even - odd) / _SQRT2


def haar_inv_1d(approx: np.ndarray, detail: np.ndarray) -> np.ndarray:
    """Exact inverse of haar_fwd_1d."""
    approx = np.asarray(approx, dtype=np.float64)
    detail = np.asarray(detail, dtype=np.float64)
    if approx.shape != detail.shape or approx.ndim != 1:
        raise ValueError(f"approx/detail shapes differ: {approx.shape} vs {detail.shape}")
    out = np.empty(2 * approx.size, dtype=np.float64)
    out[0::2] = (approx + detail) / _SQRT2
    out[1::2] = (approx - detail) / _SQRT2
    return out


def _pad_even(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    if h % 2 or w % 2:
        plane = np.pad(plane, ((0, h % 2), (0, w % 2)), mode="edge")
    return plane


def dwt2_level(plane: np.ndarray) -> CoeffQuad:
    """One level of the separable 2-D Haar transform (rows, then columns)."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got ndim={plane.ndim}")
    h, w = plane.shape
    if h < 2 or w < 2:
        raise ValueError(f"plane must be at least 2x2, got {h}x{w}")
    plane = _pad_even(plane)

    lo = (plane[:, 0::2] + plane[:, 1::2]) / _SQRT2
    hi = (plane[:, 0::2] - plane[:, 1::2]) / _SQRT2
    return CoeffQuad(
        approx=(lo[0::2, :] + lo[1::2, :]) / _SQRT2,
        detail_y=(lo[0::2, :] - lo[1::2, :]) / _SQRT2,
        detail_x=(hi[0::2, :] + hi[1::2, :]) / _SQRT2,
        detail_diag=(hi[0::2, :] - hi[1::2, :]) / _SQRT2,
    )


def idwt2_level(quad: CoeffQuad, target_shape: tuple) -> np.ndarray:
    """Invert one 2-D level, cropping any pad samples to ``target_shape``."""
    h, w = target_shape
    qh, qw = quad.approx.shape
    if qh != (h + 1) // 2 or qw != (w + 1) // 2:
        raise ValueError(
            f"subband shape {qh}x{qw} inconsistent with target {h}x{w}"
        )
    lo = np.empty((2 * qh, qw), dtype=np.float64)
    hi = np.empty((2 * qh, qw), dtype=np.float64)
    lo[0::2, :] = (quad.approx + quad.detail_y) / _SQRT2
    lo[1::2, :] = (quad.approx - quad.detail_y) / _SQRT2
    hi[0::2, :] = (quad.detail_x + quad.detail_diag) / _SQRT2
    hi[1::2, :] = (quad.detail_x - quad.detail_diag) / _SQRT2

    out = np.empty((2 * qh, 2 * qw), dtype=np.float64)
    out[:, 0::2] = (lo + hi) / _SQRT2
    out[:, 1::2] = (lo - hi) / _SQRT2
    return out[:h, :w]


def max_levels(shape: tuple) -> int:
    """Deepest decomposition the given (height, width) admits."""
    h, w = shape
    levels = 0
    while h >= 2 and w >= 2:
        levels += 1
        h, w = (h + 1) // 2, (w + 1) // 2
    return levels


def _level_input_shapes(original_shape: tuple, levels: int) -> list:
    """Shape of the plane entering each level: [s_0, ..., s_{J-1}]."""
    shapes = [tuple(original_shape)]
    for _ in range(levels - 1):
        h, w = shapes[-1]
        shapes.append(((h + 1) // 2, (w + 1) // 2))
    return shapes


def decompose_plane(plane: np.ndarray, levels: int) -> CoeffPyramid:
    """Multilevel decomposition of one plane; detail triples finest-first."""
    plane = np.asarray(plane, dtype=np.float64)
    feasible = max_levels(plane.shape)
    if levels < 1:
        raise ParameterError(f"levels must be >= 1, got {levels}")
    if levels > feasible:
        raise ParameterError(
            f"levels={levels} infeasible for a {plane.shape[0]}x{plane.shape[1]} plane; "
            f"max feasible is {feasible}"
        )
    details = []
    current = plane
    for _ in range(levels):
        quad = dwt2_level(current)
        details.append((quad.detail_x, quad.detail_y, quad.detail_diag))
        current = quad.approx
    return CoeffPyramid(tuple(details), current, plane.shape)


def reconstruct_plane(pyramid: CoeffPyramid) -> np.ndarray:
    """Exact inverse of decompose_plane (no clamping; raw real output)."""
    shapes = _level_input_shapes(pyramid.original_shape, pyramid.levels)
    current = pyramid.coarsest_approx
    for level in range(pyramid.levels - 1, -1, -1):
        dx, dy, dd = pyramid.details[level]
        current = idwt2_level(CoeffQuad(current, dx, dy, dd), shapes[level])
    return current


def decompose(img: Image, levels: int) -> list:
    """Per-channel multilevel decomposition; one CoeffPyramid per plane."""
    return [decompose_plane(p, levels) for p in img.planes]


def reconstruct(pyramids: list) -> Image:
    """Rebuild an Image from per-channel pyramids (raw values, no clamping)."""
    return Image(np.stack([reconstruct_plane(p) for p in pyramids]))


def energy(values: np.ndarray) -> float:
    """Sum of squared values."""
    values = np.asarray(values, dtype=np.float64)
    return float(np.sum(values * values))


def pyramid_energy(pyramid: CoeffPyramid) -> float:
    """Total energy of every coefficient in the pyramid."""
    total = energy(pyramid.coarsest_approx)
    for dx, dy, dd in pyramid.details:
        total += energy(dx) + energy(dy) + energy(dd)
    return total
