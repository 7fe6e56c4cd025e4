"""Modulus-maxima edge enhancement.

Per channel plane: Gaussian smoothing, one Haar level, per-pixel gradient
modulus and angle from the x/y detail subbands, non-maximal suppression
along the quantized gradient direction, thresholding, then reconstruction
from the surviving detail coefficients together with the untouched
approximation subband.

The gradient convention: W^x is ``detail_x`` (high-pass along rows), W^y is
``detail_y``; modulus = sqrt(Wx^2 + Wy^2) and angle = atan2(Wy, Wx), with
angle 0 where the modulus vanishes.  Suppression quantizes the angle,
folded modulo pi, into four half-open bins of width pi/4 centered on 0,
pi/4, pi/2, and 3pi/4, and keeps a pixel only when its modulus strictly
exceeds both neighbors along that direction.  Pixels on the subband border
are never kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dwt import CoeffQuad, dwt2_level, idwt2_level
from .errors import ParameterError
from .image import Image, smooth_plane

_PI8 = np.pi / 8.0

# quantized direction -> the two neighbor offsets (drow, dcol) compared against
_NEIGHBORS = {
    0: ((0, -1), (0, 1)),    # gradient along x
    1: ((1, 1), (-1, -1)),   # gradient along the main diagonal
    2: ((-1, 0), (1, 0)),    # gradient along y
    3: ((1, -1), (-1, 1)),   # gradient along the anti-diagonal
}


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradient modulus (non-negative) and angle in (-pi, pi]."""

    modulus: np.ndarray
    angle: np.ndarray

    def __post_init__(self):
        if self.modulus.shape != self.angle.shape:
            raise ValueError(
                f"modulus/angle shapes differ: {self.modulus.shape} vs {self.angle.shape}"
            )


@dataclass(frozen=True)
class EdgeMap:
    """Retained maxima: modulus values where kept, zero elsewhere."""

    values: np.ndarray

    @property
    def mask(self) -> np.ndarray:
        return self.values > 0


@dataclass(frozen=True)
class Threshold:
    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "fixed":
            if self.value < 0:
                raise ParameterError(f"fixed threshold must be >= 0, got {self.value}")
        elif self.kind == "quantile":
            if not 0 <= self.value < 1:
                raise ParameterError(f"quantile must be in [0, 1), got {self.value}")
        else:
            raise ParameterError(f"unknown threshold kind {self.kind!r}")

    @classmethod
    def fixed(cls, t: float) -> "Threshold":
        return cls("fixed", float(t))

    @classmethod
    def quantile(cls, q: float) -> "Threshold":
        return cls("quantile", float(q))

    @classmethod
    def parse(cls, text: str) -> "Threshold":
        """Parse 'fixed:T' or 'quantile:Q'."""
        kind, sep, value = text.partition(":")
        if not sep:
            raise ParameterError(f"threshold must look like 'fixed:T' or 'quantile:Q', got {text!r}")
        try:
            return cls(kind, float(value))
        except ValueError as exc:
            raise ParameterError(f"bad threshold value in {text!r}: {exc}") from None

    def __str__(self) -> str:
        return f"{self.kind}:{self.value:g}"


@dataclass(frozen=True)
class MMConfig:
    sigma: float = 1.0
    threshold: Threshold = Threshold("quantile", 0.75)
    injection: str = "mask_details"  # or "split_by_angle"

    def __post_init__(self):
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if self.injection not in ("mask_details", "split_by_angle"):
            raise ParameterError(
                f"injection must be 'mask_details' or 'split_by_angle', got {self.injection!r}"
            )


def gradient_field(quad: CoeffQuad) -> GradientField:
    """Modulus and four-quadrant angle of the (Wx, Wy) detail pair."""
    modulus = np.hypot(quad.detail_x, quad.detail_y)
    angle = np.arctan2(quad.detail_y, quad.detail_x)
    # atan2 maps (-0.0, negative) to -pi; fold onto +pi so angles stay in (-pi, pi]
    angle = np.where(angle <= -np.pi, np.pi, angle)
    return GradientField(modulus, angle)


def quantize_direction(angle: np.ndarray) -> np.ndarray:
    """Direction bins 0..3 (along x, main diagonal, y, anti-diagonal).

    The angle is folded modulo pi; each bin is the half-open interval
    [center - pi/8, center + pi/8) around its center.
    """
    folded = np.mod(angle, np.pi)
    bins = np.zeros(angle.shape, dtype=np.int8)
    bins[(folded >= _PI8) & (folded < 3 * _PI8)] = 1
    bins[(folded >= 3 * _PI8) & (folded < 5 * _PI8)] = 2
    bins[(folded >= 5 * _PI8) & (folded < 7 * _PI8)] = 3
    return bins


def nms(field: GradientField) -> EdgeMap:
    """Keep strict local maxima of the modulus along the quantized direction."""
    modulus = field.modulus
    h, w = modulus.shape
    bins = quantize_direction(field.angle)
    padded = np.pad(modulus, 1)

    def shifted(dr, dc):
        return padded[1 + dr:1 + dr + h, 1 + dc:1 + dc + w]

    retained = np.zeros((h, w), dtype=bool)
    for direction, ((r1, c1), (r2, c2)) in _NEIGHBORS.items():
        candidate = (modulus > shifted(r1, c1)) & (modulus > shifted(r2, c2))
        retained |= candidate & (bins == direction)
    retained[0, :] = retained[-1, :] = False
    retained[:, 0] = retained[:, -1] = False
    return EdgeMap(np.where(retained, modulus, 0.0))


def threshold(edges: EdgeMap, policy: Threshold) -> EdgeMap:
    """Zero retained values below the cutoff.

    fixed:T drops values < T; quantile:Q drops values below the Q-quantile
    of the nonzero values (an all-zero map passes through unchanged).
    """
    values = edges.values
    if policy.kind == "fixed":
        cutoff = policy.value
    else:
        nonzero = values[values > 0]
        if nonzero.size == 0:
            return EdgeMap(values.copy())
        cutoff = np.quantile(nonzero, policy.value)
    return EdgeMap(np.where(values < cutoff, 0.0, values))


def _inject(quad: CoeffQuad, kept: EdgeMap, angle: np.ndarray, mode: str) -> CoeffQuad:
    if mode == "mask_details":
        mask = kept.mask
        return CoeffQuad(
            approx=quad.approx,
            detail_x=np.where(mask, quad.detail_x, 0.0),
            detail_y=np.where(mask, quad.detail_y, 0.0),
            detail_diag=np.where(mask, quad.detail_diag, 0.0),
        )
    return CoeffQuad(
        approx=quad.approx,
        detail_x=kept.values * np.cos(angle),
        detail_y=kept.values * np.sin(angle),
        detail_diag=np.zeros_like(quad.detail_diag),
    )


def enhance_mm_plane(plane: np.ndarray, cfg: MMConfig) -> tuple[np.ndarray, list]:
    """Run the pipeline on one plane.

    Returns the final clamped plane and the ordered intermediate stages
    as (name, array) pairs, one entry per pipeline step.
    """
    smoothed = smooth_plane(plane, cfg.sigma)
    quad = dwt2_level(smoothed)
    field = gradient_field(quad)
    edges = nms(field)
    kept = threshold(edges, cfg.threshold)
    rebuilt = idwt2_level(_inject(quad, kept, field.angle, cfg.injection), plane.shape)
    final = np.clip(rebuilt, 0.0, 1.0)
    stages = [
        ("smoothed", smoothed),
        ("wx", quad.detail_x),
        ("wy", quad.detail_y),
        ("modulus", field.modulus),
        ("nms", edges.values),
        ("thresholded", kept.values),
        ("final", final),
    ]
    return final, stages


def enhance_mm(img: Image, cfg: MMConfig) -> Image:
    """Modulus-maxima enhancement of every channel plane independently."""
    return Image(np.stack([enhance_mm_plane(p, cfg)[0] for p in img.planes]))
