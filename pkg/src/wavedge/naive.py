"""Detail-only enhancement: decompose, zero the coarsest approximation, rebuild.

Dropping the coarsest approximation removes the lowest-frequency content,
leaving a reconstruction whose mass sits on intensity transitions.  The raw
result is signed and roughly zero-mean; ``enhance_naive`` maps it back into
[0, 1] according to the configured policy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dwt import decompose_plane, reconstruct_plane, CoeffPyramid
from .errors import ParameterError
from .image import Image, normalize_unit


@dataclass(frozen=True)
class NaiveConfig:
    levels: int = 2
    renormalize: str = "rescale"  # or "clamp"

    def __post_init__(self):
        if self.levels < 1:
            raise ParameterError(f"levels must be >= 1, got {self.levels}")
        if self.renormalize not in ("rescale", "clamp"):
            raise ParameterError(f"renormalize must be 'rescale' or 'clamp', got {self.renormalize!r}")


def _detail_only_plane(plane: np.ndarray, levels: int) -> np.ndarray:
    pyr = decompose_plane(plane, levels)
    hollowed = CoeffPyramid(
        pyr.details, np.zeros_like(pyr.coarsest_approx), pyr.original_shape
    )
    return reconstruct_plane(hollowed)


def enhance_naive_raw(img: Image, levels: int) -> Image:
    """The signed, unmapped reconstruction with the coarsest approximation zeroed."""
    return Image(np.stack([_detail_only_plane(p, levels) for p in img.planes]))


def enhance_naive(img: Image, cfg: NaiveConfig) -> Image:
    """Full pipeline: detail-only reconstruction, then output-map to [0, 1]."""
    raw = enhance_naive_raw(img, cfg.levels)
    return Image(normalize_unit(raw.planes, cfg.renormalize))
