"""Wavelet edge enhancement for image datasets."""

__version__ = "0.1.0"

from .errors import FormatError, ParameterError
from .image import Image, gaussian_smooth, normalize_unit
from .dwt import (
    CoeffPyramid,
    CoeffQuad,
    decompose,
    dwt2_level,
    idwt2_level,
    max_levels,
    reconstruct,
)
from .naive import NaiveConfig, enhance_naive
from .mm import EdgeMap, GradientField, MMConfig, Threshold, enhance_mm, gradient_field, nms
from .datasets import (
    DatasetManifest,
    LabeledImage,
    read_cifar_bin,
    read_idx,
    read_image_dir,
    write_enhanced,
)

__all__ = [
    "__version__",
    "FormatError",
    "ParameterError",
    "Image",
    "gaussian_smooth",
    "normalize_unit",
    "CoeffPyramid",
    "CoeffQuad",
    "decompose",
    "dwt2_level",
    "idwt2_level",
    "max_levels",
    "reconstruct",
    "NaiveConfig",
    "enhance_naive",
    "EdgeMap",
    "GradientField",
    "MMConfig",
    "Threshold",
    "enhance_mm",
    "gradient_field",
    "nms",
    "DatasetManifest",
    "LabeledImage",
    "read_cifar_bin",
    "read_idx",
    "read_image_dir",
    "write_enhanced",
]
