"""The 59-value lesion descriptor.

Order: 5 asymmetry, 7 border, 24 color, 23 texture values.  The color
and texture groups are computed on the color-normalized image and only
ever read pixels inside the mask.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from lesioncad.imaging import InvalidInputError, RasterImage
from lesioncad.features.asymmetry import color_asymmetry, shape_asymmetry
from lesioncad.features.border import (
    border_geometry,
    fractal_dimension,
    jaworek_irregularity,
    pigmentation_transition,
)
from lesioncad.features.color import color_variegation, histogram_color_stats
from lesioncad.features.texture import glcm_features, glrlm_features

_COLOR_CHANNELS = ("r", "g", "b", "h", "s", "v")
_GLCM_PROPS = ("contrast", "correlation", "energy", "homogeneity")

FEATURE_NAMES: tuple[str, ...] = (
    (
        "shape_sym_rot180",
        "shape_sym_leftright",
        "shape_sym_topbottom",
        "color_chi2_leftright",
        "color_chi2_topbottom",
        "compactness",
        "fractal_dimension",
        "radial_variance",
        "edge_gradient_mean",
        "edge_gradient_var",
        "solidity",
        "border_extrema_count",
    )
    + tuple(f"{c}_{stat}" for c in _COLOR_CHANNELS for stat in ("mean", "variance", "skewness"))
    + tuple(f"{c}_log_cv" for c in _COLOR_CHANNELS)
    + tuple(f"glcm_{p}_{a}" for a in (0, 45, 90, 135) for p in _GLCM_PROPS)
    + ("glrlm_sre", "glrlm_lre", "glrlm_gln", "glrlm_rln", "glrlm_rp", "glrlm_lgre", "glrlm_hgre")
)

N_FEATURES = len(FEATURE_NAMES)
assert N_FEATURES == 59


@dataclass
class FeatureVector:
    """Ordered 59-slot descriptor; every value is finite."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (N_FEATURES,):
            raise InvalidInputError(f"expected {N_FEATURES} features")

    @property
    def names(self) -> tuple[str, ...]:
        return FEATURE_NAMES

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values.tolist()))


def extract_feature_vector(img: RasterImage, mask: np.ndarray) -> FeatureVector:
    """Compute the full descriptor for one segmented lesion.

    ``img`` should be the color-normalized image and ``mask`` the
    refined segmentation, both at the same size.  Non-finite values
    (possible only through degenerate inputs) are replaced by 0 with a
    warning.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("cannot extract features from an empty mask")
    if mask.shape != img.rgb.shape[:2]:
        raise InvalidInputError("mask and image dimensions differ")

    a1, a2, a3 = shape_asymmetry(mask)
    a4, a5 = color_asymmetry(img, mask)
    b1, b3, b6 = border_geometry(mask)
    b2 = fractal_dimension(mask)
    b4, b5 = pigmentation_transition(img, mask)
    b7 = jaworek_irregularity(mask)
    color = histogram_color_stats(img, mask) + color_variegation(img, mask)
    texture = glcm_features(img, mask) + glrlm_features(img, mask)

    values = np.array(
        [a1, a2, a3, a4, a5, b1, b2, b3, b4, b5, b6, b7] + color + texture,
        dtype=np.float64,
    )
    bad = ~np.isfinite(values)
    if bad.any():
        names = [FEATURE_NAMES[i] for i in np.nonzero(bad)[0]]
        warnings.warn(f"non-finite features replaced by 0: {names}", stacklevel=2)
        values[bad] = 0.0
    return FeatureVector(values)
