"""Shape and color asymmetry of the lesion mask.

Shape symmetry is the overlap ratio between the mask and a transformed
copy of itself (180-degree rotation, or mirroring across the centroid
after major-axis alignment).  Color asymmetry compares half-lesion RGB
histograms with the chi-square distance.
"""

from __future__ import annotations

import warnings

import numpy as np

from lesioncad.imaging import InvalidInputError, RasterImage
from lesioncad.features._geometry import (
    align_major_axis,
    center_on_canvas,
    mask_centroid,
)

CHI2_DISJOINT = 6.0  # three channels, two per fully disjoint histogram pair
HIST_BINS = 256


def _jaccard(a: np.ndarray, b: np.ndarray) -> float:
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 0.0
    return float(np.logical_and(a, b).sum() / union)


def _mirror_cols(mask: np.ndarray, doubled_center: int) -> np.ndarray:
    """Reflection x -> doubled_center - x.

    The reflection axis sits at doubled_center / 2, so it can fall
    between pixel columns; even-width symmetric shapes reflect onto the
    grid exactly.
    """
    w = mask.shape[1]
    src = doubled_center - np.arange(w)
    valid = (src >= 0) & (src < w)
    out = np.zeros_like(mask)
    out[:, valid] = mask[:, src[valid]]
    return out


def shape_asymmetry(mask: np.ndarray) -> tuple[float, float, float]:
    """Overlap ratios (rotational, left-right, top-bottom), each in [0, 1].

    The first compares the mask against its 180-degree rotation about
    the centroid; the other two compare the major-axis aligned mask
    against its mirror across the vertical, respectively horizontal,
    centroid line.  Reflection centers are discretized to half pixels.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    centered = center_on_canvas(mask)[0]
    cx, cy = mask_centroid(centered)
    rx, ry = int(round(2 * cx)), int(round(2 * cy))
    rotated = _mirror_cols(_mirror_cols(centered.T, ry).T, rx)
    sym_rot = _jaccard(centered, rotated)

    aligned = align_major_axis(mask)
    acx, acy = mask_centroid(aligned)
    sym_lr = _jaccard(aligned, _mirror_cols(aligned, int(round(2 * acx))))
    sym_tb = _jaccard(aligned, _mirror_cols(aligned.T, int(round(2 * acy))).T)
    return sym_rot, sym_lr, sym_tb


def _half_histogram(channel: np.ndarray, select: np.ndarray) -> np.ndarray:
    values = channel[select]
    bins = np.clip(np.floor(values * (HIST_BINS - 1) + 0.5), 0, HIST_BINS - 1)
    hist = np.bincount(bins.astype(np.int64), minlength=HIST_BINS).astype(np.float64)
    return hist / hist.sum()


def _chi_square(h1: np.ndarray, h2: np.ndarray) -> float:
    denom = h1 + h2
    num = (h1 - h2) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(denom > 0, num / np.where(denom > 0, denom, 1.0), 0.0)
    return float(terms.sum())


def color_asymmetry(img: RasterImage, mask: np.ndarray) -> tuple[float, float]:
    """Chi-square distance between half-lesion RGB histograms.

    After major-axis alignment the lesion is cut at the centroid; the
    summed per-channel distance between normalized 256-bin histograms of
    the two halves gives one value for left/right and one for
    top/bottom.  A half without lesion pixels yields the maximum
    disjoint value of 6.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    channels = [img.rgb[:, :, c].astype(np.float64) / 255.0 for c in range(3)]
    aligned = align_major_axis(mask, *channels)
    amask = aligned[0]
    achan = aligned[1:]
    cx, cy = mask_centroid(amask)
    rx, ry = int(round(2 * cx)), int(round(2 * cy))
    xs2 = 2 * np.arange(amask.shape[1])[None, :]
    ys2 = 2 * np.arange(amask.shape[0])[:, None]

    def distance(first: np.ndarray, second: np.ndarray) -> float:
        if not first.any() or not second.any():
            warnings.warn("empty lesion half; using maximum distance", stacklevel=3)
            return CHI2_DISJOINT
        total = 0.0
        for chan in achan:
            total += _chi_square(
                _half_histogram(chan, first), _half_histogram(chan, second)
            )
        return total

    # Cut on the half-pixel centroid line; a pixel column exactly on the
    # line belongs to neither half.
    left = amask & (xs2 < rx)
    right = amask & (xs2 > rx)
    top = amask & (ys2 < ry)
    down = amask & (ys2 > ry)
    return distance(left, right), distance(top, down)
