"""Border irregularity descriptors: compactness, fractal dimension,
radial variance, pigmentation transition, solidity and the stationary-
point count of the smoothed borderline distance function."""

from __future__ import annotations

import warnings

import numpy as np
from scipy import ndimage

from lesioncad.imaging import InvalidInputError, RasterImage
from lesioncad.features._geometry import (
    align_major_axis,
    boundary_pixels,
    component_masks,
    convex_hull,
    hull_pixel_count,
    mask_centroid,
    mask_perimeter,
    trace_contour,
)

BOX_SIZES = (2, 4, 8, 16, 32, 64)

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T


def border_geometry(mask: np.ndarray) -> tuple[float, float, float]:
    """(compactness, radial variance, solidity).

    Compactness is perimeter^2 / (4 pi area), 1 for a circle.  Radial
    variance is the variance of boundary-to-centroid distances over the
    squared mean distance.  Solidity is the mask area over its
    pixel-rasterized convex hull area.
    """
    mask = np.asarray(mask, dtype=bool)
    area = int(mask.sum())
    if area == 0:
        raise InvalidInputError("empty mask")
    if area == 1:
        return 1.0, 0.0, 1.0

    perimeter = mask_perimeter(mask)
    compactness = perimeter**2 / (4.0 * np.pi * area) if perimeter > 0 else 1.0

    bpix = boundary_pixels(mask)
    cx, cy = mask_centroid(mask)
    dists = np.hypot(bpix[:, 1] - cx, bpix[:, 0] - cy)
    mean_d = dists.mean()
    radial_var = float(((dists - mean_d) ** 2).mean() / mean_d**2) if mean_d > 0 else 0.0

    ys, xs = np.nonzero(mask)
    hull = convex_hull(np.column_stack([xs, ys]))
    if len(hull) < 3:
        solidity = 1.0
    else:
        solidity = area / hull_pixel_count(hull)
    return float(compactness), radial_var, float(solidity)


def fractal_dimension(mask: np.ndarray) -> float:
    """Box-counting dimension of the mask contour.

    Counts occupied boxes of sizes 2..64 on a grid anchored at the
    contour bounding box and returns the slope of log N against
    log(1/r).  Degenerate contours that never span two boxes give 0.
    """
    bpix = boundary_pixels(np.asarray(mask, dtype=bool))
    if bpix.shape[0] == 0:
        raise InvalidInputError("mask has no boundary pixels")
    ys = bpix[:, 0] - bpix[:, 0].min()
    xs = bpix[:, 1] - bpix[:, 1].min()
    counts = []
    for r in BOX_SIZES:
        boxes = set(zip((ys // r).tolist(), (xs // r).tolist()))
        counts.append(len(boxes))
    if max(counts) < 2:
        warnings.warn("degenerate contour for box counting", stacklevel=2)
        return 0.0
    log_inv_r = np.log(1.0 / np.asarray(BOX_SIZES, dtype=np.float64))
    log_n = np.log(np.asarray(counts, dtype=np.float64))
    slope = np.polyfit(log_inv_r, log_n, 1)[0]
    return float(slope)


def pigmentation_transition(img: RasterImage, mask: np.ndarray) -> tuple[float, float]:
    """Mean and variance of the Sobel gradient magnitude of the mean-RGB
    luminance, evaluated at the mask boundary pixels."""
    mask = np.asarray(mask, dtype=bool)
    bpix = boundary_pixels(mask)
    if bpix.shape[0] == 0:
        raise InvalidInputError("mask has no boundary pixels")
    lum = img.rgb.astype(np.float64).mean(axis=2)
    gx = ndimage.correlate(lum, SOBEL_X, mode="nearest")
    gy = ndimage.correlate(lum, SOBEL_Y, mode="nearest")
    magnitude = np.hypot(gx, gy)
    e = magnitude[bpix[:, 0], bpix[:, 1]]
    mean = float(e.mean())
    variance = float((e**2).mean() - mean**2)
    return mean, max(variance, 0.0)


def _borderline_function(contour: list[tuple[int, int]]) -> np.ndarray:
    """Distance of each contour pixel to the nearest bounding-box side."""
    arr = np.asarray(contour, dtype=np.float64)
    y0, x0 = arr.min(axis=0)
    y1, x1 = arr.max(axis=0)
    return np.minimum.reduce(
        [arr[:, 1] - x0, x1 - arr[:, 1], arr[:, 0] - y0, y1 - arr[:, 0]]
    )


def _smooth_cyclic(values: np.ndarray, window: int) -> np.ndarray:
    kernel = np.ones(window) / window
    padded = np.concatenate([values[-(window // 2):], values, values[: window // 2]])
    smoothed = np.convolve(padded, kernel, mode="valid")
    return smoothed[: values.size]


def _count_sign_changes(diff: np.ndarray) -> int:
    # The borderline function is integer valued, so any true nonzero
    # difference of window means is at least 1/window; snap summation
    # dust below that to exact zero before reading signs.
    signs = np.sign(np.where(np.abs(diff) <= 1e-9, 0.0, diff))
    nonzero = signs[signs != 0]
    if nonzero.size < 2:
        return 0
    changes = int((nonzero[1:] != nonzero[:-1]).sum())
    # The sequence is cyclic: compare last against first as well.
    if nonzero[-1] != nonzero[0]:
        changes += 1
    return changes


def jaworek_irregularity(mask: np.ndarray) -> float:
    """Count of stationary points of the smoothed borderline function.

    The mask is aligned major-axis horizontal, the largest component's
    contour is traced clockwise from its leftmost-topmost pixel, each
    contour pixel is mapped to its distance to the nearest bounding-box
    side, the sequence is smoothed by a cyclic moving average of width
    max(5, 5% of the contour length), and sign changes of the first
    difference are counted.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    aligned = align_major_axis(mask)
    if not aligned.any():
        return 0.0
    largest = component_masks(aligned)[0]
    contour = trace_contour(largest)
    window = max(5, int(round(0.05 * len(contour))))
    if len(contour) <= window:
        return 0.0
    # Start at the leftmost (then topmost) pixel; cyclic rotation only.
    arr = np.asarray(contour)
    order = np.lexsort((arr[:, 0], arr[:, 1]))
    start = int(order[0])
    rotated = contour[start:] + contour[:start]
    f = _borderline_function(rotated)
    smoothed = _smooth_cyclic(f, window)
    diff = np.diff(smoothed, append=smoothed[:1])
    return float(_count_sign_changes(diff))
