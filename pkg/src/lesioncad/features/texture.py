"""Texture descriptors from gray-level co-occurrence and run-length
matrices over the lesion region.

The mean-RGB grayscale is quantized to 8 levels over the lesion's own
min-max range; co-occurrence pairs and runs never cross the mask
boundary.
"""

from __future__ import annotations

import warnings

import numpy as np

from lesioncad.imaging import InvalidInputError, RasterImage

QUANT_LEVELS = 8

# Offsets (dy, dx) for the four orientations at distance 1.
GLCM_OFFSETS = {0: (0, 1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}
ANGLES = (0, 45, 90, 135)

# Scan directions used to enumerate runs per orientation.
_RUN_DIRECTIONS = {0: (0, 1), 45: (-1, 1), 90: (1, 0), 135: (1, 1)}


def quantize_gray(img: RasterImage, mask: np.ndarray, levels: int = QUANT_LEVELS) -> np.ndarray:
    """Quantize the mean-RGB grayscale to the given number of levels over
    the lesion's min-max range.  A constant region maps to level 0."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    gray = img.rgb.astype(np.float64).mean(axis=2)
    gmin = gray[mask].min()
    gmax = gray[mask].max()
    if gmax <= gmin:
        return np.zeros_like(gray, dtype=np.int64)
    q = np.floor((gray - gmin) / (gmax - gmin) * levels)
    return np.clip(q, 0, levels - 1).astype(np.int64)


def cooccurrence_matrix(
    levels: np.ndarray, mask: np.ndarray, angle: int, n_levels: int = QUANT_LEVELS
) -> np.ndarray:
    """Symmetric, normalized co-occurrence matrix at distance 1.

    Only pairs with both pixels inside the mask are counted.  Returns an
    all-zero matrix when no valid pair exists at this orientation.
    """
    dy, dx = GLCM_OFFSETS[angle]
    h, w = levels.shape
    y0s, y0e = max(0, -dy), min(h, h - dy)
    x0s, x0e = max(0, -dx), min(w, w - dx)
    a = levels[y0s:y0e, x0s:x0e]
    b = levels[y0s + dy : y0e + dy, x0s + dx : x0e + dx]
    valid = mask[y0s:y0e, x0s:x0e] & mask[y0s + dy : y0e + dy, x0s + dx : x0e + dx]
    counts = np.zeros((n_levels, n_levels), dtype=np.float64)
    np.add.at(counts, (a[valid], b[valid]), 1.0)
    counts = counts + counts.T
    total = counts.sum()
    if total == 0:
        return counts
    return counts / total


def glcm_properties(p: np.ndarray) -> tuple[float, float, float, float]:
    """(contrast, correlation, energy, homogeneity) of one normalized
    co-occurrence matrix; a degenerate matrix with zero marginal spread
    has correlation 0 by convention."""
    n = p.shape[0]
    i = np.arange(n, dtype=np.float64)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    contrast = float((p * (ii - jj) ** 2).sum())
    energy = float((p**2).sum())
    homogeneity = float((p / (1.0 + (ii - jj) ** 2)).sum())
    px = p.sum(axis=1)
    mu = float((i * px).sum())
    sigma2 = float((((i - mu) ** 2) * px).sum())
    if sigma2 <= 0:
        correlation = 0.0
    else:
        correlation = float(((ii * jj * p).sum() - mu * mu) / sigma2)
    return contrast, correlation, energy, homogeneity


def glcm_features(img: RasterImage, mask: np.ndarray) -> list[float]:
    """Sixteen values: (contrast, correlation, energy, homogeneity) for
    each of the four orientations, in the order 0, 45, 90, 135 degrees.

    An orientation with no valid pixel pair takes the constant-region
    convention (0, 0, 1, 1).
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.sum() < 2:
        raise InvalidInputError("need at least two lesion pixels")
    levels = quantize_gray(img, mask)
    out: list[float] = []
    for angle in ANGLES:
        p = cooccurrence_matrix(levels, mask, angle)
        if p.sum() == 0:
            warnings.warn(f"no valid pixel pairs at {angle} degrees", stacklevel=2)
            out.extend((0.0, 0.0, 1.0, 1.0))
        else:
            out.extend(glcm_properties(p))
    return out


def _scan_lines(shape: tuple[int, int], angle: int):
    """Yield the pixel (y, x) sequences that sweep the grid along the
    given orientation."""
    h, w = shape
    if angle == 0:
        for y in range(h):
            yield [(y, x) for x in range(w)]
    elif angle == 90:
        for x in range(w):
            yield [(y, x) for y in range(h)]
    elif angle == 45:
        # Up-right diagonals: y + x constant.
        for s in range(h + w - 1):
            line = []
            for y in range(min(s, h - 1), max(0, s - w + 1) - 1, -1):
                line.append((y, s - y))
            yield line
    elif angle == 135:
        # Down-right diagonals: y - x constant.
        for d in range(-(w - 1), h):
            line = []
            for y in range(max(0, d), min(h, w + d)):
                line.append((y, y - d))
            yield line
    else:
        raise ValueError(f"unsupported angle {angle}")


def run_length_matrix(
    levels: np.ndarray, mask: np.ndarray, angle: int, n_levels: int = QUANT_LEVELS
) -> np.ndarray:
    """Run-length counts for one orientation; rows are gray levels,
    columns are run lengths 1..max(h, w).  Runs break at the mask edge."""
    h, w = levels.shape
    max_run = max(h, w)
    counts = np.zeros((n_levels, max_run), dtype=np.float64)
    for line in _scan_lines((h, w), angle):
        run_level = None
        run_len = 0
        for y, x in line:
            if mask[y, x]:
                lv = levels[y, x]
                if lv == run_level:
                    run_len += 1
                else:
                    if run_level is not None:
                        counts[run_level, run_len - 1] += 1
                    run_level = lv
                    run_len = 1
            else:
                if run_level is not None:
                    counts[run_level, run_len - 1] += 1
                run_level = None
                run_len = 0
        if run_level is not None:
            counts[run_level, run_len - 1] += 1
    return counts


def glrlm_properties(matrix: np.ndarray) -> tuple[float, ...]:
    """(SRE, LRE, GLN, RLN, RP, LGRE, HGRE) of a summed run matrix.

    Gray levels are indexed from 1 so the low/high emphasis weights are
    well defined for the lowest level.
    """
    h = matrix.sum()
    if h <= 0:
        raise InvalidInputError("empty run-length matrix")
    n_levels, n_runs = matrix.shape
    i = np.arange(1, n_levels + 1, dtype=np.float64)[:, None]
    j = np.arange(1, n_runs + 1, dtype=np.float64)[None, :]
    sre = (matrix / j**2).sum() / h
    lre = (matrix * j**2).sum() / h
    gln = (matrix.sum(axis=1) ** 2).sum() / h
    rln = (matrix.sum(axis=0) ** 2).sum() / h
    rp = h / (matrix * j).sum()
    lgre = (matrix / i**2).sum() / h
    hgre = (matrix * i**2).sum() / h
    return tuple(float(v) for v in (sre, lre, gln, rln, rp, lgre, hgre))


def glrlm_features(img: RasterImage, mask: np.ndarray) -> list[float]:
    """Seven run-length statistics from the four orientation matrices
    added together."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    levels = quantize_gray(img, mask)
    total = sum(run_length_matrix(levels, mask, angle) for angle in ANGLES)
    return list(glrlm_properties(total))
