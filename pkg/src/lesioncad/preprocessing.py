"""Pre-processing pipeline: hair removal, illumination correction, color
constancy.

Produces the two images the rest of the pipeline consumes: a smoothed
Lab image for segmentation and a color-normalized sRGB image for the
color/texture features.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from lesioncad.imaging import (
    LabImage,
    RasterImage,
    median_filter_lab,
    otsu_threshold,
    rgb_to_lab,
)

HAIR_THRESHOLD = 0.3
INPAINT_WINDOW = 11
MINKOWSKI_ORDER = 6


def _log_kernel(size: int = 5, sigma: float = 0.5) -> np.ndarray:
    """Discrete Laplacian-of-Gaussian kernel, zero-sum, scaled to unit
    lobes so the response to [0, 1] luminance stays within [-1, 1] and
    the fixed 0.3 threshold reads as a contrast fraction."""
    r = size // 2
    yy, xx = np.mgrid[-r : r + 1, -r : r + 1]
    g = np.exp(-(xx**2 + yy**2) / (2.0 * sigma**2))
    g /= g.sum()
    h = g * (xx**2 + yy**2 - 2.0 * sigma**2) / sigma**4
    h -= h.mean()
    return h / np.abs(h[h < 0].sum())


_LOG_5X5 = _log_kernel(5, 0.5)


def _box_sum(a: np.ndarray, win: int) -> np.ndarray:
    """Sum over the win x win window centered at each pixel (clipped at
    the borders, nothing outside the image contributes)."""
    h, w = a.shape
    r = win // 2
    ii = np.zeros((h + 1, w + 1), dtype=np.float64)
    ii[1:, 1:] = np.cumsum(np.cumsum(a, axis=0), axis=1)
    y0 = np.clip(np.arange(h) - r, 0, h)
    y1 = np.clip(np.arange(h) + r + 1, 0, h)
    x0 = np.clip(np.arange(w) - r, 0, w)
    x1 = np.clip(np.arange(w) + r + 1, 0, w)
    return (
        ii[y1[:, None], x1[None, :]]
        - ii[y0[:, None], x1[None, :]]
        - ii[y1[:, None], x0[None, :]]
        + ii[y0[:, None], x0[None, :]]
    )


def inpaint_masked(rgb: np.ndarray, masked: np.ndarray, window: int = INPAINT_WINDOW) -> np.ndarray:
    """Replace masked pixels by the mean of unmasked pixels in a window
    around each, growing the window by 2 wherever no unmasked neighbor
    exists yet.  Replacement values come from original unmasked pixels
    only.  Returns a float array."""
    valid = (~masked).astype(np.float64)
    channels = rgb.astype(np.float64)
    out = channels.copy()
    remaining = masked.copy()
    h, w = masked.shape
    win = window
    max_win = 2 * max(h, w) + 1
    while remaining.any() and win <= max_win:
        counts = _box_sum(valid, win)
        ready = remaining & (counts > 0.5)
        if ready.any():
            for c in range(3):
                sums = _box_sum(channels[:, :, c] * valid, win)
                out[:, :, c][ready] = sums[ready] / counts[ready]
            remaining &= ~ready
        win += 2
    if remaining.any():  # no unmasked pixel anywhere within the grown windows
        global_mean = channels[~masked].reshape(-1, 3).mean(axis=0)
        out[remaining] = global_mean
    return out


def remove_hair(img: RasterImage) -> tuple[RasterImage, np.ndarray]:
    """Detect hair and inpaint it from the surrounding skin.

    Hair is highlighted with a 5x5 Laplacian-of-Gaussian on the [0, 1]
    luminance and masked by fixed thresholding at 0.3.  Each masked
    pixel is replaced by the mean of the unmasked pixels in its 11x11
    window (grown until a donor exists).  Returns the inpainted image
    and the hair mask.
    """
    lum = img.rgb.astype(np.float64).mean(axis=2) / 255.0
    response = ndimage.correlate(lum, _LOG_5X5, mode="nearest")
    hair = response > HAIR_THRESHOLD
    if not hair.any():
        return RasterImage(img.rgb.copy(), img.original_size), hair
    if hair.all():
        warnings.warn("every pixel masked as hair; image left unchanged", stacklevel=2)
        return RasterImage(img.rgb.copy(), img.original_size), hair
    out = inpaint_masked(img.rgb, hair)
    rgb = np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return RasterImage(rgb, img.original_size), hair


@dataclass
class IlluminationModel:
    """Quadratic brightness surface z(x, y) fitted over the skin pixels.

    ``coeffs`` are (P1..P6) for z = P1*x^2 + P2*y^2 + P3*x*y + P4*x +
    P5*y + P6; a constant fallback stores (0, 0, 0, 0, 0, c).
    ``mean_z`` is the mean of the fitted surface over the whole image.
    """

    coeffs: np.ndarray
    mean_z: float
    constant: bool = False

    def surface(self, height: int, width: int) -> np.ndarray:
        yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
        p = self.coeffs
        return p[0] * xx**2 + p[1] * yy**2 + p[2] * xx * yy + p[3] * xx + p[4] * yy + p[5]


def _skin_pixels(lab: LabImage) -> np.ndarray:
    """Boolean mask of the skin region: the brighter Otsu class on L."""
    L = lab.L
    scaled = np.clip(L * 255.0 / 100.0, 0, 255)
    if np.ptp(scaled.astype(np.int64)) == 0:
        return np.ones_like(L, dtype=bool)
    t = otsu_threshold(scaled)
    low = scaled <= t
    high = ~low
    if not low.any() or not high.any():
        return np.ones_like(L, dtype=bool)
    return high if L[high].mean() >= L[low].mean() else low


def fit_illumination(lab: LabImage) -> IlluminationModel:
    """Least-squares fit of the quadratic surface to L over the skin set.

    Falls back to the constant model (mean L over skin) when fewer than
    six skin pixels are available or the system is rank deficient.
    """
    L = lab.L
    skin = _skin_pixels(lab)
    ys, xs = np.nonzero(skin)
    values = L[skin]
    if values.size < 6:
        c = float(values.mean()) if values.size else float(L.mean())
        model = IlluminationModel(np.array([0, 0, 0, 0, 0, c], dtype=np.float64), c, True)
        return model
    x = xs.astype(np.float64)
    y = ys.astype(np.float64)
    design = np.column_stack([x**2, y**2, x * y, x, y, np.ones_like(x)])
    coeffs, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < 6:
        c = float(values.mean())
        return IlluminationModel(np.array([0, 0, 0, 0, 0, c], dtype=np.float64), c, True)
    model = IlluminationModel(coeffs, 0.0)
    model.mean_z = float(model.surface(lab.height, lab.width).mean())
    return model


def correct_illumination(lab: LabImage) -> LabImage:
    """Flatten the luminance: L' = L - z + mean(z), clamped to [0, 100].

    The a and b channels pass through untouched.
    """
    model = fit_illumination(lab)
    z = model.surface(lab.height, lab.width)
    out = lab.lab.copy()
    out[:, :, 0] = np.clip(lab.L - z + model.mean_z, 0.0, 100.0)
    return LabImage(out)


def shades_of_gray(img: RasterImage, order: int = MINKOWSKI_ORDER) -> RasterImage:
    """Color constancy: scale each channel so its Minkowski mean (order
    p) matches the cross-channel average of the three means."""
    rgb = img.rgb.astype(np.float64)
    norms = np.array(
        [np.mean(rgb[:, :, c] ** order) ** (1.0 / order) for c in range(3)]
    )
    target = norms.mean()
    scales = np.where(norms > 0, target / np.where(norms > 0, norms, 1.0), 1.0)
    out = np.clip(np.rint(rgb * scales), 0, 255).astype(np.uint8)
    return RasterImage(out, img.original_size)


def preprocess(img: RasterImage) -> tuple[LabImage, RasterImage]:
    """Full pre-processing chain.

    Returns (a) the Lab image after hair removal, color conversion,
    illumination correction and a 5x5 median filter, used by the
    segmenter, and (b) the Shades-of-Gray normalized sRGB image after
    hair removal, used by the color and texture features.
    """
    dehaired, _ = remove_hair(img)
    lab = rgb_to_lab(dehaired)
    lab = correct_illumination(lab)
    lab = median_filter_lab(lab)
    color = shades_of_gray(dehaired)
    return lab, color
