"""Color descriptors over the lesion pixels: histogram moments (mean,
variance, asymmetry) and log-variegation for each RGB and HSV channel."""

from __future__ import annotations

import numpy as np

from lesioncad.imaging import InvalidInputError, RasterImage

HIST_BINS = 256
VARIEGATION_FLOOR = 1e-9

CHANNEL_ORDER = ("r", "g", "b", "h", "s", "v")


def rgb_to_hsv_planes(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized RGB [0,255] -> HSV with H as angle/360, all in [0, 1]."""
    c = rgb.astype(np.float64) / 255.0
    r, g, b = c[..., 0], c[..., 1], c[..., 2]
    v = c.max(axis=-1)
    cmin = c.min(axis=-1)
    delta = v - cmin
    s = np.where(v > 0, delta / np.where(v > 0, v, 1.0), 0.0)
    h = np.zeros_like(v)
    nz = delta > 0
    rmax = nz & (v == r)
    gmax = nz & ~rmax & (v == g)
    bmax = nz & ~rmax & ~gmax
    h[rmax] = ((g - b)[rmax] / delta[rmax]) % 6.0
    h[gmax] = (b - r)[gmax] / delta[gmax] + 2.0
    h[bmax] = (r - g)[bmax] / delta[bmax] + 4.0
    return h / 6.0, s, v


def lesion_channels(img: RasterImage, mask: np.ndarray) -> dict[str, np.ndarray]:
    """The six per-pixel channel value arrays over the lesion, in [0, 1]."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise InvalidInputError("empty mask")
    rgb = img.rgb.astype(np.float64) / 255.0
    h, s, v = rgb_to_hsv_planes(img.rgb)
    return {
        "r": rgb[:, :, 0][mask],
        "g": rgb[:, :, 1][mask],
        "b": rgb[:, :, 2][mask],
        "h": h[mask],
        "s": s[mask],
        "v": v[mask],
    }


def histogram_moments(values: np.ndarray) -> tuple[float, float, float]:
    """Mean, variance and third central moment from a 256-bin histogram
    of values in [0, 1]; bin i represents the intensity i/255."""
    bins = np.clip(np.floor(values * (HIST_BINS - 1) + 0.5), 0, HIST_BINS - 1)
    hist = np.bincount(bins.astype(np.int64), minlength=HIST_BINS).astype(np.float64)
    p = hist / hist.sum()
    r = np.arange(HIST_BINS, dtype=np.float64) / (HIST_BINS - 1)
    mean = float((r * p).sum())
    variance = float((((r - mean) ** 2) * p).sum())
    skewness = float((((r - mean) ** 3) * p).sum())
    return mean, variance, skewness


def histogram_color_stats(img: RasterImage, mask: np.ndarray) -> list[float]:
    """Eighteen values: (mean, variance, asymmetry) for R, G, B, H, S, V."""
    channels = lesion_channels(img, mask)
    out: list[float] = []
    for name in CHANNEL_ORDER:
        out.extend(histogram_moments(channels[name]))
    return out


def color_variegation(img: RasterImage, mask: np.ndarray) -> list[float]:
    """Six values: ln(variance / mean) per channel, ratio floored at 1e-9."""
    channels = lesion_channels(img, mask)
    out: list[float] = []
    for name in CHANNEL_ORDER:
        mean, variance, _ = histogram_moments(channels[name])
        ratio = variance / mean if mean > 0 else 0.0
        out.append(float(np.log(max(ratio, VARIEGATION_FLOOR))))
    return out
