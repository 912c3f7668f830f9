"""Pixel-grid types and image primitives shared by the whole pipeline.

Images are numpy arrays in row-major (y, x) order.  ``RasterImage`` holds
interleaved 8-bit sRGB, ``LabImage`` holds float CIE L*a*b* (D65), gray
images and binary masks are plain 2-D arrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from PIL import Image
from scipy import ndimage

# Every image entering the pipeline is standardized to this size (w, h).
STANDARD_SIZE = (300, 225)

# sRGB -> XYZ matrix and D65 reference white.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_D65_WHITE = np.array([0.95047, 1.0, 1.08883])


class InvalidInputError(ValueError):
    """Raised when an image, mask or seed set violates a precondition."""


@dataclass
class RasterImage:
    """Interleaved sRGB image, samples in [0, 255].

    ``original_size`` keeps the pre-standardization (width, height) so
    masks computed at 300x225 can be mapped back for display.
    """

    rgb: np.ndarray
    original_size: tuple[int, int] = field(default=(0, 0))

    def __post_init__(self) -> None:
        self.rgb = np.asarray(self.rgb)
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise InvalidInputError("expected an (h, w, 3) rgb array")
        if self.rgb.size == 0:
            raise InvalidInputError("empty image")
        self.rgb = self.rgb.astype(np.uint8, copy=False)
        if self.original_size == (0, 0):
            self.original_size = (self.width, self.height)

    @property
    def height(self) -> int:
        return self.rgb.shape[0]

    @property
    def width(self) -> int:
        return self.rgb.shape[1]


@dataclass
class LabImage:
    """CIE L*a*b* image; L in [0, 100], a/b unbounded chroma."""

    lab: np.ndarray

    def __post_init__(self) -> None:
        self.lab = np.asarray(self.lab, dtype=np.float64)
        if self.lab.ndim != 3 or self.lab.shape[2] != 3:
            raise InvalidInputError("expected an (h, w, 3) lab array")

    @property
    def L(self) -> np.ndarray:
        return self.lab[:, :, 0]

    @property
    def a(self) -> np.ndarray:
        return self.lab[:, :, 1]

    @property
    def b(self) -> np.ndarray:
        return self.lab[:, :, 2]

    @property
    def height(self) -> int:
        return self.lab.shape[0]

    @property
    def width(self) -> int:
        return self.lab.shape[1]


def load_image(path) -> RasterImage:
    """Read a PNG or JPEG file as an sRGB raster."""
    with Image.open(path) as im:
        rgb = np.asarray(im.convert("RGB"))
    return RasterImage(rgb)


def _bilinear_resize(plane: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Corner-aligned bilinear resample of one 2-D plane.

    Output corners sample the input corners exactly; every other output
    pixel is the bilinear blend of its enclosing 2x2 source block.
    """
    in_h, in_w = plane.shape
    ys = np.linspace(0.0, in_h - 1.0, out_h) if out_h > 1 else np.zeros(1)
    xs = np.linspace(0.0, in_w - 1.0, out_w) if out_w > 1 else np.zeros(1)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    p = plane.astype(np.float64)
    top = p[y0[:, None], x0[None, :]] * (1 - fx) + p[y0[:, None], x1[None, :]] * fx
    bot = p[y1[:, None], x0[None, :]] * (1 - fx) + p[y1[:, None], x1[None, :]] * fx
    return top * (1 - fy) + bot * fy


def resize_standard(img: RasterImage) -> RasterImage:
    """Resize to the 300x225 working size with bilinear interpolation.

    Non-4:3 inputs are stretched anisotropically; original dimensions are
    recorded on the result so masks can be resampled back.
    """
    if img.width < 2 or img.height < 2:
        raise InvalidInputError("image too small to resize")
    out_w, out_h = STANDARD_SIZE
    if (img.width, img.height) == (out_w, out_h):
        return RasterImage(img.rgb.copy(), original_size=(img.width, img.height))
    planes = [
        _bilinear_resize(img.rgb[:, :, c], out_h, out_w) for c in range(3)
    ]
    rgb = np.clip(np.rint(np.stack(planes, axis=-1)), 0, 255).astype(np.uint8)
    return RasterImage(rgb, original_size=(img.width, img.height))


def mask_to_original(mask: np.ndarray, original_size: tuple[int, int]) -> np.ndarray:
    """Nearest-neighbor resample of a working-size mask to (w, h)."""
    out_w, out_h = original_size
    in_h, in_w = mask.shape
    ys = np.clip(np.rint(np.linspace(0.0, in_h - 1.0, out_h)), 0, in_h - 1).astype(int)
    xs = np.clip(np.rint(np.linspace(0.0, in_w - 1.0, out_w)), 0, in_w - 1).astype(int)
    return mask[ys[:, None], xs[None, :]]


def rgb_to_lab(img: RasterImage) -> LabImage:
    """Per-pixel sRGB -> linear -> XYZ (D65) -> CIE L*a*b* conversion."""
    c = img.rgb.astype(np.float64) / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _D65_WHITE
    delta = 6.0 / 29.0
    f = np.where(t > delta**3, np.cbrt(t), t / (3 * delta**2) + 4.0 / 29.0)
    fx, fy, fz = f[:, :, 0], f[:, :, 1], f[:, :, 2]
    lab = np.empty_like(xyz)
    lab[:, :, 0] = 116.0 * fy - 16.0
    lab[:, :, 1] = 500.0 * (fx - fy)
    lab[:, :, 2] = 200.0 * (fy - fz)
    return LabImage(lab)


def otsu_threshold(gray: np.ndarray) -> float:
    """Threshold maximizing between-class variance over a 256-bin histogram.

    Input values are expected in [0, 255].  The returned level t splits
    pixels into the classes {v <= t} and {v > t}.  A constant image is
    degenerate: its single level is returned with a warning and the
    caller should treat all pixels as one class.
    """
    g = np.asarray(gray, dtype=np.float64)
    levels = np.clip(g, 0, 255).astype(np.int64).ravel()
    hist = np.bincount(levels, minlength=256).astype(np.float64)
    total = hist.sum()
    if total == 0:
        raise InvalidInputError("empty gray image")
    nonzero = np.nonzero(hist)[0]
    if nonzero.size == 1:
        warnings.warn("constant image: Otsu threshold is degenerate", stacklevel=2)
        return float(nonzero[0])
    p = hist / total
    omega = np.cumsum(p)
    mu = np.cumsum(p * np.arange(256))
    mu_total = mu[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = (mu_total * omega - mu) ** 2 / (omega * (1.0 - omega))
    sigma_b[~np.isfinite(sigma_b)] = 0.0
    # The maximum is flat across any empty gray-level gap; take the mean
    # of the maximizing levels so the threshold splits such gaps centrally.
    best = np.nonzero(sigma_b == sigma_b.max())[0]
    return float(best.mean())


def median_filter(plane: np.ndarray, size: int = 5) -> np.ndarray:
    """Median of the size x size neighborhood; borders replicate edges."""
    return ndimage.median_filter(np.asarray(plane, dtype=np.float64), size=size, mode="nearest")


def median_filter_lab(img: LabImage, size: int = 5) -> LabImage:
    """Channel-wise 5x5 median filter of a Lab image."""
    out = np.stack(
        [median_filter(img.lab[:, :, c], size=size) for c in range(3)], axis=-1
    )
    return LabImage(out)


def write_mask_png(mask: np.ndarray, path) -> None:
    """Write a binary mask as a single-channel 0/255 PNG."""
    data = np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
    Image.fromarray(data, mode="L").save(path, format="PNG")


def read_mask_png(path) -> np.ndarray:
    """Read a 0/255 PNG mask as a boolean array (>=128 is foreground)."""
    with Image.open(path) as im:
        data = np.asarray(im.convert("L"))
    return data >= 128


def mask_to_standard(mask: np.ndarray) -> np.ndarray:
    """Nearest-neighbor resample of a mask to the 300x225 working size."""
    out_w, out_h = STANDARD_SIZE
    if mask.shape == (out_h, out_w):
        return mask.astype(bool)
    in_h, in_w = mask.shape
    ys = np.clip(np.rint(np.linspace(0.0, in_h - 1.0, out_h)), 0, in_h - 1).astype(int)
    xs = np.clip(np.rint(np.linspace(0.0, in_w - 1.0, out_w)), 0, in_w - 1).astype(int)
    return mask[ys[:, None], xs[None, :]].astype(bool)
