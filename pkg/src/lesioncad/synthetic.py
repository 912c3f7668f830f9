"""Synthetic lesion generator for demos, fixtures and pipeline tests.

Three lesion classes with deliberately distinct signatures:

* NEV - near-circular, uniform dark brown, smooth.
* SK  - stretched wavy outline, light ochre with strong stripe texture.
* MEL - spiky outline, two-tone color split, asymmetric.

Images carry a mild illumination gradient and occasional hair lines so
the pre-processing stages have something to do.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from lesioncad.imaging import RasterImage, write_mask_png

CLASS_NAMES = ["NEV", "SK", "MEL"]

_SKIN = np.array([225.0, 185.0, 165.0])


def _polar_mask(
    shape: tuple[int, int],
    center: tuple[float, float],
    radius: float,
    wobble: float,
    lobes: int,
    phase: float,
    stretch: float = 1.0,
) -> np.ndarray:
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    dx = (xx - center[0]) / stretch
    dy = yy - center[1]
    rho = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)
    boundary = radius * (1.0 + wobble * np.sin(lobes * theta + phase))
    return rho <= boundary


def make_lesion_image(
    class_id: int,
    rng: np.random.Generator,
    size: tuple[int, int] = (300, 225),
    with_hair: bool = False,
) -> tuple[RasterImage, np.ndarray]:
    """One synthetic lesion photograph and its ground-truth mask."""
    w, h = size
    cx = w / 2 + rng.uniform(-15, 15)
    cy = h / 2 + rng.uniform(-10, 10)
    radius = rng.uniform(45, 60)

    if class_id == 0:  # NEV: round and smooth
        mask = _polar_mask((h, w), (cx, cy), radius, 0.04, 3, rng.uniform(0, 6.28))
        base = np.array([125.0, 85.0, 60.0])
        texture_amp = 4.0
    elif class_id == 1:  # SK: stretched, wavy, strongly textured
        mask = _polar_mask(
            (h, w), (cx, cy), radius * 0.85, 0.12, 7, rng.uniform(0, 6.28), stretch=1.6
        )
        base = np.array([185.0, 140.0, 95.0])
        texture_amp = 18.0
    else:  # MEL: spiky and two-tone
        mask = _polar_mask((h, w), (cx, cy), radius, 0.3, 5, rng.uniform(0, 6.28))
        base = np.array([70.0, 45.0, 50.0])
        texture_amp = 8.0

    img = np.empty((h, w, 3), dtype=np.float64)
    img[:] = _SKIN
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)

    lesion = np.tile(base, (h, w, 1))
    if class_id == 1:
        stripes = texture_amp * np.sin(xx / 2.5 + yy / 6.0)
        lesion += stripes[:, :, None]
    elif class_id == 2:
        half = xx < cx
        lesion[half] = np.array([150.0, 70.0, 95.0])
        lesion += rng.normal(0.0, texture_amp, size=(h, w, 1))
    else:
        lesion += rng.normal(0.0, texture_amp, size=(h, w, 1))
    img[mask] = lesion[mask]

    # Mild illumination gradient over the whole frame.
    gradient = 1.0 + 0.12 * (xx / w - 0.5) + 0.08 * (yy / h - 0.5)
    img *= gradient[:, :, None]

    if with_hair:
        for _ in range(rng.integers(2, 5)):
            x0 = rng.uniform(0, w)
            slope = rng.uniform(-0.6, 0.6)
            cols = np.arange(w)
            rows = np.clip(np.round(slope * (cols - x0) + rng.uniform(0, h)), 0, h - 1)
            img[rows.astype(int), cols] = np.array([30.0, 25.0, 20.0])

    rgb = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    return RasterImage(rgb), mask


def default_seeds(gt_mask: np.ndarray) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Deterministic seeds for a known ground truth: the foreground pixel
    nearest the centroid plus inset background corners outside the mask."""
    ys, xs = np.nonzero(gt_mask)
    cx, cy = xs.mean(), ys.mean()
    nearest = int(np.argmin((xs - cx) ** 2 + (ys - cy) ** 2))
    fg = [(int(xs[nearest]), int(ys[nearest]))]
    h, w = gt_mask.shape
    bg = []
    for x, y in ((10, 10), (w - 11, 10), (10, h - 11), (w - 11, h - 11)):
        if not gt_mask[y, x]:
            bg.append((x, y))
    if not bg:  # lesion covering all corners cannot happen with these shapes
        bg.append((0, 0))
    return fg, bg


def _context_for_class(class_id: int, rng: np.random.Generator) -> dict:
    grows = class_id == 2 or (class_id == 1 and rng.random() < 0.4)
    return {
        "age": int(rng.integers(25, 85) + 10 * class_id),
        "itch": "Yes" if class_id == 1 and rng.random() < 0.6 else "No",
        "grow": "Yes" if grows else "No",
        "hurt": "No",
        "change": "Yes" if class_id == 2 else "No",
        "bleed": "Yes" if class_id == 2 and rng.random() < 0.5 else "No",
        "raise": "Yes" if class_id == 1 else "No",
    }


def make_synthetic_dataset(
    root: Path | str,
    per_class: int = 20,
    rng_seed: int = 0,
    with_hair: bool = False,
    size: tuple[int, int] = (300, 225),
) -> Path:
    """Write a synthetic dataset (images, masks, manifest) and return the
    manifest path."""
    root = Path(root)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "gt").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(rng_seed)
    entries = []
    from PIL import Image

    for class_id, name in enumerate(CLASS_NAMES):
        for i in range(per_class):
            img, mask = make_lesion_image(class_id, rng, size=size, with_hair=with_hair)
            stem = f"{name.lower()}_{i:03d}"
            image_rel = f"images/{stem}.png"
            gt_rel = f"gt/{stem}.png"
            Image.fromarray(img.rgb).save(root / image_rel)
            write_mask_png(mask, root / gt_rel)
            entries.append(
                {
                    "image_path": image_rel,
                    "gt_mask_path": gt_rel,
                    "label": name,
                    "context": _context_for_class(class_id, rng),
                }
            )
    manifest = {
        "name": "synthetic-lesions",
        "class_set": CLASS_NAMES,
        "context_schema": ["age", "itch", "grow", "hurt", "change", "bleed", "raise"],
        "entries": entries,
    }
    manifest_path = root / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest_path
