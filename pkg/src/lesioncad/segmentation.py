"""Interactive seeded segmentation.

Every unlabeled pixel takes the label of the nearest seed under a
combined distance: Euclidean distance in L*a*b* plus the image-plane
distance weighted by m over the image diagonal.  Post-processing keeps
seeded components, smooths the contour with one dilation and fills
holes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from lesioncad.imaging import (
    InvalidInputError,
    LabImage,
    RasterImage,
    resize_standard,
)
from lesioncad.preprocessing import preprocess

FOREGROUND = "fg"
BACKGROUND = "bg"

DEFAULT_COMPACTNESS = 0.1


class ContradictorySeedsError(InvalidInputError):
    """Raised when post-processing removes every foreground component."""


@dataclass(frozen=True)
class Seed:
    x: int
    y: int
    label: str

    def __post_init__(self) -> None:
        if self.label not in (FOREGROUND, BACKGROUND):
            raise InvalidInputError(f"unknown seed label {self.label!r}")


@dataclass
class SeedSet:
    """User-labeled pixels; at least one of each label is required."""

    seeds: list[Seed] = field(default_factory=list)

    def __post_init__(self) -> None:
        labels = {}
        for s in self.seeds:
            prev = labels.get((s.x, s.y))
            if prev is not None and prev != s.label:
                raise InvalidInputError(f"conflicting labels at seed ({s.x}, {s.y})")
            labels[(s.x, s.y)] = s.label
        if not any(s.label == FOREGROUND for s in self.seeds):
            raise InvalidInputError("at least one foreground seed is required")
        if not any(s.label == BACKGROUND for s in self.seeds):
            raise InvalidInputError("at least one background seed is required")

    def __len__(self) -> int:
        return len(self.seeds)

    def check_bounds(self, height: int, width: int) -> None:
        for s in self.seeds:
            if not (0 <= s.x < width and 0 <= s.y < height):
                raise InvalidInputError(
                    f"seed ({s.x}, {s.y}) outside {width}x{height} image"
                )

    def foreground(self) -> list[Seed]:
        return [s for s in self.seeds if s.label == FOREGROUND]

    def background(self) -> list[Seed]:
        return [s for s in self.seeds if s.label == BACKGROUND]

    def to_json(self) -> str:
        return json.dumps([{"x": s.x, "y": s.y, "label": s.label} for s in self.seeds])

    @classmethod
    def from_json(cls, text: str) -> "SeedSet":
        raw = json.loads(text)
        return cls([Seed(int(r["x"]), int(r["y"]), str(r["label"])) for r in raw])


@dataclass
class SegmentationParams:
    """m weights the spatial term; S is the image diagonal."""

    m: float = DEFAULT_COMPACTNESS
    S: float = 0.0

    def __post_init__(self) -> None:
        if self.m < 0:
            raise InvalidInputError("spatial weight m must be >= 0")

    @classmethod
    def for_image(cls, height: int, width: int, m: float = DEFAULT_COMPACTNESS) -> "SegmentationParams":
        return cls(m=m, S=float(np.hypot(height, width)))


def isnn_label_pixels(img: LabImage, seeds: SeedSet, params: SegmentationParams) -> np.ndarray:
    """Nearest-seed labeling under D = d_lab + (m / S) * d_xy.

    Ties go to the lowest seed index; seed pixels keep their own label.
    Returns the boolean foreground mask.
    """
    h, w = img.height, img.width
    seeds.check_bounds(h, w)
    s = params.S if params.S > 0 else float(np.hypot(h, w))
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    lab = img.lab
    best = np.full((h, w), np.inf)
    best_idx = np.zeros((h, w), dtype=np.intp)
    weight = params.m / s
    for i, seed in enumerate(seeds.seeds):
        seed_lab = lab[seed.y, seed.x]
        d_lab = np.sqrt(((lab - seed_lab) ** 2).sum(axis=2))
        d_xy = np.sqrt((xx - seed.x) ** 2 + (yy - seed.y) ** 2)
        dist = d_lab + weight * d_xy
        better = dist < best
        best[better] = dist[better]
        best_idx[better] = i
    labels = np.array([sd.label == FOREGROUND for sd in seeds.seeds])
    mask = labels[best_idx]
    for seed in seeds.seeds:
        mask[seed.y, seed.x] = seed.label == FOREGROUND
    return mask


_EIGHT = np.ones((3, 3), dtype=bool)
_CROSS = ndimage.generate_binary_structure(2, 1)


def refine_mask(mask: np.ndarray, seeds: SeedSet) -> np.ndarray:
    """Post-process a raw label mask.

    Drops 8-connected foreground components that contain no foreground
    seed, applies one dilation with the 3x3 cross element, then fills
    background holes not reachable from the border (4-connectivity).
    """
    mask = np.asarray(mask, dtype=bool)
    labeled, n = ndimage.label(mask, structure=_EIGHT)
    keep = set()
    for s in seeds.foreground():
        comp = labeled[s.y, s.x]
        if comp > 0:
            keep.add(comp)
    if not keep:
        raise ContradictorySeedsError(
            "no foreground component contains a foreground seed"
        )
    kept = np.isin(labeled, sorted(keep))
    dilated = ndimage.binary_dilation(kept, structure=_CROSS)
    return ndimage.binary_fill_holes(dilated, structure=_CROSS)


def segment(
    img: RasterImage,
    seeds: SeedSet,
    m: float = DEFAULT_COMPACTNESS,
) -> np.ndarray:
    """Full segmentation: standardize, preprocess, label, refine.

    Seeds are given in 300x225 working coordinates; the returned mask is
    300x225 (map back with imaging.mask_to_original if needed).
    """
    standardized = resize_standard(img)
    lab, _ = preprocess(standardized)
    params = SegmentationParams.for_image(lab.height, lab.width, m=m)
    raw = isnn_label_pixels(lab, seeds, params)
    return refine_mask(raw, seeds)
