"""Shared fixtures: reproducible random images, blob masks and patches."""

from __future__ import annotations

import numpy as np
import pytest

from lesioncad.imaging import RasterImage


def random_blob_mask(rng: np.random.Generator, shape=(48, 48), radius=(10, 16)) -> np.ndarray:
    """One connected, hole-free random blob for feature tests."""
    h, w = shape
    cy = rng.uniform(h * 0.35, h * 0.65)
    cx = rng.uniform(w * 0.35, w * 0.65)
    r = rng.uniform(*radius)
    wobble = rng.uniform(0.05, 0.25)
    lobes = int(rng.integers(3, 7))
    phase = rng.uniform(0, 2 * np.pi)
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    rho = np.hypot(xx - cx, yy - cy)
    theta = np.arctan2(yy - cy, xx - cx)
    return rho <= r * (1.0 + wobble * np.sin(lobes * theta + phase))


def random_patch(rng: np.random.Generator, shape=(48, 48)) -> tuple[RasterImage, np.ndarray]:
    """A noisy color patch plus a random blob mask."""
    h, w = shape
    rgb = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    return RasterImage(rgb), random_blob_mask(rng, shape)


def disk_mask(radius: int, pad: int = 6) -> np.ndarray:
    side = 2 * (radius + pad) + 1
    yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
    c = radius + pad
    return (xx - c) ** 2 + (yy - c) ** 2 <= radius**2


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
