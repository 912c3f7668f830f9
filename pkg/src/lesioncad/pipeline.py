"""Glue between the stages: file-level feature extraction and manifest
to sample-set conversion for training and evaluation."""

from __future__ import annotations

import numpy as np

from lesioncad.classifier import SampleSet, fuse_context
from lesioncad.dataset import DatasetManifest, encode_context
from lesioncad.features import FeatureVector, extract_feature_vector
from lesioncad.imaging import (
    InvalidInputError,
    RasterImage,
    load_image,
    mask_to_standard,
    read_mask_png,
    resize_standard,
)
from lesioncad.preprocessing import remove_hair, shades_of_gray


def color_normalized(img: RasterImage) -> RasterImage:
    """Standardize and color-normalize an image for feature extraction
    (hair removal followed by Shades of Gray)."""
    standardized = resize_standard(img)
    dehaired, _ = remove_hair(standardized)
    return shades_of_gray(dehaired)


def features_for_image(img: RasterImage, mask: np.ndarray) -> FeatureVector:
    """Descriptor of a lesion given any-size image and mask."""
    color = color_normalized(img)
    return extract_feature_vector(color, mask_to_standard(mask))


def features_from_files(image_path, mask_path) -> FeatureVector:
    return features_for_image(load_image(image_path), read_mask_png(mask_path))


def manifest_to_samples(
    manifest: DatasetManifest, use_context: bool = False
) -> SampleSet:
    """Extract the feature matrix for a labeled manifest.

    Requires a label and a ground-truth mask per entry; with
    ``use_context`` the encoded context vector is appended to each row.
    """
    rows = []
    labels = []
    for i, entry in enumerate(manifest.entries):
        if entry.label is None:
            raise InvalidInputError(f"entry {i}: missing label")
        if entry.gt_mask_path is None:
            raise InvalidInputError(f"entry {i}: missing ground-truth mask")
        fv = features_from_files(entry.image_path, entry.gt_mask_path)
        row = fv.values
        if use_context:
            if entry.context is None:
                raise InvalidInputError(f"entry {i}: missing context")
            row = fuse_context(row, encode_context(entry.context, manifest.context_schema))
        rows.append(row)
        labels.append(manifest.class_set.index(entry.label))
    return SampleSet(np.vstack(rows), np.asarray(labels), list(manifest.class_set))
