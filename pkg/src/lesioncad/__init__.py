"""Computer-aided diagnosis of pigmented skin lesions.

Pipeline: interactive seeded segmentation of lesion photographs,
59-feature shape/border/color/texture description of the segmented
region, and a regularized extreme-learning-machine classifier that can
fuse the image features with patient context data.
"""

from lesioncad.imaging import RasterImage, LabImage, load_image, write_mask_png
from lesioncad.segmentation import Seed, SeedSet, SegmentationParams, segment
from lesioncad.features import FeatureVector, extract_feature_vector
from lesioncad.classifier import RelmModel, train_classifier

__all__ = [
    "RasterImage",
    "LabImage",
    "load_image",
    "write_mask_png",
    "Seed",
    "SeedSet",
    "SegmentationParams",
    "segment",
    "FeatureVector",
    "extract_feature_vector",
    "RelmModel",
    "train_classifier",
]

__version__ = "0.1.0"
