"""Dataset manifests and patient-context encoding.

A manifest is a JSON file:

    {
      "name": "...",
      "class_set": ["NEV", "SK", "MEL"],
      "context_schema": ["age", "itch", "grow", "hurt", "change", "bleed", "raise"],
      "entries": [
        {"image_path": "img/001.png",
         "gt_mask_path": "gt/001.png",
         "label": "NEV",
         "context": {"age": 55, "itch": "Yes", ...}},
        ...
      ]
    }

Paths are resolved relative to the manifest file.  Ground-truth masks
are 0/255 PNGs, resampled to the 300x225 working size at load.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lesioncad.imaging import InvalidInputError

PAD_CONTEXT_SCHEMA = ["age", "itch", "grow", "hurt", "change", "bleed", "raise"]
ISBI_CONTEXT_SCHEMA = ["age", "sex"]

_YES = {"yes", "y", "true", "1"}
_NO = {"no", "n", "false", "0"}


class ManifestError(InvalidInputError):
    """Raised for malformed or unresolvable manifests."""


@dataclass
class DatasetEntry:
    image_path: Path
    gt_mask_path: Path | None = None
    label: str | None = None
    context: dict | None = None


@dataclass
class DatasetManifest:
    name: str
    entries: list[DatasetEntry]
    class_set: list[str] = field(default_factory=list)
    context_schema: list[str] = field(default_factory=list)

    def class_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in self.class_set}
        for e in self.entries:
            if e.label is not None:
                counts[e.label] += 1
        return counts


def load_manifest(path) -> DatasetManifest:
    """Load and validate a manifest; errors name the offending entry."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = path.parent
    class_set = list(raw.get("class_set", []))
    schema = list(raw.get("context_schema", []))
    entries_raw = raw.get("entries", [])
    if not entries_raw:
        raise ManifestError("manifest has no entries")
    entries: list[DatasetEntry] = []
    for i, e in enumerate(entries_raw):
        if "image_path" not in e:
            raise ManifestError(f"entry {i}: missing image_path")
        image_path = base / e["image_path"]
        if not image_path.exists():
            raise ManifestError(f"entry {i}: image not found: {image_path}")
        gt_path = None
        if e.get("gt_mask_path"):
            gt_path = base / e["gt_mask_path"]
            if not gt_path.exists():
                raise ManifestError(f"entry {i}: ground-truth mask not found: {gt_path}")
        label = e.get("label")
        if label is not None and label not in class_set:
            raise ManifestError(f"entry {i}: unknown label {label!r}")
        context = e.get("context")
        if context is not None:
            missing = [f for f in schema if f not in context]
            if missing:
                raise ManifestError(f"entry {i}: context missing fields {missing}")
        entries.append(DatasetEntry(image_path, gt_path, label, context))
    return DatasetManifest(raw.get("name", path.stem), entries, class_set, schema)


def _encode_field(name: str, value) -> float:
    if name == "age":
        age = float(value)
        if age < 0:
            raise InvalidInputError("age must be non-negative")
        return age
    if name == "sex":
        text = str(value).strip().lower()
        if text in ("male", "m", "0"):
            return 0.0
        if text in ("female", "f", "1"):
            return 1.0
        raise InvalidInputError(f"cannot encode sex value {value!r}")
    text = str(value).strip().lower()
    if text in _YES:
        return 1.0
    if text in _NO:
        return 0.0
    raise InvalidInputError(f"cannot encode {name}={value!r} as yes/no")


def encode_context(raw: dict, schema: list[str]) -> np.ndarray:
    """Encode a raw context map against a schema: yes/no answers become
    1/0, sex becomes 0 (male) / 1 (female), age stays numeric (scaled
    downstream with the image features).  Missing fields are errors."""
    values = []
    for name in schema:
        if name not in raw:
            raise InvalidInputError(f"context field {name!r} missing")
        values.append(_encode_field(name, raw[name]))
    return np.asarray(values, dtype=np.float64)


def load_context_csv(path, schema: list[str]) -> dict[str, np.ndarray]:
    """Context CSV importer: one row per image, header = image + schema."""
    out: dict[str, np.ndarray] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            key = row.get("image")
            if key is None:
                raise ManifestError("context CSV needs an 'image' column")
            out[key] = encode_context(row, schema)
    return out
