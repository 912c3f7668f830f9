"""Classification stage: min-max scaling, SMOTE class balancing and a
regularized extreme learning machine.

The network is a single hidden layer with random input weights; the
output weights solve the ridge-regularized least-squares system
(I / gamma + H^T H) beta = H^T T in closed form.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from lesioncad.imaging import InvalidInputError

DEFAULT_HIDDEN = 150
DEFAULT_GAMMA_EXP = -2.0
DEFAULT_SMOTE_K = 5

MODEL_FORMAT = "relm-model/1"


@dataclass
class ScalerStats:
    """Per-feature min and max captured from training data."""

    minimum: np.ndarray
    maximum: np.ndarray

    @property
    def constant_features(self) -> np.ndarray:
        return self.maximum <= self.minimum


@dataclass
class SampleSet:
    """Feature rows with integer class labels from a fixed label list."""

    features: np.ndarray
    labels: np.ndarray
    class_names: list[str]

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[0] != self.labels.shape[0]:
            raise InvalidInputError("features and labels are inconsistent")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= len(self.class_names)):
            raise InvalidInputError("label outside the class set")

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.class_names))


def fit_minmax(rows: np.ndarray) -> ScalerStats:
    """Column-wise min/max scan; constant columns are flagged."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise InvalidInputError("need at least one training row")
    stats = ScalerStats(rows.min(axis=0), rows.max(axis=0))
    if stats.constant_features.any():
        warnings.warn(
            f"{int(stats.constant_features.sum())} constant feature(s) in training data",
            stacklevel=2,
        )
    return stats


def apply_minmax(stats: ScalerStats, rows: np.ndarray) -> np.ndarray:
    """x' = (x - min) / (max - min); constant features map to 0 on
    training values and are never clamped, so test-time values may fall
    outside [0, 1]."""
    rows = np.asarray(rows, dtype=np.float64)
    single = rows.ndim == 1
    if single:
        rows = rows[None, :]
    if rows.shape[1] != stats.minimum.shape[0]:
        raise InvalidInputError("feature dimension does not match scaler")
    span = stats.maximum - stats.minimum
    span = np.where(span > 0, span, 1.0)
    out = (rows - stats.minimum) / span
    return out[0] if single else out


def smote_balance(train: SampleSet, k: int = DEFAULT_SMOTE_K, rng_seed: int = 0) -> SampleSet:
    """Oversample every minority class until all counts equal the
    majority count.

    Synthetic rows are x + u (x_nn - x) with u uniform in [0, 1] and
    x_nn one of the k nearest same-class neighbors (k shrinks for tiny
    classes).  A single-sample class can only be duplicated.
    Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(rng_seed)
    counts = train.class_counts()
    target = counts.max()
    new_rows = [train.features]
    new_labels = [train.labels]
    for cls in range(len(train.class_names)):
        need = int(target - counts[cls])
        if need <= 0 or counts[cls] == 0:
            continue
        rows = train.features[train.labels == cls]
        n = rows.shape[0]
        if n == 1:
            warnings.warn(
                f"class {train.class_names[cls]!r} has one sample; duplicating it",
                stacklevel=2,
            )
            synth = np.repeat(rows, need, axis=0)
        else:
            k_eff = min(k, n - 1)
            d2 = ((rows[:, None, :] - rows[None, :, :]) ** 2).sum(axis=2)
            np.fill_diagonal(d2, np.inf)
            neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]
            base_idx = rng.integers(0, n, size=need)
            nn_pick = rng.integers(0, k_eff, size=need)
            gaps = rng.uniform(0.0, 1.0, size=need)
            base = rows[base_idx]
            nn = rows[neighbors[base_idx, nn_pick]]
            synth = base + gaps[:, None] * (nn - base)
        new_rows.append(synth)
        new_labels.append(np.full(need, cls, dtype=np.int64))
    return SampleSet(
        np.vstack(new_rows), np.concatenate(new_labels), list(train.class_names)
    )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign for numerical stability at large |x|.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def solve_output_weights(h: np.ndarray, t: np.ndarray, gamma: float) -> np.ndarray:
    """Solve (I / gamma + H^T H) beta = H^T T as a linear system."""
    d = h.shape[1]
    lhs = np.eye(d) / gamma + h.T @ h
    rhs = h.T @ t
    try:
        return np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:  # positive definite for finite gamma
        raise InvalidInputError("regularized system unexpectedly singular") from exc


@dataclass
class RelmModel:
    """Trained network: random input layer, closed-form output weights,
    plus the scaler statistics and class labels it was fitted with."""

    input_weights: np.ndarray
    biases: np.ndarray
    output_weights: np.ndarray
    scaler: ScalerStats
    class_names: list[str]
    hidden: int = DEFAULT_HIDDEN
    gamma_exp: float = DEFAULT_GAMMA_EXP
    rng_seed: int = 0
    context_schema: list[str] = field(default_factory=list)

    @property
    def n_inputs(self) -> int:
        return self.input_weights.shape[1]

    def hidden_activations(self, rows: np.ndarray) -> np.ndarray:
        return _sigmoid(rows @ self.input_weights.T + self.biases)

    def save(self, path) -> None:
        blob = {
            "format": MODEL_FORMAT,
            "hidden": self.hidden,
            "gamma_exp": self.gamma_exp,
            "rng_seed": self.rng_seed,
            "class_names": self.class_names,
            "context_schema": self.context_schema,
            "input_weights": self.input_weights.tolist(),
            "biases": self.biases.tolist(),
            "output_weights": self.output_weights.tolist(),
            "scaler_min": self.scaler.minimum.tolist(),
            "scaler_max": self.scaler.maximum.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(blob, fh)

    @classmethod
    def load(cls, path) -> "RelmModel":
        with open(path, encoding="utf-8") as fh:
            blob = json.load(fh)
        if blob.get("format") != MODEL_FORMAT:
            raise InvalidInputError(f"unsupported model format {blob.get('format')!r}")
        return cls(
            input_weights=np.asarray(blob["input_weights"], dtype=np.float64),
            biases=np.asarray(blob["biases"], dtype=np.float64),
            output_weights=np.asarray(blob["output_weights"], dtype=np.float64),
            scaler=ScalerStats(
                np.asarray(blob["scaler_min"], dtype=np.float64),
                np.asarray(blob["scaler_max"], dtype=np.float64),
            ),
            class_names=list(blob["class_names"]),
            hidden=int(blob["hidden"]),
            gamma_exp=float(blob["gamma_exp"]),
            rng_seed=int(blob["rng_seed"]),
            context_schema=list(blob.get("context_schema", [])),
        )


def relm_train(
    train: SampleSet,
    scaler: ScalerStats,
    hidden: int = DEFAULT_HIDDEN,
    gamma_exp: float = DEFAULT_GAMMA_EXP,
    rng_seed: int = 0,
    context_schema: list[str] | None = None,
) -> RelmModel:
    """Fit the output weights on already scaled and balanced data.

    Input weights and biases are drawn uniform in (-1, 1) from the seed;
    targets are one-hot rows with 1 for the true class and 0 elsewhere.
    """
    rng = np.random.default_rng(rng_seed)
    n_inputs = train.features.shape[1]
    w = rng.uniform(-1.0, 1.0, size=(hidden, n_inputs))
    b = rng.uniform(-1.0, 1.0, size=hidden)
    h = _sigmoid(train.features @ w.T + b)
    t = np.zeros((train.features.shape[0], len(train.class_names)))
    t[np.arange(train.labels.size), train.labels] = 1.0
    beta = solve_output_weights(h, t, 10.0**gamma_exp)
    return RelmModel(
        input_weights=w,
        biases=b,
        output_weights=beta,
        scaler=scaler,
        class_names=list(train.class_names),
        hidden=hidden,
        gamma_exp=gamma_exp,
        rng_seed=rng_seed,
        context_schema=list(context_schema or []),
    )


def relm_predict(model: RelmModel, features: np.ndarray) -> tuple[np.ndarray, int]:
    """Output-neuron values and the argmax class index for one row of
    raw (unscaled) features; ties go to the lowest class index."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (model.n_inputs,):
        raise InvalidInputError(
            f"expected {model.n_inputs} features, got {features.shape}"
        )
    scaled = apply_minmax(model.scaler, features)
    outputs = model.hidden_activations(scaled[None, :])[0] @ model.output_weights
    return outputs, int(np.argmax(outputs))


def fuse_context(image_features: np.ndarray, context: np.ndarray | None) -> np.ndarray:
    """Concatenate image features with the encoded context vector, image
    features first.  Absent context passes the features through."""
    image_features = np.asarray(image_features, dtype=np.float64)
    if context is None:
        return image_features
    context = np.asarray(context, dtype=np.float64)
    if context.ndim != 1:
        raise InvalidInputError("context must be a flat vector")
    return np.concatenate([image_features, context])


def train_classifier(
    samples: SampleSet,
    hidden: int = DEFAULT_HIDDEN,
    gamma_exp: float = DEFAULT_GAMMA_EXP,
    rng_seed: int = 0,
    smote_k: int = DEFAULT_SMOTE_K,
    context_schema: list[str] | None = None,
) -> RelmModel:
    """Full training pipeline: fit the scaler, scale, balance with SMOTE
    and solve the network, all deterministically from one seed."""
    scaler = fit_minmax(samples.features)
    scaled = SampleSet(
        apply_minmax(scaler, samples.features), samples.labels, list(samples.class_names)
    )
    balanced = smote_balance(scaled, k=smote_k, rng_seed=rng_seed)
    return relm_train(
        balanced,
        scaler,
        hidden=hidden,
        gamma_exp=gamma_exp,
        rng_seed=rng_seed,
        context_schema=context_schema,
    )
