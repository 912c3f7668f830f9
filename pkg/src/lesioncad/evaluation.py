"""Evaluation protocol: confusion metrics, ROC/AUC, the simulated
interactive-segmentation harness, Jaccard quality banding and
leave-one-out cross validation averaged over repeated runs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from lesioncad.imaging import InvalidInputError
from lesioncad.classifier import (
    SampleSet,
    relm_predict,
    train_classifier,
)

JACCARD_GOOD = 0.65
JACCARD_EXCELLENT = 0.9


@dataclass
class ConfusionCounts:
    tp: int
    fn: int
    tn: int
    fp: int

    def total(self) -> int:
        return self.tp + self.fn + self.tn + self.fp


@dataclass
class Metrics:
    sensitivity: float
    specificity: float
    accuracy: float
    balanced_accuracy: float
    jaccard: float

    def as_dict(self) -> dict[str, float]:
        return {
            "SE": self.sensitivity,
            "SP": self.specificity,
            "AC": self.accuracy,
            "BAC": self.balanced_accuracy,
            "JI": self.jaccard,
        }


def _ratio(num: float, den: float) -> float:
    if den == 0:
        warnings.warn("metric denominator is zero; reporting 0", stacklevel=3)
        return 0.0
    return num / den


def confusion_metrics(c: ConfusionCounts) -> Metrics:
    """Sensitivity, specificity, accuracy, balanced accuracy and Jaccard
    index from one confusion table.  0/0 ratios report 0 with a warning."""
    if c.total() == 0:
        raise InvalidInputError("confusion counts are all zero")
    se = _ratio(c.tp, c.tp + c.fn)
    sp = _ratio(c.tn, c.tn + c.fp)
    ac = (c.tp + c.tn) / c.total()
    ji = _ratio(c.tp, c.tp + c.fp + c.fn)
    return Metrics(se, sp, ac, (se + sp) / 2.0, ji)


def mask_confusion(predicted: np.ndarray, truth: np.ndarray) -> ConfusionCounts:
    """Pixel-level confusion between a predicted and ground-truth mask."""
    p = np.asarray(predicted, dtype=bool)
    t = np.asarray(truth, dtype=bool)
    if p.shape != t.shape:
        raise InvalidInputError("mask shapes differ")
    return ConfusionCounts(
        tp=int(np.sum(p & t)),
        fn=int(np.sum(~p & t)),
        tn=int(np.sum(~p & ~t)),
        fp=int(np.sum(p & ~t)),
    )


def multiclass_metrics(truth: np.ndarray, predicted: np.ndarray, n_classes: int) -> Metrics:
    """Macro average of the one-vs-rest metrics per class.

    Classes absent from both the truth and the prediction are excluded
    from the average with a warning.
    """
    truth = np.asarray(truth, dtype=np.int64)
    predicted = np.asarray(predicted, dtype=np.int64)
    if n_classes < 2:
        raise InvalidInputError("need at least two classes")
    per_class: list[Metrics] = []
    for cls in range(n_classes):
        t = truth == cls
        p = predicted == cls
        if not t.any() and not p.any():
            warnings.warn(f"class {cls} unused; excluded from the average", stacklevel=2)
            continue
        counts = ConfusionCounts(
            tp=int(np.sum(p & t)),
            fn=int(np.sum(~p & t)),
            tn=int(np.sum(~p & ~t)),
            fp=int(np.sum(p & ~t)),
        )
        per_class.append(confusion_metrics(counts))
    if not per_class:
        raise InvalidInputError("no class present in truth or prediction")
    return Metrics(
        float(np.mean([m.sensitivity for m in per_class])),
        float(np.mean([m.specificity for m in per_class])),
        float(np.mean([m.accuracy for m in per_class])),
        float(np.mean([m.balanced_accuracy for m in per_class])),
        float(np.mean([m.jaccard for m in per_class])),
    )


@dataclass
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float


def roc_auc(scores: np.ndarray, labels: np.ndarray) -> RocCurve:
    """ROC curve with thresholds at the distinct scores and trapezoidal
    area; tied scores are grouped, making the area equal the
    Mann-Whitney statistic with half credit for ties."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = int((~labels).sum())
    if n_pos == 0 or n_neg == 0:
        raise InvalidInputError("need at least one positive and one negative")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    tps = [0]
    fps = [0]
    i = 0
    n = scores.size
    while i < n:
        j = i
        while j < n and sorted_scores[j] == sorted_scores[i]:
            j += 1
        tps.append(tps[-1] + int(sorted_labels[i:j].sum()))
        fps.append(fps[-1] + int((~sorted_labels[i:j]).sum()))
        i = j
    tpr = np.asarray(tps, dtype=np.float64) / n_pos
    fpr = np.asarray(fps, dtype=np.float64) / n_neg
    area = float(np.trapezoid(tpr, fpr))
    return RocCurve(fpr, tpr, area)


def rate_jaccard(ji: float) -> str:
    """Quality band of one Jaccard index: Bad below 0.65, Good from 0.65,
    Excellent from 0.9."""
    if not 0.0 <= ji <= 1.0:
        raise InvalidInputError(f"Jaccard index {ji} outside [0, 1]")
    if ji < JACCARD_GOOD:
        return "Bad"
    if ji < JACCARD_EXCELLENT:
        return "Good"
    return "Excellent"


@dataclass
class SimEvalConfig:
    """Settings of the simulated expert-interaction protocol."""

    max_input_seeds: int = 10
    max_evaluation: int = 20
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.max_input_seeds < 2 or self.max_evaluation < 1:
            raise InvalidInputError("need max_input_seeds >= 2 and max_evaluation >= 1")


@dataclass
class SimEvalResult:
    best: Metrics
    best_n_seeds: int
    per_seed_count: list[Metrics] = field(default_factory=list)


def _sample_coords(region: np.ndarray, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    ys, xs = np.nonzero(region)
    if ys.size == 0:
        raise InvalidInputError("cannot sample seeds from an empty region")
    replace = ys.size < count
    if replace:
        warnings.warn("fewer region pixels than seeds; sampling with replacement", stacklevel=3)
    idx = rng.choice(ys.size, size=count, replace=replace)
    return [(int(xs[i]), int(ys[i])) for i in idx]


def simulate_interactive_eval(
    gt_mask: np.ndarray,
    segmenter: Callable[[Sequence[tuple[int, int]], Sequence[tuple[int, int]]], np.ndarray],
    cfg: SimEvalConfig,
) -> SimEvalResult:
    """Simulated expert evaluation of an interactive segmenter.

    For each total seed count n in 2..max_input_seeds, floor(n/2)
    foreground and ceil(n/2) background seeds are sampled uniformly from
    the ground truth, max_evaluation times, and the segmenter is scored
    against the ground truth.  The best entry per n and the overall best
    are selected by Jaccard index.  Deterministic for a fixed seed.

    The segmenter receives lists of (x, y) foreground and background
    seed coordinates and must return a boolean mask.
    """
    gt = np.asarray(gt_mask, dtype=bool)
    if not gt.any() or gt.all():
        raise InvalidInputError("ground truth needs foreground and background")
    rng = np.random.default_rng(cfg.rng_seed)
    per_n: list[Metrics] = []
    for n in range(2, cfg.max_input_seeds + 1):
        n_fg = n // 2
        n_bg = n - n_fg
        best_entry: Metrics | None = None
        for _ in range(cfg.max_evaluation):
            fg = _sample_coords(gt, n_fg, rng)
            bg = _sample_coords(~gt, n_bg, rng)
            predicted = segmenter(fg, bg)
            entry = confusion_metrics(mask_confusion(predicted, gt))
            if best_entry is None or entry.jaccard > best_entry.jaccard:
                best_entry = entry
        per_n.append(best_entry)
    best_idx = int(np.argmax([m.jaccard for m in per_n]))
    return SimEvalResult(
        best=per_n[best_idx],
        best_n_seeds=best_idx + 2,
        per_seed_count=per_n,
    )


@dataclass
class LoocvReport:
    """Mean and standard deviation over repeated LOOCV runs.

    ``roc_points`` holds the first run's per-class one-vs-rest ROC
    curves as (fpr, tpr) point lists for plotting.
    """

    mean: Metrics
    std: Metrics
    mean_auc: float
    std_auc: float
    runs: int
    folds: int
    per_run: list[Metrics] = field(default_factory=list)
    roc_points: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "runs": self.runs,
            "folds": self.folds,
            "mean": self.mean.as_dict(),
            "std": self.std.as_dict(),
            "mean_auc": self.mean_auc,
            "std_auc": self.std_auc,
            "roc_points": self.roc_points,
        }


def _macro_ovr_auc(truth: np.ndarray, scores: np.ndarray) -> float:
    """Macro one-vs-rest AUC over the output-neuron scores."""
    aucs = []
    for cls in range(scores.shape[1]):
        labels = truth == cls
        if labels.all() or not labels.any():
            continue
        aucs.append(roc_auc(scores[:, cls], labels).auc)
    return float(np.mean(aucs)) if aucs else 0.0


def loocv_classify(
    samples: SampleSet,
    hidden: int = 150,
    gamma_exp: float = -2.0,
    runs: int = 50,
    rng_seed: int = 0,
    smote_k: int = 5,
) -> LoocvReport:
    """Leave-one-out cross validation averaged over repeated runs.

    The scaler, SMOTE and network are refitted on the remaining samples
    of every fold, so the held-out sample never leaks into the
    statistics.  Each run uses an independent seed derived from the
    master seed.
    """
    n = samples.features.shape[0]
    if len(samples.class_names) < 2:
        raise InvalidInputError("need at least two classes")
    run_seeds = np.random.SeedSequence(rng_seed).generate_state(runs)
    per_run: list[Metrics] = []
    per_run_auc: list[float] = []
    roc_points: dict[str, list[tuple[float, float]]] = {}
    for r in range(runs):
        predictions = np.zeros(n, dtype=np.int64)
        scores = np.zeros((n, len(samples.class_names)))
        for i in range(n):
            keep = np.arange(n) != i
            fold = SampleSet(
                samples.features[keep], samples.labels[keep], list(samples.class_names)
            )
            model = train_classifier(
                fold,
                hidden=hidden,
                gamma_exp=gamma_exp,
                rng_seed=int(run_seeds[r]),
                smote_k=smote_k,
            )
            outputs, label = relm_predict(model, samples.features[i])
            predictions[i] = label
            scores[i] = outputs
        per_run.append(multiclass_metrics(samples.labels, predictions, len(samples.class_names)))
        per_run_auc.append(_macro_ovr_auc(samples.labels, scores))
        if r == 0:
            for cls, name in enumerate(samples.class_names):
                positives = samples.labels == cls
                if positives.any() and not positives.all():
                    curve = roc_auc(scores[:, cls], positives)
                    roc_points[name] = list(zip(curve.fpr.tolist(), curve.tpr.tolist()))

    def collect(attr: str) -> np.ndarray:
        return np.array([getattr(m, attr) for m in per_run])

    fields = ["sensitivity", "specificity", "accuracy", "balanced_accuracy", "jaccard"]
    means = {f: float(collect(f).mean()) for f in fields}
    stds = {f: float(collect(f).std()) for f in fields}
    return LoocvReport(
        mean=Metrics(**means),
        std=Metrics(**stds),
        mean_auc=float(np.mean(per_run_auc)),
        std_auc=float(np.std(per_run_auc)),
        runs=runs,
        folds=n,
        per_run=per_run,
        roc_points=roc_points,
    )
