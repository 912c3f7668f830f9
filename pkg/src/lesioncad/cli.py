"""Batch command-line interface.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Batch
commands report per-entry failures and keep going.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click
import numpy as np

from lesioncad import evaluation as ev
from lesioncad.classifier import RelmModel, train_classifier
from lesioncad.dataset import load_manifest
from lesioncad.features import FEATURE_NAMES
from lesioncad.imaging import (
    load_image,
    mask_to_original,
    mask_to_standard,
    read_mask_png,
    resize_standard,
    write_mask_png,
)
from lesioncad.pipeline import features_from_files, manifest_to_samples
from lesioncad.preprocessing import preprocess
from lesioncad.segmentation import (
    Seed,
    SeedSet,
    SegmentationParams,
    isnn_label_pixels,
    refine_mask,
    segment,
)


@click.group()
def main() -> None:
    """Interactive lesion segmentation, feature extraction and diagnosis."""


@main.command("segment")
@click.option("--image", "image_path", required=True, type=click.Path(exists=True))
@click.option("--seeds", "seeds_path", required=True, type=click.Path(exists=True),
              help="JSON list of {x, y, label} seeds in 300x225 coordinates.")
@click.option("--m", default=0.1, show_default=True, help="Spatial compactness weight.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--original-size", is_flag=True, help="Resample the mask to the input size.")
def segment_cmd(image_path, seeds_path, m, out_path, original_size) -> None:
    """Segment one image from a seeds file and write a 0/255 PNG mask."""
    try:
        img = load_image(image_path)
        seeds = SeedSet.from_json(Path(seeds_path).read_text(encoding="utf-8"))
        mask = segment(img, seeds, m=m)
        if original_size:
            mask = mask_to_original(mask, img.original_size)
        write_mask_png(mask, out_path)
        click.echo(f"wrote {out_path} ({int(mask.sum())} foreground pixels)")
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc


@main.command("features")
@click.option("--image", "image_path", required=True, type=click.Path(exists=True))
@click.option("--mask", "mask_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="CSV destination; stdout when omitted.")
def features_cmd(image_path, mask_path, out_path) -> None:
    """Extract the 59-value descriptor for one image/mask pair as CSV."""
    try:
        fv = features_from_files(image_path, mask_path)
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc
    rows = [["image", *FEATURE_NAMES], [image_path, *[repr(v) for v in fv.values.tolist()]]]
    if out_path:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerows(rows)
        click.echo(f"wrote {out_path}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerows(rows)


@main.command("train")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--context/--no-context", default=False, help="Fuse patient context into the input vector.")
@click.option("--hidden", default=150, show_default=True)
@click.option("--gamma-exp", default=-2.0, show_default=True,
              help="Regularization exponent; effective gamma is 10**value.")
@click.option("--runs", default=50, show_default=True,
              help="Refits used to report training-accuracy spread; the saved model uses --seed.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def train_cmd(manifest_path, context, hidden, gamma_exp, runs, seed, out_path) -> None:
    """Train a classifier on a labeled manifest and save it as JSON."""
    try:
        manifest = load_manifest(manifest_path)
        samples = manifest_to_samples(manifest, use_context=context)
        model = train_classifier(
            samples,
            hidden=hidden,
            gamma_exp=gamma_exp,
            rng_seed=seed,
            context_schema=manifest.context_schema if context else [],
        )
        model.save(out_path)
        from lesioncad.classifier import relm_predict

        accs = []
        run_seeds = np.random.SeedSequence(seed).generate_state(max(1, runs))
        for rs in run_seeds:
            m = train_classifier(
                samples, hidden=hidden, gamma_exp=gamma_exp, rng_seed=int(rs),
                context_schema=manifest.context_schema if context else [],
            )
            preds = [relm_predict(m, row)[1] for row in samples.features]
            accs.append(float(np.mean(np.asarray(preds) == samples.labels)))
        click.echo(
            f"saved {out_path}; training accuracy over {len(accs)} run(s): "
            f"{np.mean(accs):.3f} +/- {np.std(accs):.3f}"
        )
    except click.ClickException:
        raise
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc


@main.command("eval-seg")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--max-seeds", default=10, show_default=True)
@click.option("--max-eval", default=20, show_default=True)
@click.option("--m", default=0.1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def eval_seg_cmd(manifest_path, max_seeds, max_eval, m, seed, out_path) -> None:
    """Simulated-expert segmentation evaluation over a manifest with
    ground truth; CSV has one row per image plus the quality bands."""
    manifest = load_manifest(manifest_path)
    rows = []
    failures = []
    for i, entry in enumerate(manifest.entries):
        if entry.gt_mask_path is None:
            failures.append((i, "no ground-truth mask"))
            continue
        try:
            img = resize_standard(load_image(entry.image_path))
            gt = mask_to_standard(read_mask_png(entry.gt_mask_path))
            lab, _ = preprocess(img)
            params = SegmentationParams.for_image(lab.height, lab.width, m=m)

            def run_segmenter(fg, bg):
                seeds = SeedSet(
                    [Seed(x, y, "fg") for x, y in fg] + [Seed(x, y, "bg") for x, y in bg]
                )
                return refine_mask(isnn_label_pixels(lab, seeds, params), seeds)

            cfg = ev.SimEvalConfig(max_seeds, max_eval, rng_seed=seed + i)
            result = ev.simulate_interactive_eval(gt, run_segmenter, cfg)
            best = result.best
            rows.append(
                [
                    entry.image_path.name,
                    repr(best.jaccard),
                    repr(best.sensitivity),
                    repr(best.specificity),
                    repr(best.accuracy),
                    result.best_n_seeds,
                    ev.rate_jaccard(best.jaccard),
                ]
            )
        except Exception as exc:
            failures.append((i, str(exc)))
    header = ["image", "JI", "SE", "SP", "AC", "best_n_seeds", "rating"]
    if out_path:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    if rows:
        jis = np.array([float(r[1]) for r in rows])
        bands = [r[6] for r in rows]
        click.echo(
            f"mean JI {jis.mean():.4f} over {len(rows)} image(s); "
            f"Bad {bands.count('Bad')}, Good {bands.count('Good')}, "
            f"Excellent {bands.count('Excellent')}",
            err=True,
        )
    for i, msg in failures:
        click.echo(f"entry {i} failed: {msg}", err=True)
    if failures:
        sys.exit(1)


@main.command("eval-clf")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--context/--no-context", default=False)
@click.option("--hidden", default=150, show_default=True)
@click.option("--gamma-exp", default=-2.0, show_default=True)
@click.option("--runs", default=50, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def eval_clf_cmd(manifest_path, context, hidden, gamma_exp, runs, seed, out_path) -> None:
    """Leave-one-out classification report averaged over repeated runs."""
    try:
        manifest = load_manifest(manifest_path)
        samples = manifest_to_samples(manifest, use_context=context)
        report = ev.loocv_classify(
            samples, hidden=hidden, gamma_exp=gamma_exp, runs=runs, rng_seed=seed
        )
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc
    payload = report.as_dict()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        click.echo(f"wrote {out_path}")
    m = report.mean
    click.echo(
        f"LOOCV over {report.folds} folds, {report.runs} run(s): "
        f"SE {m.sensitivity:.3f} SP {m.specificity:.3f} AC {m.accuracy:.3f} "
        f"BAC {m.balanced_accuracy:.3f} AUC {report.mean_auc:.3f}"
    )


@main.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--images-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--model", "model_path", type=click.Path(exists=True), default=None)
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), default=None,
              help="Optional manifest providing ground truth for live Jaccard feedback.")
def serve_cmd(port, host, images_dir, model_path, manifest_path) -> None:
    """Serve the HTTP API backing the annotation UI."""
    import uvicorn

    from lesioncad.service import create_app

    model = RelmModel.load(model_path) if model_path else None
    app = create_app(Path(images_dir), model=model, manifest_path=manifest_path)
    uvicorn.run(app, host=host, port=port)


@main.command("demo")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--per-class", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--with-hair", is_flag=True)
@click.option("--train-model/--no-train-model", default=True,
              help="Also train and save a context-fused model next to the data.")
def demo_cmd(out_dir, per_class, seed, with_hair, train_model) -> None:
    """Generate a synthetic three-class dataset (and a trained model)."""
    from lesioncad.synthetic import make_synthetic_dataset

    try:
        manifest_path = make_synthetic_dataset(
            Path(out_dir), per_class=per_class, rng_seed=seed, with_hair=with_hair
        )
        click.echo(f"wrote {manifest_path}")
        if train_model:
            manifest = load_manifest(manifest_path)
            samples = manifest_to_samples(manifest, use_context=True)
            model = train_classifier(
                samples, rng_seed=seed, context_schema=manifest.context_schema
            )
            model_path = Path(out_dir) / "model.json"
            model.save(model_path)
            click.echo(f"wrote {model_path}")
    except Exception as exc:
        raise click.ClickException(str(exc)) from exc


if __name__ == "__main__":
    main()
