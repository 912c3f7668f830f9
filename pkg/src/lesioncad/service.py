"""HTTP API backing the annotation UI.

Endpoints (JSON unless noted):

* ``GET  /api/images``                list available images
* ``GET  /api/images/{id}``           standardized 300x225 PNG
* ``GET  /api/model``                 loaded-model metadata
* ``POST /api/sessions``              open a session on an image
* ``GET  /api/sessions/{id}``         session state (seeds, mask)
* ``POST /api/sessions/{id}/seeds``   append seeds, re-segment
* ``POST /api/sessions/{id}/reset``   drop seeds and mask
* ``POST /api/sessions/{id}/classify`` diagnose the current mask

Seed coordinates travel in 300x225 space; masks are inline base64 PNGs.
Sessions are memory-resident and locked individually; the model is
shared read-only.
"""

from __future__ import annotations

import base64
import io
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from PIL import Image
from pydantic import BaseModel

from lesioncad.classifier import RelmModel, fuse_context, relm_predict
from lesioncad.dataset import encode_context, load_manifest
from lesioncad.features import FEATURE_NAMES, extract_feature_vector
from lesioncad.imaging import (
    RasterImage,
    load_image,
    mask_to_standard,
    read_mask_png,
    resize_standard,
)
from lesioncad.preprocessing import preprocess, remove_hair, shades_of_gray
from lesioncad.segmentation import (
    ContradictorySeedsError,
    Seed,
    SeedSet,
    SegmentationParams,
    isnn_label_pixels,
    refine_mask,
)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


class SeedIn(BaseModel):
    x: int
    y: int
    label: str


class SeedsRequest(BaseModel):
    seeds: list[SeedIn]
    m: float = 0.1


class SessionRequest(BaseModel):
    image_id: str


class ClassifyRequest(BaseModel):
    context: dict | None = None


@dataclass
class SessionState:
    image_id: str
    seeds: list[Seed] = field(default_factory=list)
    mask: np.ndarray | None = None
    m: float = 0.1
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class _ImageEntry:
    path: Path
    gt_path: Path | None = None
    # Cached per-image preparation: (lab_for_segmentation, color_for_features)
    prepared: tuple | None = None


def _mask_to_base64_png(mask: np.ndarray) -> str:
    data = np.where(mask, 255, 0).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(data, mode="L").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def create_app(
    images_dir: Path,
    model: RelmModel | None = None,
    manifest_path: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="lesioncad", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    images: dict[str, _ImageEntry] = {}
    for p in sorted(Path(images_dir).iterdir()):
        if p.suffix.lower() in IMAGE_SUFFIXES:
            images[p.stem] = _ImageEntry(path=p)
    if manifest_path is not None:
        manifest = load_manifest(manifest_path)
        for entry in manifest.entries:
            stem = entry.image_path.stem
            if stem in images and entry.gt_mask_path is not None:
                images[stem].gt_path = entry.gt_mask_path

    sessions: dict[str, SessionState] = {}
    registry_lock = threading.Lock()

    def _get_image(image_id: str) -> _ImageEntry:
        entry = images.get(image_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown image {image_id!r}")
        return entry

    def _prepared(entry: _ImageEntry):
        if entry.prepared is None:
            standardized = resize_standard(load_image(entry.path))
            lab, _ = preprocess(standardized)
            dehaired, _ = remove_hair(standardized)
            color = shades_of_gray(dehaired)
            entry.prepared = (lab, color, standardized)
        return entry.prepared

    def _get_session(session_id: str) -> SessionState:
        state = sessions.get(session_id)
        if state is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return state

    @app.get("/api/images")
    def list_images():
        return [{"id": key, "name": entry.path.name} for key, entry in images.items()]

    @app.get("/api/images/{image_id}")
    def get_image(image_id: str):
        entry = _get_image(image_id)
        _, _, standardized = _prepared(entry)
        buf = io.BytesIO()
        Image.fromarray(standardized.rgb).save(buf, format="PNG")
        return Response(content=buf.getvalue(), media_type="image/png")

    @app.get("/api/model")
    def model_info():
        if model is None:
            return {"loaded": False}
        return {
            "loaded": True,
            "classes": model.class_names,
            "context_schema": model.context_schema,
            "hidden": model.hidden,
            "gamma_exp": model.gamma_exp,
            "n_inputs": model.n_inputs,
        }

    @app.post("/api/sessions", status_code=201)
    def create_session(req: SessionRequest):
        entry = _get_image(req.image_id)
        lab, _, _ = _prepared(entry)
        session_id = uuid.uuid4().hex
        with registry_lock:
            sessions[session_id] = SessionState(image_id=req.image_id)
        return {
            "session_id": session_id,
            "image_id": req.image_id,
            "width": lab.width,
            "height": lab.height,
        }

    @app.get("/api/sessions/{session_id}")
    def session_state(session_id: str):
        state = _get_session(session_id)
        with state.lock:
            return {
                "session_id": session_id,
                "image_id": state.image_id,
                "seeds": [{"x": s.x, "y": s.y, "label": s.label} for s in state.seeds],
                "m": state.m,
                "mask_png_base64": _mask_to_base64_png(state.mask)
                if state.mask is not None
                else None,
            }

    @app.post("/api/sessions/{session_id}/reset")
    def reset_session(session_id: str):
        state = _get_session(session_id)
        with state.lock:
            state.seeds = []
            state.mask = None
        return {"session_id": session_id, "seeds": []}

    @app.post("/api/sessions/{session_id}/seeds")
    def add_seeds(session_id: str, req: SeedsRequest):
        state = _get_session(session_id)
        entry = _get_image(state.image_id)
        lab, _, _ = _prepared(entry)
        with state.lock:
            merged = list(state.seeds)
            for s in req.seeds:
                seed = Seed(s.x, s.y, s.label)
                if seed not in merged:
                    merged.append(seed)
            n_fg = sum(1 for s in merged if s.label == "fg")
            n_bg = sum(1 for s in merged if s.label == "bg")
            state.seeds = merged  # seeds accumulate even before both labels exist
            if n_fg < 1 or n_bg < 1:
                raise HTTPException(
                    status_code=422,
                    detail="need at least one foreground and one background seed",
                )
            seed_set = SeedSet(merged)
            try:
                seed_set.check_bounds(lab.height, lab.width)
                params = SegmentationParams.for_image(lab.height, lab.width, m=req.m)
                mask = refine_mask(isnn_label_pixels(lab, seed_set, params), seed_set)
            except ContradictorySeedsError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            state.mask = mask
            state.m = req.m
            payload = {
                "session_id": session_id,
                "seeds": [{"x": s.x, "y": s.y, "label": s.label} for s in merged],
                "mask_png_base64": _mask_to_base64_png(mask),
                "foreground_pixels": int(mask.sum()),
            }
            if entry.gt_path is not None:
                from lesioncad.evaluation import mask_confusion, confusion_metrics

                gt = mask_to_standard(read_mask_png(entry.gt_path))
                payload["jaccard"] = confusion_metrics(mask_confusion(mask, gt)).jaccard
            return payload

    @app.post("/api/sessions/{session_id}/classify")
    def classify(session_id: str, req: ClassifyRequest):
        if model is None:
            raise HTTPException(status_code=503, detail="no model loaded")
        state = _get_session(session_id)
        entry = _get_image(state.image_id)
        _, color, _ = _prepared(entry)
        with state.lock:
            if state.mask is None:
                raise HTTPException(status_code=409, detail="segment the image first")
            fv = extract_feature_vector(color, state.mask)
            if model.context_schema:
                if req.context is None:
                    raise HTTPException(
                        status_code=422,
                        detail=f"model requires context fields {model.context_schema}",
                    )
                try:
                    ctx = encode_context(req.context, model.context_schema)
                except ValueError as exc:
                    raise HTTPException(status_code=422, detail=str(exc)) from exc
                row = fuse_context(fv.values, ctx)
            else:
                row = fv.values
            if row.shape[0] != model.n_inputs:
                raise HTTPException(
                    status_code=422,
                    detail=f"model expects {model.n_inputs} inputs, got {row.shape[0]}",
                )
            outputs, label_idx = relm_predict(model, row)
            return {
                "label": model.class_names[label_idx],
                "outputs": dict(zip(model.class_names, outputs.tolist())),
                "features": dict(zip(FEATURE_NAMES, fv.values.tolist())),
                "model": {
                    "classes": model.class_names,
                    "context_schema": model.context_schema,
                    "hidden": model.hidden,
                    "gamma_exp": model.gamma_exp,
                },
            }

    return app
