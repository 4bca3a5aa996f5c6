"""Local HTTP service backing the interactive calibration study.

Serves trial assignments and live previews, and appends calibration / A-B
records as line-delimited JSON with a flush per record.  Loopback-only lab
tool: no auth, in-memory sessions, append-only persistence.
"""
from __future__ import annotations

import itertools
import json
import math
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

import cv2
import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response

from .core import ControlVector, Emotion, LinearImage, PipelineConfig
from . import imgio, pipeline, stats

INSTRUCTION = ("Use the sliders to select a visual appearance for the image "
               "that best matches the target emotion.")

TRIAL_EMOTIONS = (Emotion.HAPPY, Emotion.CALM, Emotion.ANGRY, Emotion.SAD)

DRAFT_MAX_SIDE = 1024


@dataclass(frozen=True)
class TrialAssignment:
    trial_id: str
    image_id: str
    target_emotion: Emotion
    instruction: str = INSTRUCTION

    def as_dict(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "image_id": self.image_id,
            "target_emotion": self.target_emotion.value,
            "instruction": self.instruction,
        }


@dataclass
class SessionState:
    session_id: str
    subject_id: str
    seed: int
    queue: List[TrialAssignment]
    completed: int = 0
    current: Optional[TrialAssignment] = None
    submitted: Set[str] = field(default_factory=set)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _trial_plan(image_ids: List[str], seed: int) -> List[TrialAssignment]:
    """Deterministic shuffled (image, emotion) plan; no pair repeats."""
    pairs = list(itertools.product(sorted(image_ids), TRIAL_EMOTIONS))
    rng = random.Random(seed)
    rng.shuffle(pairs)
    return [TrialAssignment(trial_id=f"t{i:04d}", image_id=img, target_emotion=emo)
            for i, (img, emo) in enumerate(pairs)]


def _downscale(img: LinearImage, max_side: int) -> LinearImage:
    h, w = img.height, img.width
    longest = max(h, w)
    if longest <= max_side:
        return img
    scale = max_side / longest
    nh, nw = max(1, round(h * scale)), max(1, round(w * scale))
    resized = cv2.resize(img.data, (nw, nh), interpolation=cv2.INTER_AREA)
    return LinearImage(np.clip(resized, 0.0, 1.0))


class CalibrationService:
    def __init__(self, image_dir, records_dir, cfg: Optional[PipelineConfig] = None):
        self.image_dir = Path(image_dir)
        self.records_dir = Path(records_dir)
        self.records_dir.mkdir(parents=True, exist_ok=True)
        self.cfg = cfg or PipelineConfig()
        self.sessions: Dict[str, SessionState] = {}
        self.sessions_lock = threading.Lock()
        self.records_lock = threading.Lock()
        self._image_cache: Dict[str, LinearImage] = {}
        self._cache_lock = threading.Lock()

    def image_ids(self) -> List[str]:
        ids = sorted(p.stem for p in self.image_dir.iterdir()
                     if p.suffix.lower() in (".ppm", ".png"))
        return ids

    def load(self, image_id: str) -> LinearImage:
        with self._cache_lock:
            if image_id in self._image_cache:
                return self._image_cache[image_id]
        matches = sorted(p for p in self.image_dir.iterdir() if p.stem == image_id)
        if not matches:
            raise KeyError(image_id)
        img = imgio.load_image(matches[0])
        with self._cache_lock:
            self._image_cache[image_id] = img
        return img

    def append_record(self, filename: str, payload: dict) -> None:
        with self.records_lock:
            with open(self.records_dir / filename, "a") as fh:
                fh.write(json.dumps(payload) + "\n")
                fh.flush()


def create_app(image_dir, records_dir, cfg: Optional[PipelineConfig] = None) -> FastAPI:
    svc = CalibrationService(image_dir, records_dir, cfg)
    app = FastAPI(title="emovis calibration service")
    app.state.service = svc

    @app.get("/session/new")
    def session_new(subject: str, seed: Optional[int] = None):
        ids = svc.image_ids()
        if not ids:
            raise HTTPException(status_code=500, detail="image corpus is empty")
        if seed is None:
            seed = random.SystemRandom().randrange(2 ** 31)
        session_id = uuid.uuid4().hex
        state = SessionState(session_id=session_id, subject_id=subject,
                             seed=seed, queue=_trial_plan(ids, seed))
        with svc.sessions_lock:
            svc.sessions[session_id] = state
        return {"session_id": session_id, "subject_id": subject,
                "seed": seed, "trial_count": len(state.queue)}

    def _session(session_id: str) -> SessionState:
        with svc.sessions_lock:
            state = svc.sessions.get(session_id)
        if state is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return state

    @app.get("/trial/next")
    def trial_next(session: str):
        state = _session(session)
        with state.lock:
            if not state.queue:
                raise HTTPException(status_code=410, detail="session exhausted")
            state.current = state.queue.pop(0)
            return state.current.as_dict()

    @app.get("/preview")
    def preview(image: str, alphas: str, quality: str = "draft"):
        if quality not in ("draft", "full"):
            raise HTTPException(status_code=400, detail="quality must be draft or full")
        parts = alphas.split(",")
        if len(parts) != 6:
            raise HTTPException(status_code=400,
                                detail="alphas needs 6 values (S,YB,RG,LC,B,P)")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise HTTPException(status_code=400, detail="malformed alpha value")
        if not all(math.isfinite(v) for v in values):
            raise HTTPException(status_code=400, detail="alpha values must be finite")
        vector = ControlVector.from_tuple(values)
        try:
            img = svc.load(image)
        except (KeyError, FileNotFoundError):
            raise HTTPException(status_code=404, detail=f"unknown image {image!r}")
        if quality == "draft":
            img = _downscale(img, DRAFT_MAX_SIDE)
        out = pipeline.render_image(img, vector, svc.cfg)
        return Response(content=imgio.encode_png8(out), media_type="image/png")

    @app.post("/calibration")
    def submit_calibration(body: dict):
        state = _session(body.get("session_id", ""))
        trial_id = body.get("trial_id")
        if not trial_id:
            raise HTTPException(status_code=400, detail="missing trial_id")
        try:
            vector = ControlVector(**body["vector"])
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed vector: {exc}")
        with state.lock:
            if trial_id in state.submitted:
                raise HTTPException(status_code=409, detail="trial already submitted")
            current = state.current
            if current is None or current.trial_id != trial_id:
                raise HTTPException(status_code=400, detail="trial_id is not the active trial")
            record = stats.CalibrationRecord(
                subject_id=state.subject_id,
                image_id=current.image_id,
                target_emotion=current.target_emotion,
                chosen=vector,
                timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
            )
            svc.append_record("calibration.jsonl", record.as_dict())
            state.submitted.add(trial_id)
            state.completed += 1
        return {"status": "ok", "completed": state.completed}

    @app.post("/ab-choice")
    def submit_ab_choice(body: dict):
        state = _session(body.get("session_id", ""))
        trial_id = body.get("trial_id")
        if not trial_id:
            raise HTTPException(status_code=400, detail="missing trial_id")
        try:
            record = stats.ABRecord(
                subject_id=state.subject_id,
                clip_id=body["clip_id"],
                shown_emotion=Emotion(body["shown_emotion"]),
                is_correct_emotion=bool(body["is_correct_emotion"]),
                side=body["side"],
                choice=body["choice"],
                timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
            )
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed record: {exc}")
        with state.lock:
            key = f"ab:{trial_id}"
            if key in state.submitted:
                raise HTTPException(status_code=409, detail="trial already submitted")
            svc.append_record("ab.jsonl", record.as_dict())
            state.submitted.add(key)
            state.completed += 1
        return {"status": "ok", "completed": state.completed}

    @app.get("/images/{image_id}")
    def get_image(image_id: str):
        try:
            img = svc.load(image_id)
        except (KeyError, FileNotFoundError):
            raise HTTPException(status_code=404, detail=f"unknown image {image_id!r}")
        return Response(content=imgio.encode_png8(img), media_type="image/png")

    return app


def main(argv=None) -> None:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="emovis-service")
    parser.add_argument("--images", required=True, help="directory of study images")
    parser.add_argument("--records", required=True, help="directory for record logs")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8321)
    args = parser.parse_args(argv)
    uvicorn.run(create_app(args.images, args.records),
                host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
