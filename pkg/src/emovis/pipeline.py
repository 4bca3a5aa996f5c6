"""Full rendering chain, shipped emotion presets, and the VA quadrant mapper."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .core import (
    BorderCaseError,
    ControlVector,
    Emotion,
    LinearImage,
    LumaChroma,
    PipelineConfig,
    VAVector,
    lumachroma_to_rgb,
    rgb_to_lumachroma,
)
from . import ops


@dataclass(frozen=True)
class EmotionPreset:
    emotion: Emotion
    vector: ControlVector


# Calibrated control vectors shipped with the engine (rounded to 2 decimals).
PRESETS: Dict[Emotion, ControlVector] = {
    Emotion.ANGRY: ControlVector(
        alpha_s=0.15, alpha_yb=0.0, alpha_rg=0.19,
        alpha_lc=0.32, alpha_b=-0.08, alpha_p=0.7,
    ),
    Emotion.CALM: ControlVector(alpha_p=-0.2),
    Emotion.HAPPY: ControlVector(alpha_s=0.2, alpha_lc=0.14, alpha_b=0.19),
    Emotion.SAD: ControlVector(
        alpha_s=-0.18, alpha_yb=-0.1, alpha_rg=0.0,
        alpha_lc=-0.02, alpha_b=-0.09, alpha_p=0.0,
    ),
    Emotion.NEUTRAL: ControlVector.zero(),
}


def preset_for_emotion(emotion: Emotion) -> ControlVector:
    """Calibrated control vector for an emotion, verbatim."""
    return PRESETS[emotion]


def presets_text() -> str:
    """Presets as a plain key-value document (one source of truth for UIs)."""
    lines = []
    for emotion in (Emotion.HAPPY, Emotion.CALM, Emotion.ANGRY,
                    Emotion.SAD, Emotion.NEUTRAL):
        vec = PRESETS[emotion]
        for name in ControlVector.ORDER:
            lines.append(f"{emotion.value}.{name} = {getattr(vec, name)}")
    return "\n".join(lines) + "\n"


def quadrant_from_va(va: VAVector) -> Emotion:
    """Map signed valence/arousal onto an emotion quadrant.

    Zero on either axis is rejected as a border case rather than guessed.
    """
    if va.valence == 0.0 or va.arousal == 0.0:
        raise BorderCaseError(
            f"valence/arousal ({va.valence}, {va.arousal}) on a quadrant border"
        )
    if va.valence > 0.0:
        return Emotion.HAPPY if va.arousal > 0.0 else Emotion.CALM
    return Emotion.ANGRY if va.arousal > 0.0 else Emotion.SAD


@dataclass(frozen=True)
class RenderRequest:
    image: LinearImage
    vector: ControlVector
    config: PipelineConfig = field(default_factory=PipelineConfig)
    encoding: str = "linear16"  # "linear16" | "srgb8"


def render_image(img: LinearImage, vector: ControlVector,
                 cfg: Optional[PipelineConfig] = None) -> LinearImage:
    """Apply the full chain: saturation -> tint -> tone map -> sharpen.

    Color operators run in linear light before the non-linear tone map;
    sharpening runs on tone-mapped luminance. Deterministic.
    """
    cfg = cfg or PipelineConfig()
    lc = rgb_to_lumachroma(img)
    lc = ops.apply_saturation(lc, vector.alpha_s, cfg.eps)
    rgb = lumachroma_to_rgb(lc).data
    coeffs = ops.tint_coefficients(vector.alpha_rg, vector.alpha_yb)
    rgb = ops.apply_tint(rgb, coeffs, cfg.eps)
    lc2 = rgb_to_lumachroma(LinearImage(rgb))
    y_tm = ops.tone_map(lc2.y, vector.alpha_b, vector.alpha_lc, cfg)
    y_s = ops.sharpen(y_tm, vector.alpha_p, cfg)
    return lumachroma_to_rgb(LumaChroma(y=y_s, cr=lc2.cr, cb=lc2.cb))


def render(req: RenderRequest) -> LinearImage:
    return render_image(req.image, req.vector, req.config)


@dataclass(frozen=True)
class TrialDescriptor:
    """Blinded description of one A/B pair."""

    image_id: str
    shown_emotion: Emotion
    is_correct_emotion: bool
    emotion_side: str  # "left" | "right"

    def as_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "shown_emotion": self.shown_emotion.value,
            "is_correct_emotion": self.is_correct_emotion,
            "emotion_side": self.emotion_side,
        }


def render_ab_pair(img: LinearImage, correct: Emotion, wrong: Emotion,
                   cfg: Optional[PipelineConfig] = None, *,
                   seed=0, image_id: str = "") -> Tuple[LinearImage, LinearImage, TrialDescriptor]:
    """Neutral render plus one emotion render, with seeded blinded assignment.

    The seeded generator picks both the shown condition (correct vs wrong
    emotion) and the side the emotion render goes to; the descriptor records
    the assignment so tallies can be unblinded later.
    """
    if correct == Emotion.NEUTRAL:
        raise ValueError("the correct emotion of an A/B trial cannot be neutral")
    rng = random.Random(seed)
    show_correct = rng.random() < 0.5
    emotion_side = "left" if rng.random() < 0.5 else "right"
    shown = correct if show_correct else wrong
    neutral_out = render_image(img, PRESETS[Emotion.NEUTRAL], cfg)
    emotion_out = render_image(img, preset_for_emotion(shown), cfg)
    desc = TrialDescriptor(
        image_id=image_id,
        shown_emotion=shown,
        is_correct_emotion=show_correct,
        emotion_side=emotion_side,
    )
    return neutral_out, emotion_out, desc
