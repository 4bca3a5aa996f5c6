"""Emotion-steered ISP rendering engine with calibration and study tooling."""

from .core import (
    BorderCaseError,
    ControlVector,
    DegenerateExposureError,
    Emotion,
    EmovisError,
    InsufficientDataError,
    LinearImage,
    LumaChroma,
    PipelineConfig,
    VAVector,
    lumachroma_to_rgb,
    rgb_to_lumachroma,
)
from .pipeline import (
    EmotionPreset,
    PRESETS,
    RenderRequest,
    preset_for_emotion,
    quadrant_from_va,
    render,
    render_ab_pair,
    render_image,
)

__all__ = [
    "BorderCaseError",
    "ControlVector",
    "DegenerateExposureError",
    "Emotion",
    "EmotionPreset",
    "EmovisError",
    "InsufficientDataError",
    "LinearImage",
    "LumaChroma",
    "PRESETS",
    "PipelineConfig",
    "RenderRequest",
    "VAVector",
    "lumachroma_to_rgb",
    "preset_for_emotion",
    "quadrant_from_va",
    "render",
    "render_ab_pair",
    "render_image",
    "rgb_to_lumachroma",
]
