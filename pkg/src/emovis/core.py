"""Shared domain types and numeric conventions.

All pipeline math runs on [0,1]-normalized float64 buffers; quantization
happens only at I/O boundaries.  Every type here is an immutable value and
every function is pure, so buffers may be shared read-only across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import ClassVar, Optional, Tuple

import numpy as np

# BT.709 luma weights.  Luma is evaluated as
#   Y = G + WR*(R-G) + WB*(B-G)
# which is algebraically the usual weighted sum but keeps Y == G exactly on
# the gray axis, so gray pixels get chroma (0, 0) with no rounding residue.
LUMA_WR = 0.2126
LUMA_WB = 0.0722
_LUMA_WG = 1.0 - LUMA_WR - LUMA_WB


class EmovisError(Exception):
    """Base class for domain errors."""


class BorderCaseError(EmovisError, ValueError):
    """A valence/arousal component sits exactly on a quadrant border."""


class DegenerateExposureError(EmovisError, ValueError):
    """Average luminance or brightness target outside (0, 1)."""


class InsufficientDataError(EmovisError, ValueError):
    """A statistical routine was handed too few cells/records."""


class Emotion(Enum):
    HAPPY = "happy"
    CALM = "calm"
    ANGRY = "angry"
    SAD = "sad"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class ControlVector:
    """The six rendering modifiers, all zero meaning neutral processing.

    Canonical serialization order is (S, YB, RG, LC, B, P).
    """

    alpha_s: float = 0.0
    alpha_yb: float = 0.0
    alpha_rg: float = 0.0
    alpha_lc: float = 0.0
    alpha_b: float = 0.0
    alpha_p: float = 0.0

    ORDER: ClassVar[Tuple[str, ...]] = (
        "alpha_s", "alpha_yb", "alpha_rg", "alpha_lc", "alpha_b", "alpha_p",
    )

    def __post_init__(self) -> None:
        for name in self.ORDER:
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(getattr(self, name) for name in self.ORDER)

    @classmethod
    def from_tuple(cls, values) -> "ControlVector":
        values = tuple(float(v) for v in values)
        if len(values) != 6:
            raise ValueError(f"expected 6 values (S,YB,RG,LC,B,P), got {len(values)}")
        return cls(**dict(zip(cls.ORDER, values)))

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.ORDER}

    @classmethod
    def zero(cls) -> "ControlVector":
        return cls()


@dataclass(frozen=True)
class VAVector:
    """Signed valence/arousal pair, centered at 0."""

    valence: float
    arousal: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.valence) and math.isfinite(self.arousal)):
            raise ValueError("valence and arousal must be finite")


@dataclass(frozen=True)
class LinearImage:
    """Linear-light RGB raster, samples in [0, 1], float64."""

    data: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.data, dtype=np.float64)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) array, got shape {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.isfinite(a).all():
            raise ValueError("samples must be finite")
        if a.min() < 0.0 or a.max() > 1.0:
            raise ValueError("samples must lie in [0, 1]")
        object.__setattr__(self, "data", a)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class LumaChroma:
    """Opponent representation: Y in [0,1], C_R/C_B in [-0.5, 0.5]."""

    y: np.ndarray
    cr: np.ndarray
    cb: np.ndarray

    def chroma_magnitude(self) -> np.ndarray:
        """S = ||(C_R, C_B)||_2 per pixel."""
        return np.hypot(self.cr, self.cb)


@dataclass(frozen=True)
class PipelineConfig:
    """Every constant the rendering equations leave open.

    roi is a half-open (row0, col0, row1, col1) rectangle used for the
    luminance average; None means the whole frame.  clahe_enabled=False turns
    the histogram operator into the identity (used for bit-exactness checks).
    """

    eps: float = 1e-6
    T: float = 0.18
    zeta: float = 0.0
    p: float = 0.5
    sigma: float = 1.5
    gf_radius: int = 8
    gf_eps: float = 1e-3
    clahe_tiles: Tuple[int, int] = (8, 8)
    clahe_clip: float = 2.0
    clahe_enabled: bool = True
    roi: Optional[Tuple[int, int, int, int]] = None

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError("eps must be > 0")
        if not 0.0 < self.T < 1.0:
            raise ValueError("T must lie in (0, 1)")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.gf_radius < 1:
            raise ValueError("gf_radius must be >= 1")
        if not self.gf_eps > 0:
            raise ValueError("gf_eps must be > 0")
        ty, tx = self.clahe_tiles
        if ty < 1 or tx < 1:
            raise ValueError("clahe_tiles must be >= 1 in both directions")
        if self.clahe_clip < 1.0:
            raise ValueError("clahe_clip must be >= 1")
        if self.roi is not None:
            r0, c0, r1, c1 = self.roi
            if r1 <= r0 or c1 <= c0:
                raise ValueError("roi must be a non-empty (row0,col0,row1,col1) rectangle")

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        return replace(self, **kwargs)


def rgb_to_lumachroma(img: LinearImage) -> LumaChroma:
    """BT.709 luma with half-difference opponent chroma.

    Exactly invertible on the valid gamut; gray pixels yield chroma (0, 0)
    with zero rounding error.
    """
    a = img.data
    r, g, b = a[..., 0], a[..., 1], a[..., 2]
    y = g + LUMA_WR * (r - g) + LUMA_WB * (b - g)
    cr = (r - y) / 2.0
    cb = (b - y) / 2.0
    return LumaChroma(y=y, cr=cr, cb=cb)


def lumachroma_to_rgb(lc: LumaChroma) -> LinearImage:
    """Inverse of rgb_to_lumachroma, clamped to [0, 1]."""
    y, cr, cb = lc.y, lc.cr, lc.cb
    r = y + 2.0 * cr
    b = y + 2.0 * cb
    g = (y - LUMA_WR * r - LUMA_WB * b) / _LUMA_WG
    out = np.stack([r, g, b], axis=-1)
    np.clip(out, 0.0, 1.0, out=out)
    return LinearImage(out)
