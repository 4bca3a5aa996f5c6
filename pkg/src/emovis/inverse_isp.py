"""Approximate inversion of display-referred 8-bit sRGB back to linear light.

The default path is the exact piecewise sRGB EOTF; a pure-gamma transfer and
an optional monotone tone spline / 3x3 color matrix cover footage with
stronger stylistic processing.  No attempt is made to restore quantized
precision: 8-bit input yields at most 256 distinct linear values per channel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import LinearImage


def srgb_eotf(v: np.ndarray) -> np.ndarray:
    """Display value [0,1] -> linear light, piecewise sRGB."""
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def srgb_oetf(x: np.ndarray) -> np.ndarray:
    """Linear light [0,1] -> display value, inverse of srgb_eotf."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        hi = 1.055 * np.power(x, 1.0 / 2.4) - 0.055
    return np.where(x <= 0.04045 / 12.92, x * 12.92, hi)


@dataclass(frozen=True)
class InverseConfig:
    """Transfer model for the inverse-ISP path.

    transfer is "srgb" or "gamma" (with the given gamma).  tone_curve, when
    set, is a strictly-monotone (x, y) knot list applied as a global tone
    curve in the forward direction and inverted (monotone interpolation of
    the swapped knots) when linearizing.  color_matrix defaults to identity,
    so sensor-color inversion stays off unless a matrix is supplied.
    """

    transfer: str = "srgb"
    gamma: float = 2.2
    tone_curve: Optional[Sequence[Sequence[float]]] = None
    color_matrix: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.transfer not in ("srgb", "gamma"):
            raise ValueError(f"unknown transfer {self.transfer!r}")
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if self.tone_curve is not None:
            knots = np.asarray(self.tone_curve, dtype=np.float64)
            if knots.ndim != 2 or knots.shape[1] != 2 or knots.shape[0] < 2:
                raise ValueError("tone_curve must be a list of >= 2 (x, y) knots")
            if not (np.all(np.diff(knots[:, 0]) > 0) and np.all(np.diff(knots[:, 1]) > 0)):
                raise ValueError("tone_curve knots must be strictly increasing")


def _inverse_transfer(v: np.ndarray, cfg: InverseConfig) -> np.ndarray:
    if cfg.transfer == "srgb":
        return srgb_eotf(v)
    return np.power(v, cfg.gamma)


def _forward_transfer(x: np.ndarray, cfg: InverseConfig) -> np.ndarray:
    if cfg.transfer == "srgb":
        return srgb_oetf(x)
    return np.power(x, 1.0 / cfg.gamma)


def linearize(srgb8: np.ndarray, cfg: Optional[InverseConfig] = None) -> LinearImage:
    """8-bit display-referred codes -> high-precision linear RGB in [0, 1]."""
    cfg = cfg or InverseConfig()
    codes = np.asarray(srgb8)
    if codes.dtype != np.uint8:
        raise ValueError(f"expected uint8 codes, got dtype {codes.dtype}")
    if codes.ndim != 3 or codes.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {codes.shape}")
    x = _inverse_transfer(codes.astype(np.float64) / 255.0, cfg)
    if cfg.tone_curve is not None:
        knots = np.asarray(cfg.tone_curve, dtype=np.float64)
        inv = PchipInterpolator(knots[:, 1], knots[:, 0])
        x = inv(np.clip(x, knots[0, 1], knots[-1, 1]))
    if cfg.color_matrix is not None:
        x = np.einsum("ij,hwj->hwi", np.asarray(cfg.color_matrix, dtype=np.float64), x)
    return LinearImage(np.clip(x, 0.0, 1.0))


def delinearize(img: LinearImage, cfg: Optional[InverseConfig] = None) -> np.ndarray:
    """Forward counterpart of linearize, quantized round-half-up to 8 bits."""
    cfg = cfg or InverseConfig()
    x = img.data
    if cfg.color_matrix is not None:
        m = np.linalg.inv(np.asarray(cfg.color_matrix, dtype=np.float64))
        x = np.clip(np.einsum("ij,hwj->hwi", m, x), 0.0, 1.0)
    if cfg.tone_curve is not None:
        knots = np.asarray(cfg.tone_curve, dtype=np.float64)
        fwd = PchipInterpolator(knots[:, 0], knots[:, 1])
        x = fwd(np.clip(x, knots[0, 0], knots[-1, 0]))
    v = np.clip(_forward_transfer(x, cfg), 0.0, 1.0)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)
