"""The five emotion-controlled rendering operators and their support filters.

Everything here is a pure function on float64 planes/images; outputs are
clamped to [0, 1] at the end of each operator so each contract is
self-contained.  No operator carries state, so tile-parallel evaluation is
trivially bit-identical to sequential evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import DegenerateExposureError, LumaChroma, PipelineConfig

CLAHE_BINS = 256


# ---------------------------------------------------------------------------
# saturation

def moderated_saturation_gain(s, alpha_s: float, eps: float):
    """Chroma gain 1+alpha_s, capped near the gamut boundary.

    For alpha_s > 0 the gain is limited so scaled chroma lands at most
    halfway between its current magnitude and the gamut ceiling:
        min(1 + alpha_s, (S + 0.5*(1-S)) / (S + eps))
    Decreases pass through unmoderated.  Accepts scalars or arrays.
    """
    delta = 1.0 + alpha_s
    if alpha_s <= 0.0:
        return np.maximum(delta, 0.0) if delta < 0.0 else delta
    s = np.asarray(s, dtype=np.float64)
    ceiling = (s + 0.5 * (1.0 - s)) / (s + eps)
    gain = np.minimum(delta, ceiling)
    return float(gain) if gain.ndim == 0 else gain


def apply_saturation(lc: LumaChroma, alpha_s: float, eps: float) -> LumaChroma:
    """Scale each pixel's chroma pair by its moderated gain; Y untouched."""
    gain = moderated_saturation_gain(lc.chroma_magnitude(), alpha_s, eps)
    return LumaChroma(y=lc.y, cr=lc.cr * gain, cb=lc.cb * gain)


# ---------------------------------------------------------------------------
# content-aware tint

@dataclass(frozen=True)
class TintCoefficients:
    """Per-channel multipliers of the diagonal tint matrix."""

    m_r: float
    m_g: float
    m_b: float

    def as_array(self) -> np.ndarray:
        return np.array([self.m_r, self.m_g, self.m_b])


def tint_weight(rgb: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Colorfulness mask w = ((max-min)/(max+eps))^2, in [0, 1].

    Neutral pixels (max == min) get w exactly 0, which keeps the gray axis
    bit-identical under apply_tint.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    w = ((mx - mn) / (mx + eps)) ** 2
    return np.clip(w, 0.0, 1.0)


def tint_coefficients(alpha_rg: float, alpha_yb: float) -> TintCoefficients:
    """Diagonal tint matrix entries from the red-green / yellow-blue biases."""
    return TintCoefficients(
        m_r=max(0.0, 1.0 + alpha_rg + alpha_yb),
        m_g=max(0.0, 1.0 - alpha_rg + alpha_yb),
        m_b=max(0.0, 1.0 - abs(alpha_rg) - alpha_yb),
    )


def apply_tint(rgb: np.ndarray, coeffs: TintCoefficients, eps: float = 1e-6) -> np.ndarray:
    """Blend each pixel with its tinted version, weighted by colorfulness."""
    rgb = np.asarray(rgb, dtype=np.float64)
    w = tint_weight(rgb, eps)[..., None]
    tinted = rgb * coeffs.as_array()
    out = (1.0 - w) * rgb + w * tinted
    return np.clip(out, 0.0, 1.0)


# ---------------------------------------------------------------------------
# brightness / local tone mapping

def brightness_exponent(avg_y: float, alpha_b: float, target: float) -> float:
    """Power beta mapping the ROI average luminance onto target*(1+alpha_b)."""
    t = target * (1.0 + alpha_b)
    if not 0.0 < avg_y < 1.0:
        raise DegenerateExposureError(f"average luminance {avg_y} outside (0, 1)")
    if not 0.0 < t < 1.0:
        raise DegenerateExposureError(f"brightness target {t} outside (0, 1)")
    return math.log(t) / math.log(avg_y)


def _box_sum(plane: np.ndarray, radius: int) -> np.ndarray:
    """Sliding-window sum over (2r+1)^2 windows clipped at the borders."""
    h, w = plane.shape
    sat = np.zeros((h + 1, w + 1), dtype=np.float64)
    np.cumsum(np.cumsum(plane, axis=0), axis=1, out=sat[1:, 1:])
    rlo = np.maximum(np.arange(h) - radius, 0)
    rhi = np.minimum(np.arange(h) + radius, h - 1) + 1
    clo = np.maximum(np.arange(w) - radius, 0)
    chi = np.minimum(np.arange(w) + radius, w - 1) + 1
    rows = sat[rhi, :] - sat[rlo, :]
    return rows[:, chi] - rows[:, clo]


def _box_count(shape, radius: int) -> np.ndarray:
    h, w = shape
    rows = np.minimum(np.arange(h) + radius, h - 1) - np.maximum(np.arange(h) - radius, 0) + 1
    cols = np.minimum(np.arange(w) + radius, w - 1) - np.maximum(np.arange(w) - radius, 0) + 1
    return rows[:, None] * cols[None, :].astype(np.float64)


def guided_filter(plane: np.ndarray, radius: int, gf_eps: float) -> np.ndarray:
    """Self-guided edge-preserving smoother (guide == input).

    Window statistics use border-clipped boxes, so constants are preserved
    and gf_eps -> inf degenerates to the plain box mean.
    """
    plane = np.asarray(plane, dtype=np.float64)
    n = _box_count(plane.shape, radius)
    mean_i = _box_sum(plane, radius) / n
    mean_ii = _box_sum(plane * plane, radius) / n
    var = mean_ii - mean_i * mean_i
    a = var / (var + gf_eps)
    b = (1.0 - a) * mean_i
    mean_a = _box_sum(a, radius) / n
    mean_b = _box_sum(b, radius) / n
    return mean_a * plane + mean_b


def _tile_edges(extent: int, tiles: int) -> np.ndarray:
    """tiles+1 monotone cut points spanning [0, extent]."""
    return np.round(np.linspace(0, extent, tiles + 1)).astype(int)


def clahe_mappings(plane: np.ndarray, tiles, clip: float) -> np.ndarray:
    """Per-tile monotone bin->value lookup tables, shape (ty, tx, 256).

    Histograms are clipped at clip * (tile_pixels / 256) with the excess
    redistributed uniformly; the mapped value of bin b is the mid-bin CDF
    (cdf[b] - hist[b]/2), which keeps near-uniform histograms near identity.
    """
    h, w = plane.shape
    ty, tx = tiles
    bins = np.minimum((plane * CLAHE_BINS).astype(np.int64), CLAHE_BINS - 1)
    redges = _tile_edges(h, ty)
    cedges = _tile_edges(w, tx)
    luts = np.empty((ty, tx, CLAHE_BINS), dtype=np.float64)
    for i in range(ty):
        for j in range(tx):
            tile = bins[redges[i]:redges[i + 1], cedges[j]:cedges[j + 1]]
            hist = np.bincount(tile.ravel(), minlength=CLAHE_BINS).astype(np.float64)
            npix = float(tile.size)
            limit = clip * npix / CLAHE_BINS
            excess = np.maximum(hist - limit, 0.0).sum()
            hist = np.minimum(hist, limit) + excess / CLAHE_BINS
            cdf = np.cumsum(hist) / npix
            luts[i, j] = cdf - hist / (2.0 * npix)
    return luts


def clahe_apply(luts: np.ndarray, plane: np.ndarray, shape=None) -> np.ndarray:
    """Evaluate tile LUTs on a plane with bilinear blending between tiles."""
    h, w = plane.shape if shape is None else shape
    ty, tx = luts.shape[:2]
    bins = np.minimum((plane * CLAHE_BINS).astype(np.int64), CLAHE_BINS - 1)
    redges = _tile_edges(h, ty)
    cedges = _tile_edges(w, tx)
    rcenters = (redges[:-1] + redges[1:]) / 2.0
    ccenters = (cedges[:-1] + cedges[1:]) / 2.0
    # fractional tile index per row/column, clamped at the outer tile centers
    fr = np.interp(np.arange(h) + 0.5, rcenters, np.arange(ty, dtype=np.float64))
    fc = np.interp(np.arange(w) + 0.5, ccenters, np.arange(tx, dtype=np.float64))
    r0 = np.minimum(fr.astype(np.int64), ty - 1)
    r1 = np.minimum(r0 + 1, ty - 1)
    c0 = np.minimum(fc.astype(np.int64), tx - 1)
    c1 = np.minimum(c0 + 1, tx - 1)
    wr = (fr - r0)[:, None]
    wc = (fc - c0)[None, :]
    r0 = r0[:, None]
    r1 = r1[:, None]
    c0 = c0[None, :]
    c1 = c1[None, :]
    v00 = luts[r0, c0, bins]
    v01 = luts[r0, c1, bins]
    v10 = luts[r1, c0, bins]
    v11 = luts[r1, c1, bins]
    top = (1.0 - wc) * v00 + wc * v01
    bot = (1.0 - wc) * v10 + wc * v11
    return (1.0 - wr) * top + wr * bot


def clahe(plane: np.ndarray, tiles=(8, 8), clip: float = 2.0) -> np.ndarray:
    """Contrast-limited adaptive histogram equalization on a [0,1] plane."""
    plane = np.asarray(plane, dtype=np.float64)
    luts = clahe_mappings(plane, tiles, clip)
    out = clahe_apply(luts, plane)
    return np.clip(out, 0.0, 1.0)


def tone_map(plane: np.ndarray, alpha_b: float, alpha_lc: float,
             cfg: PipelineConfig) -> np.ndarray:
    """Brightness retargeting + local detail boost over the equalized base.

    Y_TM = (1 + (zeta+alpha_lc) * (Y - B_y)/max(B_y, eps)) * C(Y^beta)
    with B_y the guided-filter base layer and C the histogram operator
    (identity when cfg.clahe_enabled is False).
    """
    plane = np.asarray(plane, dtype=np.float64)
    if cfg.roi is not None:
        r0, c0, r1, c1 = cfg.roi
        roi = plane[r0:r1, c0:c1]
    else:
        roi = plane
    avg = float(np.mean(roi, dtype=np.float64))
    beta = brightness_exponent(avg, alpha_b, cfg.T)
    y_g = plane if beta == 1.0 else np.power(plane, beta)
    base = guided_filter(plane, cfg.gf_radius, cfg.gf_eps)
    eq = clahe(y_g, cfg.clahe_tiles, cfg.clahe_clip) if cfg.clahe_enabled else y_g
    detail = (plane - base) / np.maximum(base, cfg.eps)
    out = (1.0 + (cfg.zeta + alpha_lc) * detail) * eq
    return np.clip(out, 0.0, 1.0)


# ---------------------------------------------------------------------------
# sharpening

def sharpen(plane: np.ndarray, alpha_p: float, cfg: PipelineConfig) -> np.ndarray:
    """Unsharp masking with an overshoot-protection mask.

    Y_S = Y + (p+alpha_p) * (Y - G_sigma(Y)) * M(Y).  The mask attenuates the
    correction exactly enough that every output sample stays inside the local
    [min, max] window of the input over a (2*ceil(2*sigma)+1)^2 neighborhood,
    so no halo ever exceeds the local extrema.
    """
    plane = np.asarray(plane, dtype=np.float64)
    gain = cfg.p + alpha_p
    if gain == 0.0:
        return plane
    blurred = ndimage.gaussian_filter(plane, sigma=cfg.sigma, mode="reflect")
    corr = gain * (plane - blurred)
    size = 2 * math.ceil(2.0 * cfg.sigma) + 1
    lmin = ndimage.minimum_filter(plane, size=size, mode="reflect")
    lmax = ndimage.maximum_filter(plane, size=size, mode="reflect")
    limited = np.clip(plane + corr, lmin, lmax)
    with np.errstate(divide="ignore", invalid="ignore"):
        mask = np.where(corr != 0.0, (limited - plane) / corr, 1.0)
    out = plane + corr * mask
    return np.clip(out, 0.0, 1.0)
