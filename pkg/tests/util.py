"""Shared fixtures and independent oracles for the test suite.

The oracles here are deliberately naive (per-pixel loops, direct
sums-of-squares, mpmath special functions) so they share no code path with
the library implementations they check.
"""
from __future__ import annotations

import numpy as np

from emovis.core import LinearImage


def make_chart(n: int = 96) -> LinearImage:
    """Smooth colorful gradient chart used by the directional checks."""
    yy, xx = np.meshgrid(np.linspace(0.0, 1.0, n), np.linspace(0.0, 1.0, n),
                         indexing="ij")
    r = 0.15 + 0.7 * xx
    g = 0.15 + 0.7 * yy
    b = 0.2 + 0.6 * (1.0 - xx) * yy
    return LinearImage(np.stack([r, g, b], axis=-1))


def naive_guided_filter(y: np.ndarray, radius: int, eps: float) -> np.ndarray:
    """Direct sliding-window reference (border-clipped windows)."""
    h, w = y.shape

    def window(a, i, j):
        return a[max(0, i - radius):min(h, i + radius + 1),
                 max(0, j - radius):min(w, j + radius + 1)]

    def box_mean(a):
        return np.array([[window(a, i, j).mean() for j in range(w)]
                         for i in range(h)])

    mean_i = box_mean(y)
    mean_ii = box_mean(y * y)
    var = mean_ii - mean_i * mean_i
    a = var / (var + eps)
    b = (1.0 - a) * mean_i
    return box_mean(a) * y + box_mean(b)


def global_histeq(y: np.ndarray, bins: int = 256) -> np.ndarray:
    """Textbook histogram equalization with mid-bin CDF mapping."""
    idx = np.minimum((y * bins).astype(np.int64), bins - 1)
    hist = np.bincount(idx.ravel(), minlength=bins).astype(np.float64) / y.size
    cdf = np.cumsum(hist)
    return (cdf - hist / 2.0)[idx]


def anova_oracle(cells: np.ndarray):
    """Brute-force within-subject sums of squares; p via mpmath betainc."""
    import mpmath

    n, k = cells.shape
    grand = cells.mean()
    ss_e = n * ((cells.mean(axis=0) - grand) ** 2).sum()
    resid = cells - cells.mean(axis=1)[:, None] - cells.mean(axis=0)[None, :] + grand
    ss_err = (resid ** 2).sum()
    df_e = k - 1
    df_err = (k - 1) * (n - 1)
    f_stat = (ss_e / df_e) / (ss_err / df_err)
    x = df_err / (df_err + df_e * f_stat)
    p = float(mpmath.betainc(df_err / 2.0, df_e / 2.0, 0, x, regularized=True))
    eta2 = ss_e / (ss_e + ss_err)
    return f_stat, p, eta2
