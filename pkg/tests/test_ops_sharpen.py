import numpy as np
import pytest
from scipy import ndimage

from emovis import ops
from emovis.core import PipelineConfig


def local_extrema(plane, sigma):
    size = 2 * int(np.ceil(2.0 * sigma)) + 1
    lmin = ndimage.minimum_filter(plane, size=size, mode="reflect")
    lmax = ndimage.maximum_filter(plane, size=size, mode="reflect")
    return lmin, lmax


def test_zero_total_gain_is_identity():
    rng = np.random.default_rng(1)
    plane = rng.random((32, 32))
    cfg = PipelineConfig(p=0.5)
    out = ops.sharpen(plane, -0.5, cfg)
    assert np.array_equal(out, plane)


def test_constant_plane_unchanged():
    plane = np.full((24, 24), 0.37)
    out = ops.sharpen(plane, 0.7, PipelineConfig(p=0.0))
    assert np.array_equal(out, plane)


def test_step_edge_respects_overshoot_window():
    cfg = PipelineConfig(p=0.0)
    plane = np.zeros((16, 32))
    plane[:, 16:] = 1.0
    out = ops.sharpen(plane, 0.7, cfg)
    lmin, lmax = local_extrema(plane, cfg.sigma)
    assert np.all(out >= lmin - 1e-6)
    assert np.all(out <= lmax + 1e-6)


def test_step_edge_actually_sharpens_midtones():
    cfg = PipelineConfig(p=0.0)
    plane = np.tile(np.concatenate([np.full(16, 0.3), np.full(16, 0.7)]), (16, 1))
    out = ops.sharpen(plane, 0.7, cfg)
    # contrast across the edge should not decrease
    assert (out[:, 16] - out[:, 15]).mean() >= (plane[:, 16] - plane[:, 15]).mean() - 1e-12


@pytest.mark.parametrize("gain", [0.7, 1.5, 2.5])
def test_random_plane_bounded_by_local_extrema(gain):
    rng = np.random.default_rng(int(gain * 10))
    plane = rng.random((40, 40))
    cfg = PipelineConfig(p=0.0, sigma=1.5)
    out = ops.sharpen(plane, gain, cfg)
    lmin, lmax = local_extrema(plane, cfg.sigma)
    assert np.all(out >= lmin - 1e-6)
    assert np.all(out <= lmax + 1e-6)


def test_deterministic():
    rng = np.random.default_rng(2)
    plane = rng.random((24, 24))
    cfg = PipelineConfig()
    a = ops.sharpen(plane, 0.7, cfg)
    b = ops.sharpen(plane.copy(), 0.7, cfg)
    assert np.array_equal(a, b)
