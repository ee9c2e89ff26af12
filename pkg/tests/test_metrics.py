import math

import numpy as np
import pytest

from powerlaw_sr.imaging import degrade, gaussian_blur
from powerlaw_sr.metrics import psnr, reversibility_error, slope_error, sliced_hist_distance
from powerlaw_sr.synth import gen_colored_noise


def test_psnr_identical_is_inf(rng):
    a = rng.random((5, 5, 3))
    assert psnr(a, a) == math.inf


def test_psnr_constant_offset():
    a = np.full((7, 3), 0.4)
    assert psnr(a, a + 0.1) == pytest.approx(20.0, abs=1e-9)


def test_psnr_matches_direct_mse(rng):
    a, b = rng.random((9, 11)), rng.random((9, 11))
    mse = sum((x - y) ** 2 for x, y in zip(a.ravel(), b.ravel())) / a.size
    assert psnr(a, b) == pytest.approx(10 * math.log10(1 / mse), abs=1e-9)


def test_psnr_shape_mismatch():
    with pytest.raises(ValueError):
        psnr(np.zeros((3, 3)), np.zeros((3, 4)))


def test_hist_distance_basics(rng):
    a = rng.random((12, 12, 3))
    assert sliced_hist_distance(a, a) == 0
    assert sliced_hist_distance(np.zeros((6, 6)), np.ones((6, 6))) == pytest.approx(255.0)
    with pytest.raises(ValueError):
        sliced_hist_distance(a, a[:, :, 0])


def test_hist_distance_matches_sorting_oracle(rng):
    for seed in range(10):
        a, b = rng.random((8, 8)), rng.random((8, 8))
        oracle = 255 * math.fsum(np.abs(np.sort(a.ravel()) - np.sort(b.ravel()))) / 64
        assert sliced_hist_distance(a, b, seed=seed) == oracle


def test_hist_distance_symmetric(rng):
    a, b = rng.random((10, 9, 3)), rng.random((10, 9, 3))
    assert sliced_hist_distance(a, b, seed=3) == sliced_hist_distance(b, a, seed=3)


def test_hist_distance_stretches_smaller(rng):
    a = rng.random((8, 8))
    big = np.kron(a, np.ones((2, 2)))
    assert sliced_hist_distance(a, big) == sliced_hist_distance(big, a)


def test_reversibility_error():
    w = gen_colored_noise(64, 64, 1.7, seed=1)
    u = degrade(w, 4)
    assert reversibility_error(w, u, 4) <= 1e-12
    residual = np.random.default_rng(0).standard_normal(u.shape) * 1e-3
    e1 = reversibility_error(w, u + residual, 4)
    e2 = reversibility_error(w, u + 2 * residual, 4)
    assert e2 == pytest.approx(4 * e1, rel=1e-9)
    assert e1 == pytest.approx(np.mean(residual ** 2), rel=1e-9)


def test_slope_error_synthetic_and_scale_invariance():
    img = gen_colored_noise(512, 512, 1.7, seed=4)
    slope, stderr = slope_error(img)
    assert abs(slope + 1.7) <= 0.05 and stderr <= 0.01
    s2, e2 = slope_error(2 * img)
    assert s2 == pytest.approx(slope, abs=1e-12)
    assert e2 == pytest.approx(stderr, rel=1e-9)


def test_slope_error_grows_with_white_noise():
    img = gen_colored_noise(256, 256, 1.7, seed=5)
    noisy = img + 0.1 * img.std() * np.random.default_rng(1).standard_normal(img.shape)
    assert slope_error(img)[1] < slope_error(noisy)[1]


def test_slope_error_on_color_and_errors():
    rgb = np.stack([gen_colored_noise(64, 64, 1.7, seed=s) for s in range(3)], axis=-1)
    slope, _ = slope_error(rgb)
    assert -2.0 < slope < -1.4
    with pytest.raises(ValueError):
        slope_error(np.zeros((8, 8)))


def test_slope_error_bilinear_worse_than_truth():
    img = gen_colored_noise(128, 128, 1.7, seed=6)
    blurred = gaussian_blur(img, 3.0)
    assert slope_error(blurred)[1] > slope_error(img)[1]
