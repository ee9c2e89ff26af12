"""Pixel-domain operators: Gaussian blur, bilinear resampling and degradation.

Images are float64 arrays of shape ``(H, W)`` or ``(H, W, C)`` with ``C`` in
{1, 3}. Every operator here works plane by plane and returns an array with
the same number of dimensions as its input.

All operators are linear and separable. Besides the direct implementations,
the module exposes the 1-D matrices behind them (`blur_matrix`,
`resample_matrix`) so that callers can build exact adjoints.
"""
import math

import numpy as np
from scipy import ndimage

BLUR_PER_ZOOM = 0.7
MIN_DEGRADED_SIZE = 4


def as_image(img):
    """Return `img` as a validated float64 array of shape (H, W) or (H, W, C)."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"image must be 2-D or 3-D, got shape {arr.shape}")
    if arr.ndim == 3 and arr.shape[2] not in (1, 3):
        raise ValueError(f"image must have 1 or 3 channels, got {arr.shape[2]}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"empty image of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains NaN or Inf samples")
    return arr


def planes(img):
    """Iterate over the 2-D channel planes of an image."""
    if img.ndim == 2:
        yield img
    else:
        for k in range(img.shape[2]):
            yield img[:, :, k]


def map_planes(fn, img):
    """Apply a plane -> plane function to every channel and restack."""
    out = [fn(p) for p in planes(img)]
    if img.ndim == 2:
        return out[0]
    return np.stack(out, axis=-1)


def round_half_up(x):
    return int(math.floor(x + 0.5))


def gaussian_kernel(sigma):
    """Normalized symmetric Gaussian taps with radius ``ceil(4 * sigma)``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(4.0 * sigma))
    i = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(i * i) / (2.0 * sigma * sigma))
    taps /= taps.sum()
    # exact symmetry regardless of summation order
    return 0.5 * (taps + taps[::-1])


def mirror_index(i, n):
    """Map integer positions onto [0, n) by reflection without edge repeat."""
    if n == 1:
        return np.zeros_like(i)
    period = 2 * (n - 1)
    i = np.mod(i, period)
    return np.where(i < n, i, period - i)


def blur_matrix(n, sigma):
    """Dense (n, n) matrix of the 1-D mirrored Gaussian blur."""
    taps = gaussian_kernel(sigma)
    radius = len(taps) // 2
    mat = np.zeros((n, n))
    rows = np.arange(n)
    for k, t in enumerate(taps):
        cols = mirror_index(rows + k - radius, n)
        np.add.at(mat, (rows, cols), t)
    return mat


def resample_matrix(n_in, n_out):
    """Dense (n_out, n_in) matrix of pixel-center aligned linear interpolation."""
    if n_in < 1 or n_out < 1:
        raise ValueError("sizes must be >= 1")
    x = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    x = np.clip(x, 0.0, n_in - 1)
    i0 = np.floor(x).astype(int)
    t = x - i0
    i1 = np.minimum(i0 + 1, n_in - 1)
    mat = np.zeros((n_out, n_in))
    rows = np.arange(n_out)
    np.add.at(mat, (rows, i0), 1.0 - t)
    np.add.at(mat, (rows, i1), t)
    return mat


def gaussian_blur(img, sigma):
    """Separable Gaussian blur with mirror boundaries.

    Parameters
    ----------
    img : ndarray
        Image of shape (H, W) or (H, W, C).
    sigma : float
        Standard deviation in pixels, must be positive.
    """
    img = as_image(img)
    taps = gaussian_kernel(sigma)

    def blur(p):
        p = ndimage.correlate1d(p, taps, axis=0, mode="mirror")
        return ndimage.correlate1d(p, taps, axis=1, mode="mirror")

    return map_planes(blur, img)


def resample_bilinear(img, out_w, out_h):
    """Bilinear resampling to ``(out_h, out_w)`` with pixel centers aligned.

    The source coordinate of output pixel ``x`` is
    ``(x + 0.5) * w_in / w_out - 0.5``, clamped to the image.
    """
    img = as_image(img)
    out_w, out_h = int(out_w), int(out_h)
    if out_w < 1 or out_h < 1:
        raise ValueError(f"output size must be >= 1, got {out_w}x{out_h}")
    h, w = img.shape[:2]
    if (h, w) == (out_h, out_w):
        return img.copy()
    mh = resample_matrix(h, out_h)
    mw = resample_matrix(w, out_w)
    return map_planes(lambda p: mh @ p @ mw.T, img)


def degraded_shape(shape, factor):
    """(H, W) of an image of `shape` degraded by `factor`."""
    return (round_half_up(shape[0] / factor), round_half_up(shape[1] / factor))


def degrade(img, factor, out_shape=None):
    """Blur with sigma = 0.7 * factor, then bilinearly resample down.

    `out_shape` overrides the default target size ``round(H / factor),
    round(W / factor)``; the pipeline uses it at non-integer zooms so the
    result always lands exactly on the low-resolution grid.
    """
    img = as_image(img)
    if not factor > 1:
        raise ValueError(f"degradation factor must be > 1, got {factor}")
    oh, ow = degraded_shape(img.shape, factor) if out_shape is None else out_shape
    if min(oh, ow) < MIN_DEGRADED_SIZE:
        raise ValueError(
            f"degraded size {oh}x{ow} is below {MIN_DEGRADED_SIZE} pixels")
    blurred = gaussian_blur(img, BLUR_PER_ZOOM * factor)
    return resample_bilinear(blurred, ow, oh)


def stride_sample(img, factor):
    """Sample every `factor`-th pixel at low-resolution pixel centers.

    For an integer factor dividing both dimensions this equals bilinear
    downsampling. Low-resolution centers fall on ``f * x + (f - 1) / 2``,
    which is a half-pixel position when `factor` is even, hence the
    two-sample average in that case.
    """
    img = as_image(img)
    f = int(factor)
    if f != factor or f < 1:
        raise ValueError(f"stride sampling needs a positive integer factor, got {factor}")
    if img.shape[0] % f or img.shape[1] % f:
        raise ValueError(f"factor {f} does not divide image shape {img.shape[:2]}")

    def sample(p):
        if f % 2:
            o = (f - 1) // 2
            return p[o::f, o::f].copy()
        o = f // 2 - 1
        rows = 0.5 * (p[o::f] + p[o + 1::f])
        return 0.5 * (rows[:, o::f] + rows[:, o + 1::f])

    return map_planes(sample, img)
