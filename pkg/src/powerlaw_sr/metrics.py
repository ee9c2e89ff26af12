"""Quality and constraint-respect metrics."""
import math

import numpy as np
from scipy import stats

from .fourier import dft2, periodic_smooth_decompose, radial_profile
from .directions import random_directions
from .imaging import as_image, degrade, planes, resample_bilinear

HIST_SCALE = 255.0
MIN_SLOPE_RINGS = 8


def psnr(a, b):
    """Peak signal-to-noise ratio in dB for images with peak value 1.

    Returns ``math.inf`` for identical images.
    """
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return math.inf
    return float(10.0 * np.log10(1.0 / mse))


def pixel_matrix(img):
    """(N, C) matrix of pixel values."""
    return img.reshape(img.shape[0] * img.shape[1], -1)


def _match_sizes(a, b):
    ha, wa = a.shape[:2]
    hb, wb = b.shape[:2]
    if ha * wa >= hb * wb:
        return a, resample_bilinear(b, wa, ha) if (ha, wa) != (hb, wb) else b
    return resample_bilinear(a, wb, hb), b


def sliced_hist_distance(a, b, seed=0, num_slices=64):
    """Sliced 1-D Wasserstein-1 distance between pixel value distributions.

    Averages, over `num_slices` seeded directions, the mean absolute
    difference between the sorted projections of both pixel sets, and
    reports it on the 0-255 scale. The smaller image is bilinearly
    stretched to the size of the larger one first.
    """
    a, b = as_image(a), as_image(b)
    ca = 1 if a.ndim == 2 else a.shape[2]
    cb = 1 if b.ndim == 2 else b.shape[2]
    if ca != cb:
        raise ValueError(f"channel mismatch: {ca} vs {cb}")
    a, b = _match_sizes(a, b)
    xa, xb = pixel_matrix(a), pixel_matrix(b)
    n = xa.shape[0]
    per_slice = []
    for theta in random_directions(num_slices, ca, seed):
        pa = np.sort(xa @ theta)
        pb = np.sort(xb @ theta)
        # fsum: correctly rounded, so the result ignores summation order
        per_slice.append(math.fsum(np.abs(pa - pb)) / n)
    return float(HIST_SCALE * math.fsum(per_slice) / num_slices)


def reversibility_error(w, u, factor):
    """Mean squared residual between `u` and the degraded `w`."""
    w, u = as_image(w), as_image(u)
    if w.ndim != u.ndim or w.shape[2:] != u.shape[2:]:
        raise ValueError(f"channel mismatch: {w.shape} vs {u.shape}")
    low = degrade(w, factor, out_shape=u.shape[:2])
    return float(np.mean((low - u) ** 2))


def mean_radial_profile(img):
    """Radial profile of the periodic component, ring means averaged over channels."""
    profiles = [radial_profile(dft2(periodic_smooth_decompose(p)[0])) for p in planes(img)]
    mean = np.mean([pr.mean_modulus for pr in profiles], axis=0)
    first = profiles[0]
    return type(first)(first.radius, first.count, mean)


def slope_error(img):
    """Log-log slope of ring-mean Fourier modulus and its standard error.

    Uses rings ``2 .. floor(0.9 * r_max)`` that hold at least 4
    coefficients. Scaling the image leaves both numbers unchanged.

    Returns
    -------
    slope, stderr : float
    """
    img = as_image(img)
    if min(img.shape[:2]) < 16:
        raise ValueError(f"slope estimation needs at least 16x16, got {img.shape[:2]}")
    prof = mean_radial_profile(img)
    hi = int(math.floor(0.9 * prof.r_max))
    r = prof.radius
    keep = (r >= 2) & (r <= hi) & (prof.count >= 4) & (prof.mean_modulus > 0)
    if keep.sum() < MIN_SLOPE_RINGS:
        raise ValueError(f"only {int(keep.sum())} usable rings, need {MIN_SLOPE_RINGS}")
    fit = stats.linregress(np.log(r[keep]), np.log(prof.mean_modulus[keep]))
    return float(fit.slope), float(fit.stderr)
