"""2-D DFT conventions, periodic plus smooth decomposition and ring statistics.

Spectra are complex arrays in the standard FFT layout (DC at index
``[0, 0]``). The signed integer frequency of a coefficient is given by
`frequency_grid`, which places every frequency in ``[-n/2, n/2)``.

The forward transform is unnormalized and the inverse carries the
``1 / (H * W)`` factor, i.e. numpy's default ``"backward"`` convention.
"""
from dataclasses import dataclass

import numpy as np


def dft2(plane):
    """Unnormalized 2-D DFT of a real or complex plane."""
    return np.fft.fft2(np.asarray(plane))


def idft2(spec, real=True):
    """Inverse of `dft2`. With ``real=True`` the imaginary part is dropped."""
    out = np.fft.ifft2(spec)
    return out.real.copy() if real else out


def frequency_grid(shape):
    """Signed integer frequencies ``(fy, fx)`` for every coefficient of `shape`."""
    h, w = shape[:2]
    fy = np.rint(np.fft.fftfreq(h) * h).astype(int)
    fx = np.rint(np.fft.fftfreq(w) * w).astype(int)
    return np.meshgrid(fy, fx, indexing="ij")


def frequency_radius(shape):
    fy, fx = frequency_grid(shape)
    return np.hypot(fy, fx)


def ring_index(shape):
    """Ring of each coefficient: its frequency radius rounded to an integer.

    Radii are never exactly half-integers on an integer grid, so rounding
    is unambiguous.
    """
    return np.rint(frequency_radius(shape)).astype(int)


def conjugate_index(shape):
    """Flat index of the coefficient at ``-xi`` for every coefficient."""
    h, w = shape[:2]
    i = (-np.arange(h)) % h
    j = (-np.arange(w)) % w
    return (i[:, None] * w + j[None, :])


def periodic_smooth_decompose(plane):
    """Split a plane into periodic and smooth components.

    The smooth component solves a discrete Poisson problem driven by the
    jumps between opposite image borders; the periodic component is the
    remainder, so ``periodic + smooth == plane``.

    Returns
    -------
    periodic, smooth : ndarray
    """
    u = np.asarray(plane, dtype=np.float64)
    if u.ndim != 2 or min(u.shape) < 3:
        raise ValueError(f"decomposition needs a 2-D plane of at least 3x3, got {u.shape}")
    h, w = u.shape
    v = np.zeros_like(u)
    d = u[-1, :] - u[0, :]
    v[0, :] += d
    v[-1, :] -= d
    d = u[:, -1] - u[:, 0]
    v[:, 0] += d
    v[:, -1] -= d

    cy = np.cos(2.0 * np.pi * np.arange(h) / h)
    cx = np.cos(2.0 * np.pi * np.arange(w) / w)
    denom = 2.0 * cy[:, None] + 2.0 * cx[None, :] - 4.0
    denom[0, 0] = 1.0
    s_hat = np.fft.fft2(v) / denom
    s_hat[0, 0] = 0.0
    smooth = np.fft.ifft2(s_hat).real
    return u - smooth, smooth


@dataclass(frozen=True)
class RadialProfile:
    """Per-ring coefficient count and mean modulus, rings 0..r_max."""

    radius: np.ndarray
    count: np.ndarray
    mean_modulus: np.ndarray

    @property
    def r_max(self):
        return int(self.radius[-1])

    def __len__(self):
        return len(self.radius)

    def to_csv(self):
        lines = ["ring,count,mean_modulus"]
        for r, c, m in zip(self.radius, self.count, self.mean_modulus):
            lines.append(f"{int(r)},{int(c)},{float(m)!r}")
        return "\n".join(lines) + "\n"


def radial_profile(spec):
    """Ring statistics of a spectrum (any 2-D complex array in FFT layout)."""
    spec = np.asarray(spec)
    rings = ring_index(spec.shape).ravel()
    mod = np.abs(spec).ravel()
    n = rings.max() + 1
    count = np.bincount(rings, minlength=n)
    total = np.bincount(rings, weights=mod, minlength=n)
    mean = np.divide(total, count, out=np.zeros(n), where=count > 0)
    return RadialProfile(np.arange(n), count, mean)


def ring_members(shape):
    """Flat coefficient indices grouped by ring, as a list indexed by ring."""
    rings = ring_index(shape).ravel()
    order = np.argsort(rings, kind="stable")
    bounds = np.searchsorted(rings[order], np.arange(rings.max() + 2))
    return [order[bounds[r]:bounds[r + 1]] for r in range(rings.max() + 1)]
