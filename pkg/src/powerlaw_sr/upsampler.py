"""Per-step enlargement operators used by the super-resolution loop."""
from dataclasses import dataclass

import numpy as np

from .fourier import dft2, idft2, periodic_smooth_decompose, radial_profile, ring_index
from .imaging import as_image, planes, resample_bilinear, round_half_up
from .synth import DEFAULT_SLOPE, random_phase_spectrum

VARIANTS = ("bilinear", "spectral_detail")
# detail_sigma at which the added band follows the extrapolated law exactly
REFERENCE_DETAIL_SIGMA = 0.01


@dataclass(frozen=True)
class UpsamplerKind:
    """Upsampler choice.

    ``spectral_detail`` adds random-phase content past the old Nyquist
    ring. Its amplitude is ``detail_sigma / 0.01`` times the power law
    extrapolated from the input, so the default reproduces the law and 0
    disables the detail. `p` fixes the exponent of that law; ``None`` fits
    it as well.
    """

    variant: str = "spectral_detail"
    detail_sigma: float = REFERENCE_DETAIL_SIGMA
    p: float | None = DEFAULT_SLOPE

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown upsampler {self.variant!r}, expected one of {VARIANTS}")
        if self.detail_sigma < 0:
            raise ValueError(f"detail_sigma must be >= 0, got {self.detail_sigma}")


def upsampled_shape(shape, step_zoom):
    return (round_half_up(shape[0] * step_zoom), round_half_up(shape[1] * step_zoom))


def fit_top_octave(plane, p=None):
    """Fit ``log(mean modulus) = a + b log(r)`` on the rings of the top octave.

    The top octave spans rings ``n/4 .. n/2`` with ``n`` the smaller side.
    With `p` given the slope is fixed to ``-p`` and only ``a`` is fitted.
    Returns ``(a, b)``.
    """
    prof = radial_profile(dft2(periodic_smooth_decompose(plane)[0]))
    nyq = min(plane.shape) // 2
    r = prof.radius
    keep = (r >= max(1, nyq // 2)) & (r <= nyq) & (prof.count >= 4) & (prof.mean_modulus > 0)
    if keep.sum() < 2:
        raise ValueError(f"too few rings to fit a power law on a {plane.shape} image")
    x, y = np.log(r[keep]), np.log(prof.mean_modulus[keep])
    if p is not None:
        return float(np.mean(y + p * x)), -float(p)
    b, a = np.polyfit(x, y, 1)
    return float(a), float(b)


def detail_amplitude(plane, out_shape, kind):
    """Fourier amplitudes of the detail band on the `out_shape` grid.

    A constant plane has nothing to extrapolate and gets no detail.
    """
    if np.ptp(plane) == 0:
        return np.zeros(out_shape)
    a, b = fit_top_octave(plane, kind.p)
    nyq = min(plane.shape) // 2
    # unnormalized DFT moduli grow with the pixel count
    gain = (out_shape[0] * out_shape[1]) / (plane.shape[0] * plane.shape[1])
    gain *= kind.detail_sigma / REFERENCE_DETAIL_SIGMA
    rings = ring_index(out_shape)
    radius = np.maximum(rings, 1).astype(np.float64)
    amp = gain * np.exp(a) * radius ** b
    amp[rings <= nyq] = 0.0
    return amp


def upsample(img, step_zoom, kind=None, seed=0, out_shape=None):
    """Enlarge `img` by `step_zoom`.

    Parameters
    ----------
    img : ndarray
        Image of shape (H, W) or (H, W, C).
    step_zoom : float
        Enlargement factor, must exceed 1.
    kind : UpsamplerKind, optional
        Defaults to ``UpsamplerKind()``.
    seed : int or sequence of int
        Seed of the detail noise.
    out_shape : (int, int), optional
        Exact output size, overriding ``round(shape * step_zoom)``.
    """
    img = as_image(img)
    kind = kind or UpsamplerKind()
    if not step_zoom > 1:
        raise ValueError(f"step zoom must exceed 1, got {step_zoom}")
    oh, ow = upsampled_shape(img.shape, step_zoom) if out_shape is None else out_shape
    up = resample_bilinear(img, ow, oh)
    if kind.variant == "bilinear" or kind.detail_sigma == 0:
        return up
    rng = np.random.default_rng(seed)
    # one phase field for all channels keeps the detail achromatic
    phases = random_phase_spectrum((oh, ow), rng)
    detail = [idft2(phases * detail_amplitude(p, (oh, ow), kind)) for p in planes(img)]
    if img.ndim == 2:
        return up + detail[0]
    return up + np.stack(detail, axis=-1)
