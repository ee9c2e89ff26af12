"""Colored-noise synthesis: random phases with power-law Fourier amplitudes."""
import numpy as np

from .fourier import conjugate_index, dft2, frequency_radius, idft2

DEFAULT_SLOPE = 1.7


def random_phase_spectrum(shape, rng):
    """Unit-modulus Hermitian spectrum with uniformly random phases.

    Built from the DFT of white Gaussian noise divided by its modulus, so
    conjugate symmetry comes for free. The DC coefficient is kept (real,
    unit modulus); callers usually zero it.
    """
    white = rng.standard_normal(shape)
    spec = dft2(white)
    mod = np.abs(spec)
    zero = mod == 0
    if np.any(zero):
        # probability zero for continuous noise; redraw phases symmetrically
        flat = spec.ravel()
        conj = conjugate_index(shape).ravel()
        for k in np.flatnonzero(zero.ravel()):
            c = conj[k]
            if c == k:
                flat[k] = rng.choice([-1.0, 1.0])
            elif k < c:
                flat[k] = np.exp(2j * np.pi * rng.random())
                flat[c] = np.conj(flat[k])
        spec = flat.reshape(shape)
        mod = np.abs(spec)
    return spec / mod


def shaped_noise(shape, amplitude, rng):
    """Real noise field whose Fourier moduli equal ``amplitude(radius)``.

    `amplitude` maps an array of frequency radii to nonnegative amplitudes.
    The result is the inverse DFT of a random-phase spectrum scaled by
    those amplitudes.
    """
    phases = random_phase_spectrum(shape, rng)
    return idft2(phases * amplitude(frequency_radius(shape)))


def power_law(p):
    """Amplitude function ``r ** -p`` with the DC coefficient set to zero."""
    def amp(r):
        out = np.zeros_like(r)
        np.power(r, -p, out=out, where=r > 0)
        return out
    return amp


def normalize_display(field):
    """Affine map to mean 0.5 and maximum absolute deviation 0.45."""
    centered = field - field.mean()
    peak = np.abs(centered).max()
    if peak == 0:
        return np.full_like(field, 0.5)
    # clip only absorbs rounding at the extremes
    return np.clip(0.5 + 0.45 * centered / peak, 0.05, 0.95)


def gen_colored_noise(width, height, p=DEFAULT_SLOPE, seed=0):
    """Generate a (height, width) colored-noise image in [0.05, 0.95].

    The Fourier modulus at frequency radius ``r`` is proportional to
    ``r ** -p`` and the phases are uniformly random.

    Examples
    --------
    >>> img = gen_colored_noise(64, 64, p=1.7, seed=3)
    >>> img.shape
    (64, 64)
    >>> round(float(img.mean()), 9)
    0.5
    """
    if width < 8 or height < 8:
        raise ValueError(f"size must be at least 8x8, got {width}x{height}")
    if not p > 0:
        raise ValueError(f"slope must be positive, got {p}")
    rng = np.random.default_rng(seed)
    field = shaped_noise((int(height), int(width)), power_law(p), rng)
    return normalize_display(field)
