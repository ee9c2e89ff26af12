"""Statistical projections and the alternate-projection loop.

Three operators act on a super-resolved image ``w`` given the
low-resolution input ``u``:

* `proj_spectrum` forces ring moduli past ``r0`` onto ordered Rayleigh
  quantiles whose mean follows a power law,
* `proj_hist` pulls the pixel distribution towards that of ``u`` with
  sliced optimal transport,
* `proj_rev` makes ``degrade(w) == u`` with the smallest change to ``w``.

`apply_constraints` chains them for a fixed number of rounds.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .directions import random_directions
from .fourier import (conjugate_index, dft2, idft2, periodic_smooth_decompose,
                      ring_index)
from .imaging import (BLUR_PER_ZOOM, MIN_DEGRADED_SIZE, as_image, blur_matrix,
                      degraded_shape, map_planes, planes, resample_bilinear,
                      resample_matrix)
from .synth import DEFAULT_SLOPE

log = logging.getLogger(__name__)

DIVERGENCE_PATIENCE = 5


class ConvergenceError(RuntimeError):
    """Raised when the reversibility solver's residual keeps growing."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class SpectrumConstraintParams:
    """Ring index `r0` past which moduli are constrained, and decay exponent `p`.

    ``r0=None`` lets `apply_constraints` use the Nyquist ring of the
    low-resolution image.
    """

    r0: int | None = None
    p: float = DEFAULT_SLOPE

    def __post_init__(self):
        if self.r0 is not None and self.r0 < 1:
            raise ValueError(f"r0 must be >= 1, got {self.r0}")
        if not self.p > 0:
            raise ValueError(f"p must be positive, got {self.p}")


@dataclass(frozen=True)
class HistConstraintParams:
    num_slices: int = 32
    step_eps: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.num_slices < 1:
            raise ValueError(f"num_slices must be >= 1, got {self.num_slices}")
        if not 0 < self.step_eps <= 1:
            raise ValueError(f"step_eps must lie in (0, 1], got {self.step_eps}")


@dataclass(frozen=True)
class RevConstraintParams:
    tol: float = 1e-6
    max_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class ConstraintConfig:
    """Parameters of the three projections and which of them are active."""

    spectrum: SpectrumConstraintParams = field(default_factory=SpectrumConstraintParams)
    hist: HistConstraintParams = field(default_factory=HistConstraintParams)
    rev: RevConstraintParams = field(default_factory=RevConstraintParams)
    use_spectrum: bool = True
    use_hist: bool = True
    use_rev: bool = True


def rayleigh_quantile(beta, u):
    """Quantile function of the Rayleigh distribution with scale `beta`."""
    u = np.asarray(u, dtype=np.float64)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if np.any(u < 0) or np.any(u >= 1):
        raise ValueError("quantile level must lie in [0, 1)")
    q = beta * np.sqrt(-2.0 * np.log1p(-u))
    return q if q.ndim else float(q)


def canonical_mask(shape):
    """True on one member of every conjugate pair and on self-conjugate bins."""
    idx = np.arange(shape[0] * shape[1]).reshape(shape)
    return idx <= conjugate_index(shape)


def ring_scale(e0, r, r0, p):
    """Rayleigh scale giving mean modulus ``e0 * (r / r0) ** -p`` on ring `r`."""
    return np.sqrt(2.0 / np.pi) * e0 * (np.asarray(r, dtype=np.float64) / r0) ** (-p)


def impose_spectrum(spec, r0, p):
    """Replace ring moduli past `r0` by ordered Rayleigh quantiles.

    Within each ring ``r > r0`` the canonical half of the coefficients is
    ranked by modulus and the ``i``-th of ``m`` gets the quantile at level
    ``(i - 0.5) / m`` of a Rayleigh law with mean ``E_r0 * (r / r0) ** -p``,
    where ``E_r0`` is the mean modulus on ring `r0`. Phases are kept and
    the conjugate half is mirrored, so a Hermitian input stays Hermitian.
    """
    shape = spec.shape
    rings = ring_index(shape).ravel()
    r_max = int(rings.max())
    if not 1 <= r0 < r_max:
        raise ValueError(f"r0={r0} must lie in [1, {r_max})")
    flat = spec.ravel()
    mod = np.abs(flat)
    e0 = mod[rings == r0].mean()
    out = flat.copy()
    if e0 == 0:
        out[rings > r0] = 0
        return out.reshape(shape)

    conj = conjugate_index(shape).ravel()
    members = np.flatnonzero(canonical_mask(shape).ravel() & (rings > r0))
    ring = rings[members]
    # rank by modulus within each ring; ring processing order is irrelevant
    order = np.lexsort((mod[members], ring))
    members, ring = members[order], ring[order]
    m = np.bincount(ring, minlength=r_max + 1)
    start = np.concatenate(([0], np.cumsum(m)[:-1]))
    rank = np.arange(len(members)) - start[ring]
    level = (rank + 0.5) / m[ring]
    q = rayleigh_quantile(1.0, level) * ring_scale(e0, ring, r0, p)

    c = flat[members]
    a = mod[members]
    unit = np.divide(c, a, out=np.ones_like(c), where=a > 0)
    selfconj = conj[members] == members
    unit[selfconj] = np.where(c[selfconj].real < 0, -1.0, 1.0)
    out[members] = unit * q
    out[conj[members]] = np.conj(out[members])
    return out.reshape(shape)


def proj_spectrum(img, params):
    """Spectral projection applied channel by channel.

    Each channel is split into periodic and smooth components; the ring
    statistics of the periodic one are imposed with `impose_spectrum` and
    the smooth component is added back unchanged.
    """
    img = as_image(img)
    if params.r0 is None:
        raise ValueError("proj_spectrum needs an explicit r0")

    def project(plane):
        periodic, smooth = periodic_smooth_decompose(plane)
        spec = impose_spectrum(dft2(periodic), params.r0, params.p)
        return idft2(spec) + smooth

    return map_planes(project, img)


def proj_hist(img, ref, params, stream=()):
    """Sliced optimal transport of the pixel distribution of `img` towards `ref`.

    `ref` is bilinearly stretched to the size of `img`. For every slice a
    unit direction ``theta`` is drawn, both pixel sets are sorted by their
    projection on ``theta`` and each pixel of `img` moves by
    ``eps * theta * gap`` where ``gap`` is the projection difference to the
    equally ranked pixel of the reference. `stream` extends the random key
    so that repeated calls can use fresh directions.
    """
    img, ref = as_image(img), as_image(ref)
    if img.ndim != ref.ndim or img.shape[2:] != ref.shape[2:]:
        raise ValueError(f"channel mismatch: {img.shape} vs {ref.shape}")
    h, w = img.shape[:2]
    stretched = resample_bilinear(ref, w, h)
    x = img.reshape(h * w, -1).copy()
    y = stretched.reshape(h * w, -1)
    dim = x.shape[1]
    for theta in random_directions(params.num_slices, dim, params.seed, stream):
        px = x @ theta
        py = y @ theta
        sx = np.argsort(px, kind="stable")
        sy = np.argsort(py, kind="stable")
        gap = py[sy] - px[sx]
        x[sx] += params.step_eps * gap[:, None] * theta[None, :]
    return x.reshape(img.shape)


class DegradationOperator:
    """Matrix form of `imaging.degrade` between fixed grids, with its adjoint.

    Degradation is separable, so it is stored as one dense matrix per axis:
    ``forward(x) = Mh @ x @ Mw.T`` and ``adjoint(y) = Mh.T @ y @ Mw``.
    The Gram operator ``A A^T`` is then a Kronecker product of two small
    symmetric matrices whose eigendecompositions give its exact inverse.
    """

    def __init__(self, hr_shape, lr_shape, factor):
        if not factor > 1:
            raise ValueError(f"factor must be > 1, got {factor}")
        if min(lr_shape[:2]) < MIN_DEGRADED_SIZE:
            raise ValueError(f"low-resolution size {lr_shape[:2]} below {MIN_DEGRADED_SIZE}")
        sigma = BLUR_PER_ZOOM * factor
        (H, W), (h, w) = hr_shape[:2], lr_shape[:2]
        self.hr_shape, self.lr_shape = (H, W), (h, w)
        self.mh = resample_matrix(H, h) @ blur_matrix(H, sigma)
        self.mw = resample_matrix(W, w) @ blur_matrix(W, sigma)
        self.gh = self.mh @ self.mh.T
        self.gw = self.mw @ self.mw.T
        lh, self._vh = np.linalg.eigh(self.gh)
        lw, self._vw = np.linalg.eigh(self.gw)
        self._lam = np.outer(lh, lw)

    def forward(self, x):
        return self.mh @ x @ self.mw.T

    def adjoint(self, y):
        return self.mh.T @ y @ self.mw

    def gram(self, y):
        """``A @ A.T`` applied to a low-resolution plane."""
        return self.gh @ y @ self.gw.T

    def gram_inverse(self, y):
        """``(A @ A.T)^-1`` applied to a low-resolution plane."""
        vh, vw = self._vh, self._vw
        return vh @ ((vh.T @ y @ vw) / self._lam) @ vw.T


def solve_gram(op, b, tol, max_iters, scale):
    """Preconditioned conjugate gradients for ``op.gram(y) = b``.

    The preconditioner is ``op.gram_inverse``; plain CG on this system is
    slow because blurring makes it ill-conditioned. Iteration stops once
    ``|residual| <= tol * scale`` and fails if the residual grows for
    `DIVERGENCE_PATIENCE` consecutive iterations. Returns ``(y, relative
    residual, iterations)``.
    """
    y = np.zeros_like(b)
    r = b.copy()
    z = op.gram_inverse(r)
    d = z.copy()
    rz = np.vdot(r, z)
    res = np.linalg.norm(r) / scale
    growth, it = 0, 0
    while res > tol and it < max_iters:
        q = op.gram(d)
        alpha = rz / np.vdot(d, q)
        y += alpha * d
        r -= alpha * q
        res_new = np.linalg.norm(r) / scale
        growth = growth + 1 if res_new > res else 0
        if growth >= DIVERGENCE_PATIENCE:
            raise ConvergenceError("reversibility solver diverged", res_new)
        z = op.gram_inverse(r)
        rz_new = np.vdot(r, z)
        d = z + (rz_new / rz) * d
        rz, res = rz_new, res_new
        it += 1
    return y, res, it


def proj_rev(img, lr, factor, params, operator=None):
    """Smallest correction of `img` whose degradation reproduces `lr`.

    Solves ``(A A^T) y = lr - A img`` by preconditioned conjugate
    gradients on the low-resolution grid and returns ``img + A^T y``, where ``A`` degrades
    by `factor` onto the grid of `lr`.
    """
    img, lr = as_image(img), as_image(lr)
    if img.ndim != lr.ndim or img.shape[2:] != lr.shape[2:]:
        raise ValueError(f"channel mismatch: {img.shape} vs {lr.shape}")
    if not factor > 1:
        raise ValueError(f"factor must be > 1, got {factor}")
    expected = degraded_shape(img.shape, factor)
    if operator is None:
        if lr.shape[:2] != expected:
            raise ValueError(
                f"low-resolution shape {lr.shape[:2]} does not match "
                f"{img.shape[:2]} degraded by {factor} ({expected})")
        operator = DegradationOperator(img.shape, lr.shape, factor)
    elif operator.hr_shape != img.shape[:2] or operator.lr_shape != lr.shape[:2]:
        raise ValueError("operator grids do not match the images")

    out = []
    for w, u in zip(planes(img), planes(lr)):
        b = u - operator.forward(w)
        scale = np.linalg.norm(u) or 1.0
        y, res, it = solve_gram(operator, b, params.tol, params.max_iters, scale)
        log.debug("proj_rev: %d iterations, relative residual %.3e", it, res)
        out.append(w + operator.adjoint(y))
    return out[0] if img.ndim == 2 else np.stack(out, axis=-1)


def default_r0(lr_shape):
    """Nyquist ring of the low-resolution grid."""
    return max(1, min(lr_shape[:2]) // 2)


def apply_constraints(img, lr, factor, cfg=None, rounds=3, stream=(), operator=None):
    """Run `rounds` passes of spectrum, histogram and reversibility projections.

    Disabled projections are skipped inside the same round structure.
    The reversibility target grid is the grid of `lr`, so `factor` may be
    any real zoom.
    """
    img, lr = as_image(img), as_image(lr)
    cfg = cfg or ConstraintConfig()
    if rounds < 0:
        raise ValueError(f"rounds must be >= 0, got {rounds}")
    spectrum = cfg.spectrum
    if cfg.use_spectrum and spectrum.r0 is None:
        spectrum = SpectrumConstraintParams(default_r0(lr.shape), spectrum.p)
    if cfg.use_rev and rounds and operator is None:
        operator = DegradationOperator(img.shape, lr.shape, factor)
    w = img
    for k in range(rounds):
        if cfg.use_spectrum:
            w = proj_spectrum(w, spectrum)
        if cfg.use_hist:
            w = proj_hist(w, lr, cfg.hist, stream=(*stream, k))
        if cfg.use_rev:
            w = proj_rev(w, lr, factor, cfg.rev, operator=operator)
    return w
