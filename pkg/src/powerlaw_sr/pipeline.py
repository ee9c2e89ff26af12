"""Iterative super-resolution: enlarge by 1/r, then constrain, until the zoom is reached."""
import logging

from .constraints import ConstraintConfig, DegradationOperator, apply_constraints
from .imaging import as_image, resample_bilinear, round_half_up
from .upsampler import UpsamplerKind, upsample

log = logging.getLogger(__name__)

STEP_RATIO = 0.793701
# (1 / STEP_RATIO) ** 6 falls short of 4 by about 4e-6
ZOOM_RTOL = 1e-4


def zoom_schedule(lr_shape, target_zoom, r=STEP_RATIO):
    """Sizes and cumulative zooms of every enlargement step.

    Returns a list of ``((H, W), zoom)``. The last entry is exactly
    ``round(lr_shape * target_zoom)`` at zoom `target_zoom`.
    """
    if not target_zoom > 1:
        raise ValueError(f"target zoom must exceed 1, got {target_zoom}")
    if not 0 < r < 1:
        raise ValueError(f"step ratio must lie in (0, 1), got {r}")
    h, w = lr_shape[:2]
    final = (round_half_up(h * target_zoom), round_half_up(w * target_zoom))
    steps = []
    prev, zoom = (h, w), 1.0
    while True:
        zoom /= r
        if zoom >= target_zoom * (1 - ZOOM_RTOL):
            steps.append((final, float(target_zoom)))
            return steps
        size = (max(round_half_up(h * zoom), prev[0] + 1),
                max(round_half_up(w * zoom), prev[1] + 1))
        if size[0] >= final[0] or size[1] >= final[1]:
            steps.append((final, float(target_zoom)))
            return steps
        steps.append((size, zoom))
        prev = size


def sr_pipeline(lr, target_zoom, upsampler=None, cfg=None, seed=0, rounds=3, r=STEP_RATIO):
    """Super-resolve `lr` by `target_zoom`.

    Every step enlarges the current image by about ``1 / r`` and then runs
    `rounds` rounds of constraint projections against `lr` at the
    cumulative zoom.

    When nothing modifies the image between two bilinear steps (no active
    constraint, or ``rounds == 0``) the steps are fused into a single
    resampling of `lr`, so an unconstrained bilinear run equals one-shot
    bilinear zoom.
    """
    lr = as_image(lr)
    upsampler = upsampler or UpsamplerKind()
    cfg = cfg or ConstraintConfig()
    constrained = rounds > 0 and (cfg.use_spectrum or cfg.use_hist or cfg.use_rev)
    fuse = upsampler.variant == "bilinear" or upsampler.detail_sigma == 0
    w = lr
    for step, (shape, zoom) in enumerate(zoom_schedule(lr.shape, target_zoom, r)):
        if fuse and not constrained:
            w = resample_bilinear(lr, shape[1], shape[0])
        else:
            step_zoom = shape[0] / w.shape[0]
            w = upsample(w, step_zoom, upsampler, seed=[seed, step], out_shape=shape)
        if constrained:
            op = DegradationOperator(shape, lr.shape, zoom) if cfg.use_rev else None
            w = apply_constraints(w, lr, zoom, cfg, rounds, stream=(seed, step), operator=op)
        log.info("step %d: %dx%d, zoom %.4f", step, shape[1], shape[0], zoom)
    return w
