"""Constrained iterative super-resolution for power-law spectrum images.

The package enlarges an image in small steps and, after each step,
projects it onto three statistical constraints: a power-law spectrum with
Rayleigh distributed ring moduli, the color histogram of the input, and
consistency with the input under blur plus decimation.
"""
__version__ = "0.1.0"

from .constraints import (ConstraintConfig, ConvergenceError, DegradationOperator,
                          HistConstraintParams, RevConstraintParams,
                          SpectrumConstraintParams, apply_constraints, proj_hist,
                          proj_rev, proj_spectrum, rayleigh_quantile)
from .fourier import (RadialProfile, dft2, idft2, periodic_smooth_decompose,
                      radial_profile)
from .image_io import load_image, save_image
from .imaging import degrade, gaussian_blur, resample_bilinear
from .metrics import psnr, reversibility_error, slope_error, sliced_hist_distance
from .pipeline import STEP_RATIO, sr_pipeline, zoom_schedule
from .synth import gen_colored_noise
from .upsampler import UpsamplerKind, upsample

__all__ = [
    "ConstraintConfig", "ConvergenceError", "DegradationOperator",
    "HistConstraintParams", "RevConstraintParams", "SpectrumConstraintParams",
    "RadialProfile", "STEP_RATIO", "UpsamplerKind",
    "apply_constraints", "degrade", "dft2", "gaussian_blur", "gen_colored_noise",
    "idft2", "load_image", "periodic_smooth_decompose", "proj_hist", "proj_rev",
    "proj_spectrum", "psnr", "radial_profile", "rayleigh_quantile",
    "resample_bilinear", "reversibility_error", "save_image", "sliced_hist_distance",
    "slope_error", "sr_pipeline", "upsample", "zoom_schedule",
]
