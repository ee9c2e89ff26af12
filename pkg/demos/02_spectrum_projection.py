"""
Spectral projection on white noise
==================================

White noise has a flat spectrum. Projecting it imposes a power law on
the rings past r0 while phases and the low rings stay untouched.
"""
import numpy as np

from powerlaw_sr.constraints import SpectrumConstraintParams, proj_spectrum
from powerlaw_sr.fourier import dft2, periodic_smooth_decompose, radial_profile

rng = np.random.default_rng(1)
img = rng.random((128, 128))

params = SpectrumConstraintParams(r0=16, p=1.7)
out = proj_spectrum(img, params)

before = radial_profile(dft2(periodic_smooth_decompose(img)[0]))
after = radial_profile(dft2(periodic_smooth_decompose(out)[0]))

print("ring  before    after     target")
for r in (8, 16, 24, 32, 48, 64, 80):
    target = before.mean_modulus[16] * (r / 16) ** -1.7 if r > 16 else before.mean_modulus[r]
    print(f"{r:4d}  {before.mean_modulus[r]:8.3f}  {after.mean_modulus[r]:8.3f}  {target:8.3f}")

# the whole profile is also available as CSV
print(after.to_csv().splitlines()[:4])
