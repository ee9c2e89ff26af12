"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""
import math
import time

import numpy as np
import pytest
from scipy import stats

from powerlaw_sr.cli import main
from powerlaw_sr.constraints import (ConstraintConfig, SpectrumConstraintParams, canonical_mask,
                                     proj_rev, proj_spectrum, RevConstraintParams,
                                     DegradationOperator)
from powerlaw_sr.fourier import dft2, periodic_smooth_decompose, radial_profile, ring_index
from powerlaw_sr.imaging import degrade, resample_bilinear
from powerlaw_sr.metrics import reversibility_error, slope_error, sliced_hist_distance
from powerlaw_sr.pipeline import sr_pipeline
from powerlaw_sr.upsampler import UpsamplerKind

from test_constraints import dense_degradation
from test_fourier import brute_dft


@pytest.fixture(scope="module")
def runs(lr64):
    t0 = time.process_time()
    full = sr_pipeline(lr64, 4)
    elapsed = time.process_time() - t0
    return {
        "full": full,
        "time": elapsed,
        "no_rev": sr_pipeline(lr64, 4, cfg=ConstraintConfig(use_rev=False)),
        "no_hist": sr_pipeline(lr64, 4, cfg=ConstraintConfig(use_hist=False)),
        "bilinear": resample_bilinear(lr64, 256, 256),
    }


def test_criterion_1_slope_recovery(runs, report):
    slope, stderr = slope_error(runs["full"])
    base = slope_error(runs["bilinear"])[1]
    ok = abs(slope + 1.7) <= 0.1 and stderr <= 0.6 * base and runs["time"] <= 60
    report("1 slope recovery", ok,
           f"slope {slope:.4f}, stderr {stderr:.5f} vs bilinear {base:.5f}, {runs['time']:.1f} s")
    assert ok


def test_criterion_2_reversibility(runs, lr64, report):
    err = reversibility_error(runs["full"], lr64, 4)
    err_off = reversibility_error(runs["no_rev"], lr64, 4)
    ok = err <= 1e-4 and err_off >= 5 * err
    report("2 reversibility", ok, f"error {err:.3e}, without projection {err_off:.3e}")
    assert ok


def test_criterion_3_histogram(runs, lr64, report):
    stretched = resample_bilinear(lr64, 256, 256)
    with_hist = sliced_hist_distance(runs["full"], stretched)
    without = sliced_hist_distance(runs["no_hist"], stretched)
    ok = with_hist <= 0.5 * without
    report("3 histogram", ok, f"distance {with_hist:.4f} vs {without:.4f} without (ratio "
                              f"{with_hist / without:.3f}, needs <= 0.5)")
    assert ok


def test_criterion_4_rayleigh_conformance(report):
    img = np.random.default_rng(4).random((256, 256))
    r0, p = 32, 1.7
    out = proj_spectrum(img, SpectrumConstraintParams(r0=r0, p=p))
    periodic_in, smooth = periodic_smooth_decompose(img)
    spec = dft2(out - smooth)
    e0 = radial_profile(dft2(periodic_in)).mean_modulus[r0]
    rings = ring_index(spec.shape)
    canon = canonical_mask(spec.shape)
    tested = passed = 0
    for r in range(r0 + 1, rings.max() + 1):
        mods = np.abs(spec[canon & (rings == r)])
        if len(mods) < 64:
            continue
        beta = math.sqrt(2 / math.pi) * e0 * (r / r0) ** -p
        tested += 1
        passed += stats.kstest(mods, stats.rayleigh(scale=beta).cdf).pvalue >= 0.01
    prof = radial_profile(spec)
    r = np.arange(r0 + 1, int(0.9 * prof.r_max) + 1)
    fit = stats.linregress(np.log(r), np.log(prof.mean_modulus[r]))
    frac = passed / tested
    ok = frac >= 0.95 and fit.rvalue ** 2 >= 0.99
    report("4 rayleigh conformance", ok,
           f"{passed}/{tested} rings pass KS, R^2 {fit.rvalue ** 2:.5f}, slope {fit.slope:.4f}")
    assert ok


def test_criterion_5_oracles(report):
    rng = np.random.default_rng(5)
    x = rng.random((4, 4))
    dft_err = np.abs(dft2(x) - brute_dft(x)).max()

    a, _ = dense_degradation((8, 8), 2)
    w, u = rng.random((8, 8)), rng.random((4, 4))
    oracle = w.ravel() + np.linalg.pinv(a) @ (u.ravel() - a @ w.ravel())
    out = proj_rev(w, u, 2, RevConstraintParams(tol=1e-12, max_iters=100))
    rev_err = np.abs(out.ravel() - oracle).max()

    # one slice in 1-D: the distance is the sorted L1 gap, computed exactly
    g1, g2 = rng.random((20, 20)), rng.random((15, 15))
    s1 = np.sort(g1.ravel())
    s2 = np.sort(resample_bilinear(g2, 20, 20).ravel())
    w1 = 255 * (math.fsum(np.abs(s1 - s2)) / s1.size)
    w1_ok = sliced_hist_distance(g1, g2, num_slices=1) == w1

    op = DegradationOperator((256, 256), (64, 64), 4)
    xx, yy = rng.standard_normal((256, 256)), rng.standard_normal((64, 64))
    lhs, rhs = np.vdot(op.forward(xx), yy), np.vdot(xx, op.adjoint(yy))
    adj = abs(lhs - rhs) / abs(lhs)

    ok = dft_err <= 1e-10 and rev_err <= 1e-6 and w1_ok and adj <= 1e-8
    report("5 oracles", ok, f"dft {dft_err:.1e}, pinv {rev_err:.1e}, W1 exact {w1_ok}, "
                            f"adjoint {adj:.1e}")
    assert ok


def seam_jump(u):
    """Mean signed jump across both wrap-around seams."""
    return abs(np.mean(u[:, -1] - u[:, 0])) + abs(np.mean(u[-1] - u[0]))


def test_criterion_6_decomposition(report):
    rng = np.random.default_rng(6)
    worst_id = worst_seam = 0.0
    for _ in range(20):
        h, w = rng.integers(128, 257, size=2)
        u = rng.random((h, w)) + np.linspace(0, rng.random(), w)  # seam-bearing trend
        p, s = periodic_smooth_decompose(u)
        worst_id = max(worst_id, np.abs(p + s - u).max())
        worst_seam = max(worst_seam, seam_jump(p) / seam_jump(u))
    ok = worst_id <= 1e-9 and worst_seam <= 0.01
    report("6 decomposition", ok, f"identity {worst_id:.1e}, seam ratio {worst_seam:.4f}")
    assert ok


def test_criterion_7_cli_determinism(tmp_path, report):
    def run(tag):
        d = tmp_path / tag
        d.mkdir()
        cmds = [
            ["synth", "--width", "96", "--height", "80", "--seed", "11", "--out", str(d / "gt.pfm")],
            ["degrade", "--in", str(d / "gt.pfm"), "--factor", "3", "--out", str(d / "lr.pfm")],
            ["sr", "--in", str(d / "lr.pfm"), "--zoom", "3", "--seed", "4", "--out",
             str(d / "sr.pfm")],
            ["sr", "--in", str(d / "lr.pfm"), "--zoom", "2", "--upsampler", "bilinear",
             "--no-rev", "--eps", "0.5", "--seed", "9", "--out", str(d / "sr2.pfm")],
        ]
        assert all(main(c) == 0 for c in cmds)
        return [(d / n).read_bytes() for n in ("gt.pfm", "lr.pfm", "sr.pfm", "sr2.pfm")]

    ok = run("a") == run("b")
    report("7 determinism", ok, "4 CLI runs repeated, PFM outputs bitwise " +
           ("identical" if ok else "different"))
    assert ok


def test_criterion_8_collapse(lr64, report):
    off = ConstraintConfig(use_spectrum=False, use_hist=False, use_rev=False)
    out = sr_pipeline(lr64, 4, UpsamplerKind("bilinear"), off)
    diff = np.abs(out - resample_bilinear(lr64, 256, 256)).max()
    ok = diff <= 1e-6
    report("8 degenerate collapse", ok, f"max difference {diff:.1e}")
    assert ok
