"""Command-line interface: ``powerlaw-sr {synth,degrade,sr,metrics,spectrum}``."""
import argparse
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .constraints import (ConstraintConfig, HistConstraintParams, RevConstraintParams,
                          SpectrumConstraintParams)
from .fourier import dft2, periodic_smooth_decompose, radial_profile
from .image_io import FORMATS, atomic_write, load_image, save_image
from .imaging import degrade, planes
from .metrics import psnr, reversibility_error, slope_error, sliced_hist_distance
from .pipeline import sr_pipeline
from .synth import DEFAULT_SLOPE, gen_colored_noise
from .upsampler import REFERENCE_DETAIL_SIGMA, UpsamplerKind

PROG = "powerlaw-sr"


def _write_manifest(args, path, **extra):
    record = {"command": args.command, "version": __version__}
    for key, value in vars(args).items():
        if key not in ("func", "command"):
            record[key] = value
    record.update(extra)
    atomic_write(path, (json.dumps(record, indent=2, sort_keys=True) + "\n").encode())


def cmd_synth(args):
    img = gen_colored_noise(args.width, args.height, args.slope, args.seed)
    save_image(img, args.out, args.format)
    if args.png:
        save_image(img, args.png, "png8")


def cmd_degrade(args):
    img = load_image(args.input)
    save_image(degrade(img, args.factor), args.out, args.format)


def cmd_sr(args):
    lr = load_image(args.input)
    cfg = ConstraintConfig(
        spectrum=SpectrumConstraintParams(args.r0, args.slope),
        hist=HistConstraintParams(args.slices, args.eps, args.seed),
        rev=RevConstraintParams(args.tol, args.max_iters),
        use_spectrum=not args.no_spectrum,
        use_hist=not args.no_hist,
        use_rev=not args.no_rev,
    )
    kind = UpsamplerKind(args.upsampler.replace("-", "_"), args.detail_sigma, args.slope)
    out = sr_pipeline(lr, args.zoom, kind, cfg, seed=args.seed, rounds=args.rounds)
    save_image(out, args.out, args.format)


def _fmt(value):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def cmd_metrics(args):
    ref = load_image(args.ref)
    test = load_image(args.test)
    rows = [("psnr", psnr(ref, test)),
            ("sliced_hist_distance", sliced_hist_distance(ref, test, seed=args.seed))]
    if args.lr:
        lr = load_image(args.lr)
        factor = args.factor or test.shape[1] / lr.shape[1]
        rows.append(("reversibility_error", reversibility_error(test, lr, factor)))
    slope, stderr = slope_error(test)
    rows += [("slope", slope), ("slope_error", stderr)]
    text = "metric,value\n" + "".join(f"{name},{_fmt(v)}\n" for name, v in rows)
    _emit(text, args.out)


def cmd_spectrum(args):
    img = load_image(args.input)
    profiles = [radial_profile(dft2(periodic_smooth_decompose(p)[0])) for p in planes(img)]
    prof = profiles[0]
    if len(profiles) > 1:
        mean = np.mean([p.mean_modulus for p in profiles], axis=0)
        prof = type(prof)(prof.radius, prof.count, mean)
    _emit(prof.to_csv(), args.out)


def _emit(text, out):
    if out:
        atomic_write(out, text.encode("ascii"))
    else:
        sys.stdout.write(text)


def _add_output(p, required=True):
    p.add_argument("--out", required=required, help="output file")
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="image format (default: from the file suffix, png8 unless .pfm)")


def build_parser():
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a colored-noise image")
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--slope", type=float, default=DEFAULT_SLOPE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--png", help="optional 8-bit PNG preview path")
    p.add_argument("--manifest")
    _add_output(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("degrade", help="blur and decimate an image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--factor", type=float, required=True)
    p.add_argument("--manifest")
    _add_output(p)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("sr", help="constrained iterative super-resolution")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--zoom", type=float, default=4.0)
    p.add_argument("--upsampler", choices=("bilinear", "spectral-detail"), default="spectral-detail")
    p.add_argument("--detail-sigma", type=float, default=REFERENCE_DETAIL_SIGMA)
    p.add_argument("--r0", type=int, default=None,
                   help="first constrained ring (default: Nyquist ring of the input)")
    p.add_argument("--slope", type=float, default=DEFAULT_SLOPE)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--slices", type=int, default=32)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-spectrum", action="store_true")
    p.add_argument("--no-hist", action="store_true")
    p.add_argument("--no-rev", action="store_true")
    p.add_argument("--manifest")
    _add_output(p)
    p.set_defaults(func=cmd_sr)

    p = sub.add_parser("metrics", help="compare an output with a reference")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--lr", help="low-resolution input, enables reversibility_error")
    p.add_argument("--factor", type=float, default=None,
                   help="zoom factor of --test over --lr (default: width ratio)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("spectrum", help="radial Fourier profile as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        args.func(args)
        if args.manifest:
            _write_manifest(args, args.manifest)
    except Exception as exc:  # one-line diagnostic, no traceback
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
