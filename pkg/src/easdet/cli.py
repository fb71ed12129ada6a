"""Command-line front end.

Subcommands: detect, blur, eval, sweep, bench, dump-scores. Exit codes:
0 on success, 1 on usage errors, 2 on I/O or file-format errors.
Identical invocations on identical inputs produce byte-identical
output files.
"""

import argparse
import math
import sys

import numpy as np

from . import evalbench, kernels
from .blur import parse_pipeline
from .eas import EasConfig, score_octave, write_keypoints_csv, write_keypoints_json
from .errors import FormatError, SingularWarp, TooSmall
from .evalbench import detect_by_name
from .image import WarpSpec, load_image, save_image, warp
from .pyramid import build_pyramid


class UsageError(Exception):
    pass


def _add_common(p):
    p.add_argument("--in", dest="input", required=True, help="input image (PGM or PNG)")
    p.add_argument(
        "--backend",
        choices=sorted(kernels.available_backends()),
        default=None,
        help="force a compute backend (default: best available)",
    )


def _add_detector_cfg(p):
    d = EasConfig()
    p.add_argument(
        "--detector",
        choices=["eas", "harris", "min-eigen"],
        default="eas",
        help="which detector to run (default eas)",
    )
    p.add_argument("--top-n", type=int, default=500, help="keypoints to keep (default 500)")
    p.add_argument("--clamp", type=float, default=d.clamp, help=f"squared-derivative ceiling (default {d.clamp})")
    p.add_argument(
        "--no-quadrant-mask",
        action="store_true",
        help="use full derivative statistics instead of the positive quadrant",
    )
    p.add_argument("--edge-thr", type=float, default=d.edge_thr, help=f"edge eigenvalue-ratio threshold (default {d.edge_thr})")
    p.add_argument("--max-octaves", type=int, default=d.max_octaves, help=f"pyramid depth (default {d.max_octaves})")
    p.add_argument("--k-base", type=int, default=d.k_base, help=f"octave-0 averaging window (default {d.k_base})")
    p.add_argument("--nms-radius", type=int, default=d.nms_radius, help=f"suppression radius (default {d.nms_radius})")


def _cfg_from(args):
    return EasConfig(
        clamp=args.clamp,
        quadrant_mask=not args.no_quadrant_mask,
        edge_thr=args.edge_thr,
        max_octaves=args.max_octaves,
        k_base=args.k_base,
        nms_radius=args.nms_radius,
    )


def _parse_warp(text):
    parts = text.split(",")
    if len(parts) != 6:
        raise UsageError(f"--warp needs 6 comma-separated numbers, got {text!r}")
    try:
        a, b, c, d, e, f = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--warp needs numeric entries, got {text!r}") from None
    return WarpSpec.affine(a, b, c, d, e, f)


def _load_pipeline(path, seed):
    with open(path) as f:
        return parse_pipeline(f.read(), default_seed=seed)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="easdet",
        description="Blur-robust keypoint detection, synthetic blur, and repeatability benchmarks.",
    )
    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("detect", help="detect keypoints and write them as CSV or JSON")
    _add_common(p)
    _add_detector_cfg(p)
    p.add_argument("--out", default=None, help="output file; .json for JSON, anything else CSV (default stdout CSV)")

    p = sub.add_parser("blur", help="apply a degradation pipeline to an image")
    _add_common(p)
    p.add_argument("--pipeline", required=True, help="pipeline description file")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--mode", choices=["pgm8", "pgm16", "raw_f32"], default="pgm8", help="output encoding (default pgm8)")
    p.add_argument("--seed", type=int, default=0, help="default seed for saltpepper steps lacking seed= (default 0)")

    p = sub.add_parser("eval", help="repeatability of one detector under one degradation")
    _add_common(p)
    _add_detector_cfg(p)
    p.add_argument("--pipeline", default=None, help="pipeline description file (default: no degradation)")
    p.add_argument("--warp", default=None, help="a,b,c,d,e,f entries of the 2x3 affine applied after blur")
    p.add_argument("--tol", type=float, default=None, help="match tolerance in px (default 1.0 with --warp, else 0)")
    p.add_argument("--seed", type=int, default=0, help="default seed for saltpepper steps (default 0)")

    p = sub.add_parser("sweep", help="repeatability grid over a blur axis, detectors, and TopN values")
    _add_common(p)
    p.add_argument("--axis", required=True, help="gaussian:1,3,5,7,9 or motion:5,10,15,20,25")
    p.add_argument("--top-ns", default="100,200,300,400,500", help="comma-separated TopN values (default 100..500)")
    p.add_argument("--detectors", default="eas,harris,min-eigen", help="comma-separated detector names")
    p.add_argument("--tol", type=float, default=0.0, help="match tolerance in px (default 0)")
    p.add_argument("--theta", type=float, default=math.pi / 4, help="motion angle in radians (default pi/4)")
    p.add_argument("--out", required=True, help="report CSV path")
    p.add_argument("--series-dir", default=None, help="also write per-detector series CSVs here")

    p = sub.add_parser("bench", help="median detection time in milliseconds")
    _add_common(p)
    p.add_argument("--detector", choices=["eas", "harris", "min-eigen"], default="eas")
    p.add_argument("--repeats", type=int, default=11, help="timed runs after one warm-up (default 11)")

    p = sub.add_parser("dump-scores", help="write one octave's suppression-ready score map as raw_f32")
    _add_common(p)
    _add_detector_cfg(p)
    p.add_argument("--octave", type=int, default=0, help="octave index (default 0)")
    p.add_argument("--out", required=True, help="raw_f32 output path")
    return parser


def _run_detect(args):
    img = load_image(args.input)
    kps = detect_by_name(img, args.detector, cfg=_cfg_from(args), top_n=args.top_n)
    if args.out is None:
        write_keypoints_csv(kps, sys.stdout)
    elif args.out.endswith(".json"):
        with open(args.out, "w") as f:
            write_keypoints_json(kps, f)
    else:
        with open(args.out, "w") as f:
            write_keypoints_csv(kps, f)
    return 0


def _run_blur(args):
    img = load_image(args.input)
    pipeline = _load_pipeline(args.pipeline, args.seed)
    from .blur import apply_pipeline

    out = apply_pipeline(img, pipeline)
    save_image(np.clip(out, 0.0, 1.0) if args.mode != "raw_f32" else out, args.out, mode=args.mode)
    return 0


def _run_eval(args):
    img = load_image(args.input)
    pipeline = _load_pipeline(args.pipeline, args.seed) if args.pipeline else None
    transform = _parse_warp(args.warp) if args.warp else None
    tol = args.tol
    if tol is None:
        tol = 1.0 if transform is not None else 0.0
    cfg = evalbench.EvalConfig(top_n=args.top_n, tol=tol, transform=transform)
    r = evalbench.repeatability(
        img, args.detector, pipeline=pipeline, cfg=cfg, det_cfg=_cfg_from(args)
    )
    sys.stdout.write(evalbench.REPORT_HEADER + "\n")
    sys.stdout.write(evalbench.result_row(r) + "\n")
    return 0


def _parse_axis(text):
    kind, _, rest = text.partition(":")
    if kind not in ("gaussian", "motion") or not rest:
        raise UsageError(f"--axis must be gaussian:v1,v2,... or motion:v1,v2,..., got {text!r}")
    try:
        values = [float(v) for v in rest.split(",")]
    except ValueError:
        raise UsageError(f"--axis values must be numeric, got {text!r}") from None
    return kind, values


def _parse_numbers(text, flag, cast=int):
    try:
        return [cast(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} values must be numeric, got {text!r}") from None


def _run_sweep(args):
    img = load_image(args.input)
    axis = _parse_axis(args.axis)
    top_ns = _parse_numbers(args.top_ns, "--top-ns")
    detectors = [d.strip() for d in args.detectors.split(",") if d.strip()]
    if not detectors:
        raise UsageError("--detectors must name at least one detector")
    results = evalbench.sweep(img, detectors, axis, top_ns, tol=args.tol, theta=args.theta)
    with open(args.out, "w") as f:
        evalbench.write_report_csv(results, f)
    if args.series_dir:
        evalbench.write_series(results, args.series_dir)
    return 0


def _run_bench(args):
    img = load_image(args.input)
    ms = evalbench.timing(img, detector=args.detector, repeats=args.repeats)
    h, w = img.shape
    sys.stdout.write(
        f"detector={args.detector} backend={kernels.backend_name()} "
        f"size={w}x{h} repeats={args.repeats} median_ms={ms:.3f}\n"
    )
    return 0


def _run_dump_scores(args):
    img = load_image(args.input)
    cfg = _cfg_from(args)
    stack = build_pyramid(img, max_octaves=cfg.max_octaves)
    if not 0 <= args.octave < len(stack):
        raise UsageError(
            f"--octave {args.octave} out of range; image has {len(stack)} octaves"
        )
    score = score_octave(stack[args.octave], cfg, args.octave)
    save_image(score, args.out, mode="raw_f32")
    return 0


_RUNNERS = {
    "detect": _run_detect,
    "blur": _run_blur,
    "eval": _run_eval,
    "sweep": _run_sweep,
    "bench": _run_bench,
    "dump-scores": _run_dump_scores,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage problems; --help exits 0
        return 0 if e.code == 0 else 1
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 1
    prev_backend = None
    try:
        if args.backend:
            prev_backend = kernels.set_backend(args.backend)
        return _RUNNERS[args.subcommand](args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except (FormatError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (ValueError, TooSmall, SingularWarp) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    finally:
        if prev_backend is not None:
            kernels.set_backend(prev_backend)


if __name__ == "__main__":
    sys.exit(main())
