"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 when processing fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path as FsPath

import numpy as np

from . import __version__
from .core_types import HdrImage, InvalidInputError, ModuloImage, Path, SensorConfig
from .destripe import KEEP_LARGE, KEEP_SMALL, remove_stripes
from .finite_diff import itoh_margin
from .image_io import load_dataset, load_pfm, normalize_max, save_pfm, write_ppm8
from .metrics import evaluate, reinhard_tonemap
from .pipeline import DEFAULT_ALPHAS, METHODS, SweepConfig, recover_image, rows_to_csv, run_sweep, summarize, synthetic_dataset
from .sensing import modulo_wrap, simulate_ccd, simulate_modulo
from .vectorize import SnakeLayout, snake_flatten

log = logging.getLogger("modhdr")

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
EVAL_FIELDS = ("image", "method", "alpha", "order", "psnr", "ssim", "q_index")
DIAGNOSE_ORDERS = (1, 2, 3, 4)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for processing errors here
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _on_off(value: str) -> bool:
    v = value.lower()
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {value!r}")


def _positive(value: str) -> float:
    v = float(value)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return v


def _float_list(value: str) -> list[float]:
    try:
        return [float(t) for t in value.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def _int_list(value: str) -> list[int]:
    try:
        return [int(t) for t in value.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def _add_lambda(p):
    p.add_argument("--lambda", dest="lam", type=_positive, default=1.0, metavar="L",
                   help="saturation threshold lambda (default: 1.0)")


def _add_unwrap_flags(p):
    p.add_argument("--order", type=int, default=2, metavar="N", help="finite-difference order N (default: 2)")
    p.add_argument("--path", choices=[x.value for x in Path], default=Path.HORIZONTAL.value,
                   help="snake vectorization trajectory (default: horizontal)")
    p.add_argument("--method", choices=METHODS, default="ahfd",
                   help="unwrapper: DCT autoregressive, running-sum baseline, or per-row (default: ahfd)")


def _add_stripe_flags(p):
    p.add_argument("--gamma", type=float, default=None, metavar="G",
                   help="hard-threshold level for stripe gradients (default: lambda/2)")
    p.add_argument("--threshold-keep", choices=(KEEP_LARGE, KEEP_SMALL), default=KEEP_LARGE,
                   help="which gradients count as stripes: above or below gamma (default: large)")
    p.add_argument("--stripe-snap", type=_on_off, default=True, metavar="on|off",
                   help="round stripe gradients to multiples of lambda before integrating (default: on)")


def _add_output(p, required: bool, what: str):
    p.add_argument("-o", "--output", required=required, metavar="FILE", help=what)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modhdr", description="HDR recovery from modulo-camera measurements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("simulate", help="wrap an HDR image into a modulo measurement",
                       description="Normalize by the image maximum, scale by alpha, and wrap modulo lambda.")
    p.add_argument("input", help="HDR input (PFM)")
    _add_output(p, True, "modulo measurement (PFM)")
    _add_lambda(p)
    p.add_argument("--alpha", type=float, default=1.0, help="saturation factor, >= 1 (default: 1.0)")
    p.add_argument("--ccd", action="store_true", help="simulate a clipping sensor instead")

    p = sub.add_parser("recover", help="reconstruct HDR from a modulo measurement",
                       description="Snake-flatten, unwrap, fold back and remove stripes, per channel.")
    p.add_argument("input", help="modulo measurement (PFM, samples in [0, lambda])")
    _add_output(p, True, "reconstruction (PFM)")
    _add_lambda(p)
    _add_unwrap_flags(p)
    _add_stripe_flags(p)
    p.add_argument("--destripe", type=_on_off, default=True, metavar="on|off", help="remove stripe artifacts (default: on)")
    p.add_argument("--reproject", action="store_true", help="snap the output back onto the measurement's wrap lattice")
    p.add_argument("--ppm", metavar="FILE", help="also write a Reinhard tone-mapped 8-bit preview")

    p = sub.add_parser("destripe", help="remove stripe artifacts from an unwrapped image")
    p.add_argument("input", help="unwrapped image (PFM)")
    _add_output(p, True, "destriped image (PFM)")
    _add_lambda(p)
    _add_stripe_flags(p)

    p = sub.add_parser("evaluate", help="score a reconstruction against a reference",
                       description="Write one CSV row: image,method,alpha,order,psnr,ssim,q_index.")
    p.add_argument("reference", help="ground-truth HDR (PFM)")
    p.add_argument("estimate", help="reconstruction (PFM)")
    _add_output(p, False, "CSV file (default: stdout)")
    p.add_argument("--alpha", type=float, default=None,
                   help="compare against alpha * reference / max(reference), as produced by simulate")
    p.add_argument("--method", default="", help="label for the method column")
    p.add_argument("--order", type=int, default=None, help="label for the order column")
    p.add_argument("--align-mean", type=_on_off, default=True, metavar="on|off",
                   help="shift the estimate to the reference mean first (default: on)")

    p = sub.add_parser("sweep", help="saturation sweep over a dataset, CSV report",
                       description="Every image x alpha x order x method: simulate, recover and score.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dataset", metavar="DIR", help="directory of PFM images")
    src.add_argument("--synthetic", type=int, metavar="COUNT", help="use COUNT generated Gaussian-mixture images")
    p.add_argument("--size", type=int, default=None, metavar="PX",
                   help="resize dataset images to PX x PX (default: keep; synthetic default 128)")
    p.add_argument("--seed", type=int, default=0, help="seed for --synthetic (default: 0)")
    _add_output(p, False, "CSV file (default: stdout)")
    _add_lambda(p)
    p.add_argument("--alphas", type=_float_list, default=list(DEFAULT_ALPHAS), metavar="A,B,...",
                   help="saturation factors (default: %s)" % ",".join(map(str, DEFAULT_ALPHAS)))
    p.add_argument("--orders", type=_int_list, default=[2], metavar="N,...", help="difference orders (default: 2)")
    p.add_argument("--paths", default="horizontal,vertical", metavar="P,...",
                   help="trajectories for the ahfd rows (default: horizontal,vertical)")
    _add_stripe_flags(p)
    p.add_argument("--align-mean", type=_on_off, default=True, metavar="on|off",
                   help="mean-align estimates before scoring (default: on)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (default: 1)")
    p.add_argument("--no-timing", action="store_true", help="leave runtime_ms blank so reports are byte-reproducible")
    p.add_argument("--debug", action="store_true", help="check wrap consistency before destriping; flag rows that fail")

    p = sub.add_parser("diagnose", help="print Itoh margins for N=1..4 per path",
                       description="Report max |diff^N| of alpha * x / max(x) along each snake path. "
                                   "Recovery is guaranteed where it stays below lambda/2.")
    p.add_argument("input", help="HDR input (PFM)")
    _add_lambda(p)
    p.add_argument("--alpha", type=float, default=1.0, help="saturation factor (default: 1.0)")
    return parser


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        FsPath(path).write_text(text, newline="")


def _load_modulo(path: str, lam: float) -> ModuloImage:
    data = load_pfm(path).data
    lo, hi = float(data.min()), float(data.max())
    if lo < 0 or hi > lam:
        raise InvalidInputError(f"{path}: samples span [{lo}, {hi}], outside [0, lambda={lam}]")
    # 32-bit storage can round a sample just below lambda up to lambda itself
    return ModuloImage(modulo_wrap(data, lam), lam=lam)


def _cmd_simulate(args) -> int:
    x = normalize_max(load_pfm(args.input))
    cfg = SensorConfig(lam=args.lam, alpha=args.alpha)
    out = simulate_ccd(x, cfg) if args.ccd else simulate_modulo(x, cfg)
    save_pfm(args.output, HdrImage(out.data))
    return EXIT_OK


def _cmd_recover(args) -> int:
    y = _load_modulo(args.input, args.lam)
    cfg = SensorConfig(
        lam=args.lam, order=args.order, gamma=args.gamma, path=args.path,
        destripe=args.destripe, threshold_keep=args.threshold_keep, reproject=args.reproject,
    )
    x_hat = recover_image(y, cfg, method=args.method, snap=args.stripe_snap)
    save_pfm(args.output, x_hat)
    if args.ppm:
        shifted = x_hat.data - min(0.0, float(x_hat.data.min()))
        FsPath(args.ppm).write_bytes(write_ppm8(reinhard_tonemap(shifted)))
    return EXIT_OK


def _cmd_destripe(args) -> int:
    img = load_pfm(args.input)
    gamma = args.lam / 2 if args.gamma is None else args.gamma
    planes = [remove_stripes(p, gamma, args.threshold_keep, snap=args.stripe_snap, lam=args.lam)[0] for p in img.data]
    save_pfm(args.output, HdrImage(np.stack(planes)))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    ref = load_pfm(args.reference)
    est = load_pfm(args.estimate)
    if args.alpha is not None:
        ref = HdrImage(args.alpha * normalize_max(ref).data)
    report = evaluate(ref, est, align=args.align_mean)
    row = {
        "image": FsPath(args.estimate).stem,
        "method": args.method,
        "alpha": "" if args.alpha is None else args.alpha,
        "order": "" if args.order is None else args.order,
        "psnr": report.psnr,
        "ssim": report.ssim,
        "q_index": report.q_index,
    }
    _write_text(args.output, rows_to_csv([row], EVAL_FIELDS))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.jobs < 1:
        raise _UsageError(f"--jobs must be >= 1, got {args.jobs}")
    if args.dataset is not None:
        dataset = load_dataset(args.dataset, size=args.size)
    else:
        if args.synthetic < 1:
            raise _UsageError(f"--synthetic must be >= 1, got {args.synthetic}")
        dataset = synthetic_dataset(args.synthetic, size=args.size or 128, seed=args.seed)
    sweep = SweepConfig(
        alphas=args.alphas,
        orders=args.orders,
        paths=[t.strip() for t in args.paths.split(",") if t.strip()],
        gamma=args.gamma,
        lam=args.lam,
        threshold_keep=args.threshold_keep,
        snap=args.stripe_snap,
        align_mean=args.align_mean,
        output=args.output,
    )
    rows = run_sweep(dataset, sweep, jobs=args.jobs, timing=not args.no_timing, debug=args.debug)
    _write_text(args.output, rows_to_csv(rows))
    for (method, alpha), value in sorted(summarize(rows).items()):
        print(f"{method:>13s}  alpha={alpha:<6g} mean psnr={value:.2f} dB", file=sys.stderr)
    failed = sum(r["status"] != "ok" for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} rows did not complete cleanly", file=sys.stderr)
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    x = normalize_max(load_pfm(args.input))
    if not args.alpha >= 1:
        raise InvalidInputError(f"alpha must be >= 1, got {args.alpha}")
    bound = args.lam / 2
    print(f"alpha={args.alpha:g} lambda={args.lam:g} bound={bound:g}")
    for path in Path:
        for order in DIAGNOSE_ORDERS:
            worst = 0.0
            for plane in x.data:
                layout = SnakeLayout.for_plane(plane, path)
                if layout.size <= order:
                    raise InvalidInputError(f"image too small for order {order}")
                worst = max(worst, itoh_margin(args.alpha * snake_flatten(plane, layout), order, args.lam)[0])
            verdict = "ok" if worst < bound else "violated"
            print(f"path={path.value:<10s} N={order}  max|diff|={worst:.6f}  margin={bound - worst:+.6f}  {verdict}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "recover": _cmd_recover,
    "destripe": _cmd_destripe,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "diagnose": _cmd_diagnose,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"modhdr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInputError, OSError) as exc:
        print(f"modhdr {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
