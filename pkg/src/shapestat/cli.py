"""``shapestat`` command line interface.

Exit codes: 0 success, 2 parse or usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import drivers
from .calibrate import calibrate
from .errors import InputError, NumericalError
from .io import LandmarkFile, parse_landmarks, resolve_path, write_landmarks
from .plot import plot_shapes
from .rng import stream
from .simulate import SimSpec, default_template, simulate_kads

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _add_analysis_flags(p: argparse.ArgumentParser, method_choices=drivers.METHODS, default_method="both"):
    p.add_argument("--method", choices=method_choices, default=default_method)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--step", type=float, default=1.0, help="Karcher step size")
    p.add_argument("--tol", type=float, default=1e-9, help="Karcher gradient-norm tolerance")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--fd-step", type=float, default=1e-4, help="finite-difference step for the Hessian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")


def _add_format(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("native", "csv"), default="native")


def _add_template(p: argparse.ArgumentParser):
    p.add_argument("--template", help="landmark file; its first object is the template")
    p.add_argument("--k", type=int, default=5, help="landmarks in the built-in template (if no --template)")
    p.add_argument("--noise-sd", type=float, default=0.02)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapestat", description="Nonparametric two-sample inference on planar shape space."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mean-test", help="test equality of mean shapes")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _add_format(p)
    _add_analysis_flags(p)

    p = sub.add_parser("variation-test", help="test equality of variations")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _add_format(p)
    _add_analysis_flags(p)
    p.add_argument("--bootstrap", type=int, default=0, metavar="B",
                   help="replace the normal p-value by a bootstrap-t p-value with B resamples")

    p = sub.add_parser("summary", help="sample means and variations")
    p.add_argument("files", nargs="+")
    _add_format(p)
    _add_analysis_flags(p)

    p = sub.add_parser("plot", help="SVG of aligned preshapes and the mean")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=("extrinsic", "intrinsic"), default="extrinsic")
    _add_format(p)

    p = sub.add_parser("calibrate", help="Monte Carlo size check of the mean tests")
    _add_template(p)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--replicates", type=int, default=500)
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)
    _add_analysis_flags(p)

    p = sub.add_parser("simulate", help="write a simulated sample as a landmark file")
    _add_template(p)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default=None)
    _add_format(p)
    return parser


def _load(path, fmt) -> LandmarkFile:
    return parse_landmarks(resolve_path(path), fmt)


def _config(args) -> drivers.AnalysisConfig:
    return drivers.AnalysisConfig(
        alpha=args.alpha,
        method=args.method,
        step=args.step,
        tol=args.tol,
        max_iter=args.max_iter,
        fd_step=args.fd_step,
        seed=args.seed,
        replicates=getattr(args, "replicates", 500),
        bootstrap=getattr(args, "bootstrap", 0),
    )


def _template(args):
    if args.template:
        return _load(args.template, args.format).kads()[0]
    return default_template(args.k)


def _emit(doc: dict, path) -> None:
    text = drivers.dumps(doc)
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run(args) -> dict | None:
    cmd = args.command
    if cmd in ("mean-test", "variation-test"):
        a = _load(args.file_a, args.format)
        b = _load(args.file_b, args.format)
        run = drivers.run_mean_test if cmd == "mean-test" else drivers.run_variation_test
        return run(a, b, _config(args))
    if cmd == "summary":
        return drivers.run_summary([_load(f, args.format) for f in args.files], _config(args))
    if cmd == "plot":
        lf = _load(args.file, args.format)
        plot_shapes(lf.shapes(), args.method, args.out, title=lf.label)
        return None
    if cmd == "calibrate":
        config = _config(args)
        spec = SimSpec(_template(args), args.noise_sd, args.n)
        report = calibrate(
            spec, args.m, config.replicates, config.seed, config.alpha,
            config.methods, config.karcher, workers=args.workers,
        )
        doc = drivers.document("calibrate", config, [], [], [])
        doc["config"].update({"noise_sd": args.noise_sd, "n": args.n, "m": args.m, "workers": args.workers})
        del doc["samples"], doc["tests"]
        doc["calibration"] = report.to_dict()
        return doc
    if cmd == "simulate":
        spec = SimSpec(_template(args), args.noise_sd, args.n)
        kads = simulate_kads(spec, stream(args.seed))
        write_landmarks(LandmarkFile(kads, args.label or Path(args.out).stem), args.out, args.format)
        return None
    raise InputError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out_path = getattr(args, "json", None)
    try:
        doc = _run(args)
    except NumericalError as exc:
        _emit(drivers.error_document(args.command, exc), out_path)
        return EXIT_NUMERICAL
    except (InputError, ValueError, OSError) as exc:
        _emit(drivers.error_document(args.command, exc), out_path)
        return EXIT_USAGE
    if doc is not None:
        _emit(doc, out_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
