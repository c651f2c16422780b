"""Command-line interface.

Subcommands: simulate (write a dataset file), analyze (run analyses on a
dataset file), report (execute a RunConfig JSON), catalog (run the five
reference states).  Angles must carry an explicit unit prefix, deg: or
rad:, so bare numbers are rejected before they can become unit bugs.

Exit codes: 0 success, 1 usage error, 2 analysis error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .datafile import import_csv, read_dataset, write_dataset
from .errors import AnalysisError, DataFormatError
from .report import (ANALYSES, CATALOG_SEEDS, Report, RunConfig,
                     analyze_dataset, emit, noise_label, run, run_catalog,
                     thread_cap)
from .sampler import sample_quadratures
from .states import PhaseNoise, SqueezingParams, StateModel

__all__ = ["main", "parse_angle", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANALYSIS = 2
EXIT_IO = 3


def parse_angle(text):
    """Angle with a mandatory unit prefix: 'deg:12.6' or 'rad:0.22'."""
    if not isinstance(text, str):
        raise ValueError("angle must be a string")
    lowered = text.strip().lower()
    for prefix, scale in (("deg:", math.pi / 180.0), ("rad:", 1.0)):
        if lowered.startswith(prefix):
            try:
                value = float(lowered[len(prefix):])
            except ValueError:
                raise ValueError(f"bad angle value in {text!r}")
            if not math.isfinite(value):
                raise ValueError(f"angle must be finite, got {text!r}")
            return value * scale
    raise ValueError(
        f"angle {text!r} needs a deg: or rad: prefix (bare numbers are rejected)"
    )


class _UsageError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _angle(text):
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _model_from_args(args):
    params = SqueezingParams(args.vx, args.vp)
    if args.noise == "delta":
        noise = PhaseNoise.delta()
    elif args.noise == "uniform":
        noise = PhaseNoise.uniform()
    else:
        if args.sigma is None:
            raise ValueError("gaussian noise requires --sigma")
        noise = PhaseNoise.gaussian(args.sigma, "rad")
    return StateModel(params, noise)


def build_parser():
    parser = _Parser(
        prog="pdsq",
        description=(
            "Simulate phase-diffused squeezed vacuum quadrature data and "
            "test nonclassicality criteria."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a quadrature dataset file")
    sim.add_argument("--vx", type=float, default=0.36,
                     help="squeezed quadrature variance (default 0.36)")
    sim.add_argument("--vp", type=float, default=5.28,
                     help="anti-squeezed quadrature variance (default 5.28)")
    sim.add_argument("--noise", choices=("delta", "gaussian", "uniform"),
                     default="delta", help="phase noise law")
    sim.add_argument("--sigma", type=_angle, default=None,
                     help="gaussian noise width, e.g. deg:12.6")
    sim.add_argument("--theta", type=_angle, default=0.0,
                     help="analysis quadrature angle, e.g. rad:0 (default 0)")
    sim.add_argument("--n", type=int, default=10_000_000,
                     help="sample count (default 1e7)")
    sim.add_argument("--seed", type=int, default=0, help="RNG seed")
    sim.add_argument("--out", required=True, help="output dataset path")

    ana = sub.add_parser("analyze", help="run analyses on a dataset file")
    ana.add_argument("data", help="dataset container or CSV (one float/line)")
    ana.add_argument("--cf", action="store_true",
                     help="characteristic-function scan")
    ana.add_argument("--moments", action="store_true",
                     help="higher-order squeezing degrees")
    ana.add_argument("--matrices", action="store_true",
                     help="moment-matrix minimum eigenvalues")
    ana.add_argument("--witness", action="store_true",
                     help="unboundedness certificate (needs model metadata)")
    ana.add_argument("--theta", type=_angle, default=None,
                     help="override CSV import angle, e.g. deg:0")
    ana.add_argument("--grid-max", type=float, default=4.0)
    ana.add_argument("--grid-points", type=int, default=200)
    ana.add_argument("--max-order", type=int, default=10,
                     help="highest moment order (default 10)")
    ana.add_argument("--dims", default="2-10",
                     help="matrix dimensions, e.g. 2-10 or 2,4,6")
    ana.add_argument("--replicates", type=int, default=100,
                     help="bootstrap replicates (default 100)")
    ana.add_argument("--threshold", type=float, default=10.0,
                     help="CF significance threshold (default 10)")
    ana.add_argument("--seed", type=int, default=0,
                     help="bootstrap resampling seed")
    ana.add_argument("--json", dest="json_out", default=None,
                     help="write the result report to this path")

    rep = sub.add_parser("report", help="execute a RunConfig JSON document")
    rep.add_argument("config", help="path to a RunConfig JSON file")
    rep.add_argument("--out-dir", default=".", help="output directory")
    rep.add_argument("--format", choices=("json", "csv"), default="json")

    cat = sub.add_parser("catalog",
                         help="run the five reference states end to end")
    cat.add_argument("--n", type=int, default=10_000_000,
                     help="samples per state (default 1e7)")
    cat.add_argument("--seeds", default=",".join(str(s) for s in CATALOG_SEEDS),
                     help="five comma-separated seeds")
    cat.add_argument("--replicates", type=int, default=100)
    cat.add_argument("--threshold", type=float, default=10.0)
    cat.add_argument("--out-dir", default=".", help="output directory")
    cat.add_argument("--format", choices=("json", "csv", "both"),
                     default="both")
    return parser


def _parse_dims(text):
    text = text.strip()
    if "-" in text and "," not in text:
        lo, _, hi = text.partition("-")
        dims = tuple(range(int(lo), int(hi) + 1))
    else:
        dims = tuple(int(part) for part in text.split(",") if part.strip())
    if not dims:
        raise ValueError(f"no matrix dimensions in {text!r}")
    return dims


def _cmd_simulate(args):
    model = _model_from_args(args)
    data = sample_quadratures(model, args.theta, args.n, args.seed)
    written = write_dataset(data, args.out)
    print(f"wrote {args.n} samples ({written} bytes) to {args.out}")
    return EXIT_OK


def _load_dataset(path, theta):
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == b"PDSQDAT1":
        data = read_dataset(path)
        if theta is not None and theta != data.theta:
            raise ValueError(
                "dataset file records its own angle; --theta only applies "
                "to CSV imports"
            )
        return data
    return import_csv(path, theta=0.0 if theta is None else theta)


def _cmd_analyze(args):
    selected = frozenset(
        name for name in ANALYSES if getattr(args, name.replace("-", "_"))
    )
    if not selected:
        raise ValueError(
            "select at least one of --cf --moments --matrices --witness"
        )
    data = _load_dataset(args.data, args.theta)
    model = None
    if data.meta.model is not None:
        model = StateModel.from_dict(data.meta.model)
    results, timings = analyze_dataset(
        data, selected, model=model, grid_max=args.grid_max,
        grid_points=args.grid_points, max_order=args.max_order,
        dims=_parse_dims(args.dims), replicates=args.replicates,
        threshold=args.threshold, seed=args.seed, workers=thread_cap(),
    )
    config = {
        "data": args.data,
        "analyses": sorted(selected),
        "seed": args.seed,
        "model": data.meta.model,
    }
    report = Report(config=config, results=results, timings=timings)
    text = report.to_json()
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote report to {args.json_out}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_report(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        config = RunConfig.from_json(text)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"{args.config}: bad run config: {exc}") from exc
    report = run(config)
    for path in emit(report, args.format, args.out_dir):
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_catalog(args):
    seeds = tuple(int(s) for s in args.seeds.split(","))
    report = run_catalog(n=args.n, seeds=seeds, replicates=args.replicates,
                         threshold=args.threshold, workers=thread_cap())
    formats = ("json", "csv") if args.format == "both" else (args.format,)
    for fmt in formats:
        for path in emit(report, fmt, args.out_dir):
            print(f"wrote {path}")
    for label, res in report.results["states"].items():
        sig = res["cf"]["significance"]
        mark = "detected" if sig["detected"] else "not detected"
        print(f"sigma={label}: V={res['summary']['sample_variance']:.4f} "
              f"cf {mark} (s*={sig['s_star']:.1f} at beta={sig['beta_star']:.2f})")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_USAGE
    handlers = {
        "simulate": _cmd_simulate,
        "analyze": _cmd_analyze,
        "report": _cmd_report,
        "catalog": _cmd_catalog,
    }
    try:
        return handlers[args.command](args)
    except (AnalysisError, ValueError) as exc:
        print(f"pdsq: analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except DataFormatError as exc:
        print(f"pdsq: data format error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"pdsq: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
