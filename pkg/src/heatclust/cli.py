"""``heatclust`` command line: ``gen``, ``cluster`` and ``plot``.

Exit codes: 0 success, 1 bad input or I/O error, 2 warnings promoted by
``--strict``, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import io, plot
from ._accel import BACKEND
from .errors import HeatclustError, MalformedInput, NumericalError
from .geometry import GENERATORS, PointCloud
from .kernel import canonical_family
from .spectral import ClusterConfig, cluster

log = logging.getLogger("heatclust")

EXIT_OK, EXIT_INPUT, EXIT_STRICT, EXIT_NUMERIC = 0, 1, 2, 3

GEN_DEFAULTS = {
    "three-circles": {"n": 500, "sigma": 0.05},
    "blobs": {"n": 300, "sigma": 0.5},
    "two-circles": {"n": 300, "sigma": 0.02},
}


def _bandwidth(value: str):
    if value in ("auto", "max"):
        return value
    try:
        r = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'auto', 'max' or a positive number, got {value!r}") from None
    if not r > 0:
        raise argparse.ArgumentTypeError("fixed bandwidth must be positive")
    return r


def _kernel(value: str):
    try:
        return canonical_family(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heatclust", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic labeled point cloud")
    g.add_argument("family", choices=sorted(GENERATORS))
    g.add_argument("--n", type=int)
    g.add_argument("--sigma", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="points CSV")
    g.add_argument("--labels-out", help="ground-truth labels CSV")

    c = sub.add_parser("cluster", help="cluster a point CSV")
    c.add_argument("--input", required=True)
    c.add_argument("--header", action="store_true", help="skip the first line of the input")
    c.add_argument("--kernel", type=_kernel, default="row-normalized-ball",
                   help="row-ball (row-normalized-ball) or lebesgue-ball")
    c.add_argument("--bandwidth", type=_bandwidth, default="auto",
                   help="'auto' (elbow rule), 'max', or a fixed radius")
    c.add_argument("--grid", type=int, default=30)
    c.add_argument("--subsamples", type=int, default=10)
    c.add_argument("--fraction", type=float, default=0.8)
    c.add_argument("--t", type=float, default=1.0)
    c.add_argument("--tol", type=float, default=1e-6)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--out-labels")
    c.add_argument("--out-report")
    c.add_argument("--out-curve")
    c.add_argument("--out-phi", help="eliminated eigenmap coordinates per point")
    c.add_argument("--strict", action="store_true", help="exit 2 if any warning was raised")

    pl = sub.add_parser("plot", help="render an SVG figure")
    pl.add_argument("kind", choices=["curve", "phi", "clusters"])
    pl.add_argument("--input", required=True,
                    help="curve CSV, phi CSV, or points CSV respectively")
    pl.add_argument("--labels", help="labels CSV (clusters)")
    pl.add_argument("--report", help="report JSON, used for r_hat (curve)")
    pl.add_argument("--r-hat", type=float, help="bandwidth to mark (curve)")
    pl.add_argument("--header", action="store_true")
    pl.add_argument("--azimuth", type=float, default=-60.0)
    pl.add_argument("--elevation", type=float, default=30.0)
    pl.add_argument("--out", required=True)
    return p


def cmd_generate(args) -> int:
    kw = dict(GEN_DEFAULTS[args.family])
    if args.n is not None:
        kw["n"] = args.n
    if args.sigma is not None:
        kw["sigma"] = args.sigma
    data = GENERATORS[args.family](seed=args.seed, **kw)
    io.write_points(args.out, data.cloud.coords)
    if args.labels_out:
        io.write_labels(args.labels_out, data.truth_labels)
    return EXIT_OK


def build_report(result, config: ClusterConfig, n: int) -> dict:
    choice = result.choice
    return {
        "n": n,
        "beta0": result.beta0,
        "r_hat": result.r_hat,
        "cluster_sizes": result.cluster_sizes,
        "eigenvalues_near_one": [float(v) for v in result.eigenvalues],
        "elbow_warning": bool(choice is not None and choice.warnings),
        "warnings": list(result.warnings),
        "selection": {
            "mode": choice.mode if choice else None,
            "grid_index": choice.grid_index if choice else None,
        },
        "config": {
            "kernel": config.kernel,
            "bandwidth": config.bandwidth,
            "grid": config.grid,
            "subsamples": config.subsamples,
            "fraction": config.fraction,
            "t": config.t,
            "tol": config.tol,
            "seed": config.seed,
            "threads": config.threads,
        },
        "backend": BACKEND,
        "timings": {k: round(v, 6) for k, v in result.timings.items()},
    }


def cmd_cluster(args) -> int:
    t0 = time.perf_counter()
    coords = io.read_points(args.input, header=args.header)
    config = ClusterConfig(kernel=args.kernel, bandwidth=args.bandwidth, grid=args.grid,
                           subsamples=args.subsamples, fraction=args.fraction, t=args.t,
                           tol=args.tol, seed=args.seed, threads=args.threads)
    result = cluster(PointCloud(coords), config)
    result.timings["total"] = time.perf_counter() - t0

    if args.out_labels:
        io.write_labels(args.out_labels, result.labels)
    if args.out_curve and result.curve is not None:
        io.write_curve(args.out_curve, result.curve.radii, result.curve.values)
    if args.out_phi:
        io.write_phi(args.out_phi, result.cluster_map.Phi, result.labels)
    report = build_report(result, config, coords.shape[0])
    if args.out_report:
        io.write_json(args.out_report, report)
    else:
        print(json.dumps(report, indent=2))
    for w in result.warnings:
        log.warning(w)
    if args.strict and result.warnings:
        return EXIT_STRICT
    return EXIT_OK


def cmd_plot(args) -> int:
    view = {"azimuth": args.azimuth, "elevation": args.elevation}
    if args.kind == "curve":
        radii, values = io.read_curve(args.input)
        r_hat = args.r_hat
        if r_hat is None and args.report:
            with open(args.report, encoding="utf-8") as fh:
                r_hat = json.load(fh).get("r_hat")
        svg = plot.curve_svg(radii, values, r_hat)
    elif args.kind == "phi":
        pts, labels = io.read_phi(args.input)
        svg = plot.phi_svg(pts, labels, **view)
    else:
        if not args.labels:
            raise MalformedInput("plot clusters needs --labels")
        coords = io.read_points(args.input, header=args.header)
        labels = io.read_labels(args.labels)
        if labels.size != coords.shape[0]:
            raise MalformedInput(
                f"{labels.size} labels for {coords.shape[0]} points")
        svg = plot.clusters_svg(coords, labels, **view)
    plot.save(args.out, svg)
    return EXIT_OK


COMMANDS = {"gen": cmd_generate, "cluster": cmd_cluster, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"heatclust: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (HeatclustError, ValueError, OSError) as exc:
        print(f"heatclust: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
