"""Command-line driver.

Subcommands build states, run the measurement pipeline and evaluate the
topological diagnostics over squeezing sweeps.  Exit codes: 0 success,
2 validation error, 3 numerical failure, 4 threshold violation.
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import correlations as corr
from . import engine, lattice, spectra, topo
from .errors import GaussTopoError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_THRESHOLD = 4

SWEEP_COLUMNS = ("log_s", "tee_kp", "tee_lw", "tln", "tmi", "tmi_lower",
                 "tee_upper", "kappa")


def _worker_count():
    value = os.environ.get("GAUSSTOPO_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise ValidationError("GAUSSTOPO_THREADS must be an integer")
    return min(8, os.cpu_count() or 1)


def _timestamp_header():
    return "# generated %s" % datetime.now(timezone.utc).isoformat()


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _add_lattice_flags(parser, boundary_default="torus"):
    parser.add_argument("--rows", type=int, required=True)
    parser.add_argument("--cols", type=int, required=True)
    parser.add_argument("--boundary", choices=lattice.BOUNDARIES,
                        default=boundary_default)
    parser.add_argument("--log-s", type=float, default=1.0)


def _spec(args, boundary=None):
    return lattice.LatticeSpec(args.rows, args.cols,
                               boundary or args.boundary, args.log_s)


def _surface_cov(spec):
    graph = lattice.surface_code_graph_analytic(spec)
    return engine.covariance_from_graph(graph)


def _kp(spec, args):
    return topo.kp_regions(spec, radius=getattr(args, "radius", None))


def cmd_build(args):
    spec = _spec(args)
    if args.kind == "cluster":
        graph = lattice.cluster_graph(spec)
        index_map = None
    elif args.kind == "surface-analytic":
        graph = lattice.surface_code_graph_analytic(spec)
        index_map = None
    else:  # surface-pipeline
        if spec.boundary == "torus" and not spec.even_parity:
            raise ValidationError("surface-pipeline on a torus needs even rows and cols")
        graph, index_map = lattice.map_cluster_to_surface(spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(graph.to_json())
    print("modes: %d" % graph.n_modes)
    print("state: %s" % args.out)
    if index_map is not None:
        map_path = args.out + ".map.json"
        with open(map_path, "w", encoding="utf-8") as fh:
            json.dump({"kept": index_map}, fh)
        print("index map: %s" % map_path)
    return EXIT_OK


def cmd_map(args):
    args.kind = "surface-pipeline"
    return cmd_build(args)


def cmd_tee(args):
    spec = _spec(args)
    cov = _surface_cov(spec)
    if args.method == "kp":
        regions = _kp(spec, args)
        value = topo.tee_kp(cov, regions)
    else:
        regions = topo.lw_regions(spec, inner=args.inner, width=args.width)
        value = topo.tee_lw(cov, regions)
    print(json.dumps({"log_s": spec.log_s, "method": args.method,
                      "tee": value, "geometry": regions.geometry}))
    return EXIT_OK


def cmd_tln(args):
    spec = _spec(args)
    cov = _surface_cov(spec)
    regions = _kp(spec, args)
    value = topo.tln_kp(cov, regions)
    print(json.dumps({"log_s": spec.log_s, "tln": value,
                      "geometry": regions.geometry}))
    return EXIT_OK


def cmd_tmi(args):
    spec = _spec(args)
    cov_pure = _surface_cov(spec)
    regions = _kp(spec, args)
    cov = engine.thermal_scale(cov_pure, args.kappa) if args.kappa > 1 else cov_pure
    record = {"log_s": spec.log_s, "kappa": args.kappa,
              "tmi": topo.tmi(cov, regions), "geometry": regions.geometry}
    if args.lower:
        record["tmi_lower"] = topo.tmi_lower_bound(cov_pure, regions)
    print(json.dumps(record))
    return EXIT_OK


def _sweep_point(spec_base, log_s, kappa, args):
    spec = lattice.LatticeSpec(spec_base.rows, spec_base.cols,
                               spec_base.boundary, log_s)
    cov_pure = _surface_cov(spec)
    regions = _kp(spec, args)
    report = topo.TopoReport(log_s=log_s, kappa=kappa,
                             geometry=dict(regions.geometry))
    metrics = set(args.metrics.split(","))
    if "tee_kp" in metrics:
        report.tee_kp = topo.tee_kp(cov_pure, regions)
    if "tee_lw" in metrics:
        lw = topo.lw_regions(spec, inner=args.inner, width=args.width)
        report.tee_lw = topo.tee_lw(cov_pure, lw)
        report.geometry.update({"inner": args.inner, "width": args.width})
    if "tln" in metrics:
        report.tln_kp = topo.tln_kp(cov_pure, regions)
    if "tmi" in metrics:
        cov = engine.thermal_scale(cov_pure, kappa) if kappa > 1 else cov_pure
        report.tmi = topo.tmi(cov, regions)
    if "tmi_lower" in metrics:
        report.tmi_lower = topo.tmi_lower_bound(cov_pure, regions)
    if "tee_upper" in metrics:
        report.tee_upper = topo.tee_upper_bound(spec.s)
    return report


def _existing_points(path):
    done = set()
    if path and path != "-" and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for row in csv.reader(line for line in fh if not line.startswith("#")):
                if row and row[0] != "log_s":
                    done.add((row[0], row[-1]))
    return done


def cmd_sweep(args):
    if args.steps < 1:
        raise ValidationError("steps must be >= 1")
    if args.log_s_min > args.log_s_max:
        raise ValidationError("log-s-min must not exceed log-s-max")
    spec_base = lattice.LatticeSpec(args.rows, args.cols, args.boundary,
                                    args.log_s_min)
    if args.steps == 1:
        grid = [args.log_s_min]
    else:
        grid = list(np.linspace(args.log_s_min, args.log_s_max, args.steps))
    kappas = [float(k) for k in args.kappas.split(",")]
    points = [(log_s, kappa) for log_s in grid for kappa in kappas]
    done = _existing_points(args.out)
    todo = [(ls, k) for ls, k in points
            if ("%.12g" % ls, "%.12g" % k) not in done]

    failures = []

    def run(point):
        log_s, kappa = point
        try:
            return point, _sweep_point(spec_base, log_s, kappa, args)
        except GaussTopoError as exc:
            failures.append((point, str(exc)))
            return point, None

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = dict(pool.map(run, todo))

    mode = "a" if done else "w"
    stream = sys.stdout if args.out in (None, "-") else open(
        args.out, mode, encoding="utf-8", newline="")
    try:
        writer = csv.writer(stream)
        if not done:
            stream.write(_timestamp_header() + "\n")
            writer.writerow(SWEEP_COLUMNS)
        json_stream = None
        if args.json_out:
            json_stream = open(args.json_out, "a" if done else "w", encoding="utf-8")
        for point in points:
            if point not in results:
                continue
            report = results[point]
            if report is None:
                continue
            writer.writerow(["%.12g" % point[0]]
                            + [("" if v is None else "%.12g" % v)
                               for v in (report.tee_kp, report.tee_lw,
                                         report.tln_kp, report.tmi,
                                         report.tmi_lower, report.tee_upper)]
                            + ["%.12g" % point[1]])
            if json_stream:
                json_stream.write(json.dumps(report.to_dict()) + "\n")
        if json_stream:
            json_stream.close()
    finally:
        if stream is not sys.stdout:
            stream.close()
    for point, message in failures:
        print("point %s failed: %s" % (point, message), file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(args):
    gap_val = spectra.gap(args.n, args.m, np.exp(args.log_s))
    asym = spectra.gap_asymptotic(min(args.n, args.m), np.exp(args.log_s))
    ratio = gap_val / asym if asym else float("nan")
    stream, close = _open_out(args.out)
    try:
        stream.write(_timestamp_header() + "\n")
        writer = csv.writer(stream)
        writer.writerow(["n", "m", "log_s", "gap", "gap_asymptotic", "ratio"])
        writer.writerow([args.n, args.m, "%.12g" % args.log_s, "%.12g" % gap_val,
                         "%.12g" % asym, "%.12g" % ratio])
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_correlations(args):
    spec = _spec(args)
    cov = _surface_cov(spec)
    bound = corr.dms_bound(spec.s)
    seps, vals = corr.axis_samples(cov, spec, max_separation=args.max_separation,
                                   axis=args.axis)
    stream, close = _open_out(args.out)
    try:
        stream.write(_timestamp_header() + "\n")
        writer = csv.writer(stream)
        writer.writerow(["separation", "correlation", "bound_value"])
        for d, v in zip(seps, vals):
            writer.writerow(["%.12g" % d, "%.12g" % v, "%.12g" % bound.envelope(d)])
    finally:
        if close:
            stream.close()
    if args.fit:
        a, xi_a, b, xi_b, residual = corr.fit_correlation_length(seps, vals)
        print(json.dumps({"a": a, "xi_a": xi_a, "b": b, "xi_b": xi_b,
                          "residual": residual, "axis": args.axis,
                          "log_s": spec.log_s}))
    return EXIT_OK


def cmd_bounds(args):
    spec = _spec(args)
    cov = _surface_cov(spec)
    report = corr.verify_bound(cov, spec)
    print(json.dumps(report))
    return EXIT_OK if report["n_violations"] == 0 else EXIT_THRESHOLD


def cmd_upper_bound(args):
    value = topo.tee_upper_bound(np.exp(args.log_s))
    print(json.dumps({"log_s": args.log_s, "tee_upper": value}))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gausstopo",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="serialize a cluster or surface-code state")
    _add_lattice_flags(p)
    p.add_argument("--kind", choices=("cluster", "surface-analytic",
                                      "surface-pipeline"), default="cluster")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("map", help="run the measurement pipeline on a cluster")
    _add_lattice_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("tee", help="topological entanglement entropy")
    _add_lattice_flags(p)
    p.add_argument("--method", choices=("kp", "lw"), default="kp")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--inner", type=float, default=6)
    p.add_argument("--width", type=float, default=3)
    p.set_defaults(func=cmd_tee)

    p = sub.add_parser("tln", help="topological log-negativity")
    _add_lattice_flags(p)
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(func=cmd_tln)

    p = sub.add_parser("tmi", help="topological mutual information")
    _add_lattice_flags(p)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--lower", action="store_true")
    p.set_defaults(func=cmd_tmi)

    p = sub.add_parser("sweep", help="evaluate diagnostics over a squeezing sweep")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--boundary", choices=lattice.BOUNDARIES, default="torus")
    p.add_argument("--log-s-min", type=float, required=True)
    p.add_argument("--log-s-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--kappas", default="1")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--inner", type=float, default=6)
    p.add_argument("--width", type=float, default=3)
    p.add_argument("--metrics", default="tee_kp,tln,tmi,tmi_lower,tee_upper")
    p.add_argument("--out", default="-")
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="normal-mode gap of the torus Hamiltonian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--log-s", type=float, default=0.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("correlations", help="axis correlations and decay fit")
    _add_lattice_flags(p, boundary_default="planar")
    p.add_argument("--axis", choices=("row", "col", "diagonal", "antidiagonal"),
                   default="diagonal")
    p.add_argument("--max-separation", type=int, default=None)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("bounds", help="verify the analytic decay bound")
    _add_lattice_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("upper-bound", help="closed-form TEE upper bound")
    p.add_argument("--log-s", type=float, required=True)
    p.set_defaults(func=cmd_upper_bound)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except (GaussTopoError, np.linalg.LinAlgError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
