"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 input or format error, 3 when
``estimate-delta`` finds only a degenerate interval.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .baselines import DbscanConfig, KMeansConfig, dbscan, kmeans
from .clustering import CnniConfig, run_algorithm
from .core import SIMILARITY_VARIANTS, Dataset, SimilarityKind
from .datagen import PRESETS, generate, preset, sample
from .delta import build_mst, delta_bounds_supervised, estimate_delta_mst, integer_grid, sweep, valid_intervals
from .errors import FormatError, UsageError
from .evaluation import evaluate
from .image import compress, distinct_colors, load_bmp_pixels, write_bmp
from .io import load_csv, read_labels, write_cluster_dump, write_csv, write_labels

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cells(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cell lengths {text!r}") from None
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("cell lengths must be positive")
    return vals


def _add_input_options(p):
    p.add_argument("input", help="CSV dataset")
    p.add_argument("--delimiter", default=",")
    hdr = p.add_mutually_exclusive_group()
    hdr.add_argument("--header", dest="header", action="store_true", default=None)
    hdr.add_argument("--no-header", dest="header", action="store_false")
    p.add_argument("--label-column", type=int, help="column index holding class labels (negative counts from the end)")
    p.add_argument("--truth", help="labels file with one class per line")
    p.add_argument("--normalize", action="store_true", help="min-max scale each feature to [0, 1]")


def _add_cnni_options(p):
    p.add_argument("--similarity", choices=SIMILARITY_VARIANTS, default="reciprocal")
    p.add_argument("--many", type=float, default=0.8, help="fraction of free neighbors needed to open a cluster")
    p.add_argument("--exact-many", action="store_true", help="compare against the fraction without truncating to an integer")
    p.add_argument("--no-overwrite", action="store_true", help="new clusters do not take over labeled neighbors")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cnni", description="Clustering by near neighbor influence")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--preset", required=True, choices=PRESETS)
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--truth-out", help="truth labels file (default: <output>.truth.txt)")
    g.add_argument("--manifest")

    c = sub.add_parser("cluster", help="cluster a CSV dataset")
    _add_input_options(c)
    c.add_argument("--algo", required=True, choices=("cnni", "icnni", "ecnni", "kmeans", "dbscan"))
    c.add_argument("--delta", type=float)
    c.add_argument("--cell", type=_cells, help="grid cell length, one value or one per dimension")
    c.add_argument("--k", type=int)
    c.add_argument("--max-iters", type=int, default=300)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--eps", type=float)
    c.add_argument("--min-pts", type=int)
    _add_cnni_options(c)
    c.add_argument("-o", "--output", help="labels file (default: <input>.labels.txt)")
    c.add_argument("--dump", help="CSV of index, coordinates and label")
    c.add_argument("--report", help="append the report as a CSV row")
    c.add_argument("--manifest")

    e = sub.add_parser("estimate-delta", help="suggest a delta interval")
    _add_input_options(e)
    e.add_argument("--method", choices=("mst", "bound"), default="mst")
    e.add_argument("--sample", type=int, help="estimate from a uniform sample of this size")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--manifest")

    im = sub.add_parser("compress-image", help="recolor a 24-bit BMP by clustering its pixels")
    im.add_argument("input")
    im.add_argument("--delta", type=float, required=True)
    im.add_argument("--cell", type=_cells)
    _add_cnni_options(im)
    im.add_argument("-o", "--output", required=True)
    im.add_argument("--report")
    im.add_argument("--manifest")

    s = sub.add_parser("sweep", help="cluster over a range of delta values")
    _add_input_options(s)
    s.add_argument("--algo", required=True)
    s.add_argument("--from", dest="start", type=float, required=True)
    s.add_argument("--to", dest="stop", type=float, required=True)
    s.add_argument("--step", type=float, default=1.0)
    s.add_argument("--target-nc", type=int)
    s.add_argument("--cell", type=_cells)
    _add_cnni_options(s)
    s.add_argument("-o", "--output", help="CSV of delta, NC, ADM")
    s.add_argument("--manifest")

    r = sub.add_parser("rerun", help="repeat the run recorded in a manifest")
    r.add_argument("manifest")
    return parser


def _load(args) -> Dataset:
    ds = load_csv(args.input, args.delimiter, args.header, args.label_column, args.normalize)
    if args.truth:
        truth = read_labels(args.truth)
        if truth.shape[0] != ds.n:
            raise FormatError(f"{args.truth}: {truth.shape[0]} labels for {ds.n} points")
        ds = Dataset(ds.points, truth)
    return ds


def _cnni_config(args, delta) -> CnniConfig:
    return CnniConfig(
        delta,
        many_fraction=args.many,
        kind=SimilarityKind.parse(args.similarity, delta),
        overwrite=not args.no_overwrite,
        truncate_many=not args.exact_many,
    )


def _write_manifest(path, command, argv, params, inputs, outputs, elapsed):
    record = {
        "command": command,
        "version": __version__,
        "argv": list(argv),
        "cwd": os.getcwd(),
        "params": params,
        "inputs": inputs,
        "outputs": outputs,
        "elapsed_s": round(elapsed, 6),
    }
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


def _append_report(path, row: dict):
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
        if new:
            w.writeheader()
        w.writerow(row)


def cmd_generate(args, argv):
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be >= 1")
    t0 = time.perf_counter()
    spec = preset(args.preset, args.n, args.seed)
    ds = generate(spec)
    truth_out = args.truth_out or f"{args.output}.truth.txt"
    write_csv(args.output, ds)
    write_labels(truth_out, ds.truth_labels)
    elapsed = time.perf_counter() - t0
    nc = int(np.unique(ds.truth_labels[ds.truth_labels > 0]).size)
    print(f"wrote {ds.n} points ({nc} clusters, {int((ds.truth_labels == 0).sum())} noise) to {args.output}")
    params = {"preset": args.preset, "n": spec.n, "seed": args.seed, "num_clusters": spec.num_clusters,
              "cluster_semidiameter": spec.cluster_semidiameter, "noise_fraction": spec.noise_fraction}
    _write_manifest(args.manifest or f"{args.output}.manifest.json", "generate", argv, params,
                    [], [args.output, truth_out], elapsed)
    return EXIT_OK


def cmd_cluster(args, argv):
    algo = args.algo
    needs = {"cnni": ["delta"], "ecnni": ["delta"], "icnni": ["delta"],
             "kmeans": ["k"], "dbscan": ["eps", "min_pts"]}[algo]
    for name in needs:
        if getattr(args, name) is None:
            raise UsageError(f"--algo {algo} requires --{name.replace('_', '-')}")
    ds = _load(args)
    params = {"algo": algo, "normalize": args.normalize}
    if algo in ("cnni", "icnni", "ecnni"):
        config = _cnni_config(args, args.delta)
        params.update(delta=args.delta, cell=args.cell, similarity=args.similarity, many=args.many,
                      exact_many=args.exact_many, overwrite=not args.no_overwrite)
        t0 = time.perf_counter()
        labeling = run_algorithm(algo, ds, config, args.cell)
    elif algo == "kmeans":
        params.update(k=args.k, max_iters=args.max_iters, seed=args.seed)
        t0 = time.perf_counter()
        labeling = kmeans(ds, KMeansConfig(args.k, args.max_iters, args.seed)).labeling
    else:
        params.update(eps=args.eps, min_pts=args.min_pts)
        t0 = time.perf_counter()
        labeling = dbscan(ds, DbscanConfig(args.eps, args.min_pts))
    elapsed = time.perf_counter() - t0
    report = evaluate(ds, labeling, elapsed=elapsed)
    output = args.output or f"{args.input}.labels.txt"
    write_labels(output, labeling)
    outputs = [output]
    if args.dump:
        write_cluster_dump(args.dump, ds, labeling)
        outputs.append(args.dump)
    print(f"algorithm: {algo}")
    print(report.text())
    if args.report:
        _append_report(args.report, {"algo": algo, "input": args.input, "delta": args.delta, **report.as_row()})
        outputs.append(args.report)
    _write_manifest(args.manifest or f"{output}.manifest.json", "cluster", argv, params,
                    [args.input] + ([args.truth] if args.truth else []), outputs, elapsed)
    return EXIT_OK


def cmd_estimate_delta(args, argv):
    ds = _load(args)
    t0 = time.perf_counter()
    if args.sample:
        ds = sample(ds, args.sample, args.seed)
    params = {"method": args.method, "sample": args.sample, "seed": args.seed, "normalize": args.normalize}
    if args.method == "bound":
        interval = delta_bounds_supervised(ds)
        print(f"interval: {interval}")
    else:
        edges = build_mst(ds)
        if edges.size < 2:
            raise UsageError("the MST method needs at least three points")
        interval = estimate_delta_mst(edges)
        gaps = np.diff(edges)
        print(f"interval: {interval}")
        lo, hi = interval.rounded()
        print(f"integer deltas: {lo}..{hi}")
        print(f"mst edges: {edges.size} min={edges[0]:.4f} max={edges[-1]:.4f} "
              f"mean={edges.mean():.4f} max_gap={gaps.max():.4f}")
        print(f"clusters implied: {int((edges > interval.low).sum()) + 1}")
    elapsed = time.perf_counter() - t0
    params.update(low=interval.low, high=interval.high)
    if args.manifest:
        _write_manifest(args.manifest, "estimate-delta", argv, params, [args.input], [], elapsed)
    if interval.empty:
        print("notice: degenerate interval, no single delta separates the data this way")
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_compress_image(args, argv):
    pixels = load_bmp_pixels(args.input)
    config = _cnni_config(args, args.delta)
    t0 = time.perf_counter()
    result = compress(pixels, config, args.cell)
    elapsed = time.perf_counter() - t0
    write_bmp(args.output, result.output)
    colors = distinct_colors(result.output)
    print(f"CN: {result.labeling.num_clusters}")
    print(f"ADM: {result.adm:.4f}")
    print(f"colors: {colors}")
    print(f"noise pixels: {result.labeling.noise_count}")
    print(f"ST: {elapsed * 1000:.0f} ms")
    outputs = [args.output]
    if args.report:
        _append_report(args.report, {"input": args.input, "delta": args.delta, "cn": result.labeling.num_clusters,
                                     "adm": f"{result.adm:.4f}", "colors": colors,
                                     "noise": result.labeling.noise_count, "elapsed_ms": f"{elapsed * 1000:.0f}"})
        outputs.append(args.report)
    params = {"delta": args.delta, "cell": args.cell, "similarity": args.similarity, "many": args.many,
              "exact_many": args.exact_many, "overwrite": not args.no_overwrite}
    _write_manifest(args.manifest or f"{args.output}.manifest.json", "compress-image", argv, params,
                    [args.input], outputs, elapsed)
    return EXIT_OK


def cmd_sweep(args, argv):
    if args.algo not in ("cnni", "icnni", "ecnni"):
        raise UsageError(f"delta sweeps apply to cnni, icnni and ecnni, not {args.algo!r}")
    deltas = integer_grid(args.start, args.stop, args.step)
    ds = _load(args)
    t0 = time.perf_counter()
    labelings = sweep(ds, args.algo, deltas, _cnni_config(args, deltas[0]), args.cell)
    elapsed = time.perf_counter() - t0
    rows = [evaluate(ds, lab) for lab in labelings]
    out = sys.stdout if args.output is None else open(args.output, "w", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["delta", "nc", "adm", "noise"])
        for d, r in zip(deltas, rows):
            w.writerow([f"{d:g}", r.nc, f"{r.adm:.4f}", r.noise_count])
    finally:
        if out is not sys.stdout:
            out.close()
    params = {"algo": args.algo, "from": args.start, "to": args.stop, "step": args.step,
              "target_nc": args.target_nc, "normalize": args.normalize}
    if args.target_nc is not None:
        runs = valid_intervals(deltas, [r.nc for r in rows], args.target_nc)
        text = ", ".join(f"[{a:g}, {b:g}]" for a, b in runs) or "none"
        print(f"valid intervals for NC={args.target_nc}: {text}", file=sys.stderr if args.output is None else sys.stdout)
        params["valid_intervals"] = runs
    if args.manifest or args.output:
        _write_manifest(args.manifest or f"{args.output}.manifest.json", "sweep", argv, params,
                        [args.input], [args.output] if args.output else [], elapsed)
    return EXIT_OK


def cmd_rerun(args, argv):
    try:
        record = json.loads(Path(args.manifest).read_text())
        replay = record["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise FormatError(f"{args.manifest}: not a run manifest ({exc})") from None
    if replay and replay[0] == "rerun":
        raise UsageError("a manifest cannot replay another rerun")
    # relative paths in the recorded argv refer to the original directory
    here = os.getcwd()
    os.chdir(record.get("cwd", here))
    try:
        return main(replay)
    finally:
        os.chdir(here)


COMMANDS = {
    "generate": cmd_generate,
    "cluster": cmd_cluster,
    "estimate-delta": cmd_estimate_delta,
    "compress-image": cmd_compress_image,
    "sweep": cmd_sweep,
    "rerun": cmd_rerun,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"cnni: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"cnni: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
