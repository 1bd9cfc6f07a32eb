"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import statistics
import sys
import time
import timeit
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FCCError, MalformedFile, MathError, SizeMismatch
from .plan_cache import PlanCache
from .spectral import DEFAULT_PARAMS, SkewParams, common_zeros, skew_nodes, write_nodes_csv
from .transform import build_plan, dense_transform, fast_apply, inverse_apply, naive_apply
from .verify import run_suite
from .voxel_io import (export_geometry, export_spectrum, grid_from_signal, load_grid,
                       load_spectrum, save_grid, synthetic_sword, z_transform)

log = logging.getLogger("fccdct")

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_IO = 0, 1, 2, 3
CACHE_ENV = "FCCDCT_CACHE_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _params(text):
    try:
        return SkewParams.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _sizes(text):
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _cache(args):
    if getattr(args, "no_cache", False):
        return None
    d = args.cache_dir or os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "fccdct"
    return PlanCache(d)


def _timed_plan(n, params, cache, threads=None):
    t0 = time.perf_counter()
    plan = build_plan(n, params, cache)
    dt = time.perf_counter() - t0
    if cache is not None:
        st = cache.stats()
        log.info("plan cache: %d hit(s), %d miss(es), %d corrupt", st["hits"], st["misses"],
                 st["corrupt"])
    return plan, dt


def cmd_zeros(args):
    grid = common_zeros(args.n) if args.params == DEFAULT_PARAMS else skew_nodes(args.n, args.params)
    out = args.out or f"zeros_n{args.n}.csv"
    count = write_nodes_csv(grid, out)
    print(f"{count} nodes written to {out}")


def cmd_transform(args):
    cache = _cache(args)
    if args.direction == "forward":
        grid = load_grid(args.input)
        signal = z_transform(grid)
        n = grid.n
    else:
        spec_in = load_spectrum(args.input, args.params)
        n = spec_in.n
    if args.method == "fast":
        t, plan_time = _timed_plan(n, args.params, cache)
    else:
        t0 = time.perf_counter()
        t = dense_transform(n, args.params)
        plan_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    if args.direction == "forward":
        result = fast_apply(t, signal, args.threads) if args.method == "fast" else naive_apply(t, signal)
    else:
        result = inverse_apply(t, spec_in)
    apply_time = time.perf_counter() - t0
    log.info("timing: plan %.6f s, apply %.6f s", plan_time, apply_time)
    if args.direction == "forward":
        nodes = skew_nodes(n, args.params)
        export_spectrum(result, nodes, args.out)
    else:
        save_grid(grid_from_signal(result, tol=args.tolerance or 1e-8), args.out)
    print(f"wrote {args.out}")


def cmd_verify(args):
    report = run_suite(n_max=args.n_max, tolerance=args.tolerance or 1e-9,
                       inject_fault=args.inject_fault)
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    if not report["passed"]:
        log.error("failed checks: %s", ", ".join(report["failed"]))
        return EXIT_MATH
    return EXIT_OK


def _median_time(fn, repeats):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return statistics.median(t / number for t in timer.repeat(repeats, number))


def cmd_bench(args):
    bad = [n for n in args.sizes if n & (n - 1)]
    if bad and not args.allow_direct:
        raise UsageError(f"sizes must be powers of two (got {bad}); pass --allow-direct")
    cache = _cache(args) if args.cache_dir else None
    rng = np.random.default_rng(0)
    rows = []
    for n in args.sizes:
        s = rng.standard_normal(n ** 3)
        plan, plan_time = _timed_plan(n, args.params, cache)
        fast_apply(plan, s, args.threads)
        rows.append((n, "fast", plan_time,
                     _median_time(lambda: fast_apply(plan, s, args.threads), args.repeats)))
        if n <= args.naive_max:
            t0 = time.perf_counter()
            dense = dense_transform(n, args.params)
            dt = time.perf_counter() - t0
            rows.append((n, "naive", dt, _median_time(lambda: naive_apply(dense, s), args.repeats)))
            del dense
        else:
            log.info("naive skipped for n=%d (ceiling %d)", n, args.naive_max)
    out = args.out or "bench.csv"
    with open(out, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["n", "method", "plan_time", "apply_time"])
        for n, method, pt, at in rows:
            wr.writerow([n, method, f"{pt:.6e}", f"{at:.6e}"])
    for n, method, pt, at in rows:
        print(f"n={n:<3d} {method:<5s} plan {pt:10.4f} s  apply {at:.3e} s")


def cmd_plan(args):
    cache = _cache(args)
    if cache is None:
        raise UsageError("plan requires a cache directory")
    plan, dt = _timed_plan(args.n, args.params, cache)
    st = cache.stats()
    status = "all cache hits" if st["misses"] == 0 else f"{st['misses']} plan(s) built"
    print(f"n={args.n} params={args.params}: {status}; {st['hits']} hit(s); "
          f"{len(cache.entries())} file(s) in {cache.directory} ({dt:.3f} s)")


def cmd_sword(args):
    save_grid(synthetic_sword(args.n), args.out)
    print(f"wrote {args.out}")


def cmd_geometry(args):
    count = export_geometry(None, args.out)
    print(f"{count} shift vectors written to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fccdct", description="FCC lattice cosine transform toolkit")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, params=True, cache=False, threads=False, tolerance=False):
        if params:
            sp.add_argument("--params", type=_params, default=DEFAULT_PARAMS,
                            help="skew parameters r,s,t (e.g. 1/8,0,3/8)")
        if cache:
            sp.add_argument("--cache-dir", default=None,
                            help=f"plan cache directory (default ${CACHE_ENV} or ~/.cache/fccdct)")
            sp.add_argument("--no-cache", action="store_true")
        if threads:
            sp.add_argument("--threads", type=_positive, default=None)
        if tolerance:
            sp.add_argument("--tolerance", type=float, default=None)

    z = sub.add_parser("zeros", help="write the spectral nodes as CSV")
    z.add_argument("--n", type=_positive, required=True)
    z.add_argument("--out")
    common(z)
    z.set_defaults(func=cmd_zeros)

    t = sub.add_parser("transform", help="forward or inverse transform of a file")
    t.add_argument("--input", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--method", choices=["naive", "fast"], default="fast")
    t.add_argument("--direction", choices=["forward", "inverse"], default="forward")
    common(t, cache=True, threads=True, tolerance=True)
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="run the self-check suite")
    v.add_argument("--n-max", type=_positive, default=8)
    v.add_argument("--out")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    common(v, params=False, tolerance=True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time naive and fast transforms")
    b.add_argument("--sizes", type=_sizes, default=[2, 4, 8, 16])
    b.add_argument("--repeats", type=_positive, default=5)
    b.add_argument("--out")
    b.add_argument("--naive-max", type=int, default=16)
    b.add_argument("--allow-direct", action="store_true")
    common(b, cache=True, threads=True)
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plan", help="build and cache plans")
    pl.add_argument("--n", type=_positive, required=True)
    common(pl, cache=True)
    pl.set_defaults(func=cmd_plan)

    sw = sub.add_parser("sword", help="write the synthetic sword grid")
    sw.add_argument("--n", type=_positive, default=16)
    sw.add_argument("--out", required=True)
    sw.set_defaults(func=cmd_sword)

    g = sub.add_parser("geometry", help="write the shift vectors as CSV")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_geometry)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        code = args.func(args)
    except UsageError as exc:
        print(f"fccdct: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MathError as exc:
        print(f"fccdct: numerical failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (OSError, MalformedFile, SizeMismatch) as exc:
        print(f"fccdct: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FCCError, ValueError) as exc:
        print(f"fccdct: error: {exc}", file=sys.stderr)
        return EXIT_MATH
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
