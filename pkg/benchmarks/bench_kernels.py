"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--n 6000]

Each row times one kernel through the public API on both backends and
checks that the outputs agree.
"""
import argparse
import time

import numpy as np

from horograph import graphgen, spectral, stats
from horograph.connection import preset
from horograph.pointset import france_model, load_cities


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=6000, help="France model size")
    ap.add_argument("--cut-n", type=int, default=18, help="vertices for exhaustive cuts")
    args = ap.parse_args(argv)

    cities, _ = load_cities()
    points = france_model(cities, total_n=args.n, seed=2024)
    g = graphgen.generate(points, preset("U"), 1).top()
    v = np.random.default_rng(0).standard_normal(g.n)
    rng = np.random.default_rng(1)
    small = graphgen.Graph(args.cut_n, [
        (i, j) for i in range(args.cut_n) for j in range(i + 1, args.cut_n)
        if j == i + 1 or rng.random() < 0.3
    ])

    cases = {
        "sample_band_edges (U)": lambda b: graphgen.generate(points, preset("U"), 1, backend=b).top().edges,
        "annulus_pairs (r<=1)": lambda b: graphgen.annulus_pairs(points, 0.0, 1.0, backend=b),
        "laplacian matvec x20": lambda b: [spectral.normalized_laplacian_apply(g, v, backend=b)
                                           for _ in range(20)][-1],
        "triangle_counts": lambda b: stats.triangle_counts(g, backend=b),
        f"cut_search n={args.cut_n}": lambda b: spectral.conductance_bruteforce(small, backend=b).subset,
    }
    print(f"graph U: n={g.n} edges={g.edge_count}; best of {args.repeat}")
    print(f"{'kernel':28s} {'compiled s':>11s} {'pure s':>9s} {'speedup':>8s}  agree")
    for name, fn in cases.items():
        tc, oc = best_of(lambda: fn("compiled"), args.repeat)
        tp, op = best_of(lambda: fn("pure"), args.repeat)
        agree = np.allclose(oc, op, rtol=1e-12, atol=1e-12) if isinstance(oc, np.ndarray) else oc == op
        print(f"{name:28s} {tc:11.4f} {tp:9.4f} {tp / tc:8.1f}  {agree}")


if __name__ == "__main__":
    main()
