#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--nodes 4000] [--points 500000]
"""

import argparse
import time

import numpy as np

from cubalex import _kernels_py

try:
    from cubalex import _kernels
except ImportError:
    _kernels = None


def closed_curves(n):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    c1 = np.c_[np.cos(t), np.sin(t), 0.1 * np.sin(3 * t)]
    c2 = np.c_[1 + np.cos(t), 0.1 * np.cos(2 * t), np.sin(t)]
    return c1, c2


def timed(fn, *args, repeat=3):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=4000)
    ap.add_argument("--points", type=int, default=500_000)
    args = ap.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))

    c1, c2 = closed_curves(args.nodes)
    pts = np.random.default_rng(0).normal(size=(args.points, 4))

    print(f"gauss_linking_sum, {args.nodes} nodes per curve "
          f"({args.nodes ** 2 / 1e6:.1f}M interactions)")
    results = {}
    for name, mod in backends:
        val, dt = timed(mod.gauss_linking_sum, c1, c2, repeat=2)
        results[name] = (val, dt)
        print(f"  {name:7s} {dt * 1e3:9.1f} ms   lk = {val:+.6f}")
    if len(results) == 2:
        speedup = results["python"][1] / results["cython"][1]
        agree = abs(results["python"][0] - results["cython"][0])
        print(f"  speedup {speedup:.1f}x, |difference| = {agree:.2e}")

    print(f"torus_distances, {args.points} points")
    for name, mod in backends:
        _, dt = timed(mod.torus_distances, pts, 0.05, 0)
        print(f"  {name:7s} {dt * 1e3:9.1f} ms")


if __name__ == "__main__":
    main()
