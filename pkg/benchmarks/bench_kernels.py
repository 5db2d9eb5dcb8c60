"""Compiled vs pure-Python kernel throughput.

    python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]

Times the three hot loops (streamed advance, materialized path, cycle
tracking) on the same increments for every available backend, checks the
outputs are bit-identical, and prints ns/step and the speedup.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from eppdrift import kernels
from eppdrift.noise import gaussian_increments

C0, K, Y, DT = 1.0, 1.0, 0.5, 1e-3


def _advance(k, dW):
    state = np.zeros(4)
    k.advance(C0, K, Y, DT, state, dW)
    return tuple(state)


def _path(k, dW):
    y, z, x, d = k.simulate_path(C0, K, Y, DT, 0.0, 0.0, dW)
    return float(y[-1]), float(z[-1]), float(x[-1]), float(d[-1])


def _cycles(k, dW):
    tr = k.CycleTracker(C0, K, Y, DT, 0.0, 0.0)
    pos, done = 0, 0
    while pos < len(dW):
        pos += tr.feed(dW[pos:])
        done += bool(tr.completed)
    return done, float(tr.x)


KERNELS = {"advance": _advance, "simulate_path": _path, "cycle_tracker": _cycles}


def bench(name: str, fn, dW: np.ndarray, repeat: int) -> tuple[float, object]:
    prev = kernels.use_backend(name)
    try:
        k = kernels.get()
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            out = fn(k, dW)
            best = min(best, time.perf_counter() - t0)
    finally:
        kernels.use_backend(prev)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    dW = gaussian_increments(1, DT, args.steps).increments
    backends = kernels.available()
    print(f"backends: {', '.join(backends)}; {args.steps} steps, best of {args.repeat}")
    print(f"{'kernel':<15}" + "".join(f"{b + ' ns/step':>20}" for b in backends) + f"{'speedup':>10}")
    for kname, fn in KERNELS.items():
        times, outs = {}, {}
        for b in backends:
            times[b], outs[b] = bench(b, fn, dW, args.repeat)
        same = len({repr(o) for o in outs.values()}) == 1
        row = f"{kname:<15}" + "".join(f"{1e9 * times[b] / args.steps:>20.1f}" for b in backends)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>9.0f}x"
        print(row + ("" if same else "  OUTPUT MISMATCH"))


if __name__ == "__main__":
    main()
