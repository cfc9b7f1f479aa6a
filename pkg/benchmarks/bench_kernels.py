#!/usr/bin/env python3
"""Timings: compiled kernel core vs the numpy fallback.

Run after building the extension:

    python benchmarks/bench_kernels.py

Each kernel is timed on a representative workload; the table reports the
best of `repeat` runs and the speedup of the compiled path.
"""

import time

import numpy as np

from mollab._kernels import _core, fallback


def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_lattice(radius, d):
    off = np.arange(-radius, radius + 1)
    if d == 1:
        offs = off[:, None]
    else:
        o0, o1 = np.meshgrid(off, off, indexing="ij")
        offs = np.stack([o0.ravel(), o1.ravel()], axis=1)
    r2 = np.sum((offs / radius) ** 2, axis=1)
    keep = r2 < 1.0
    offs = offs[keep]
    w = np.exp(-1.0 / (1.0 - r2[keep]))
    return w / w.sum(), offs


def main():
    rng = np.random.default_rng(0)
    rows = []

    w, offs = kernel_lattice(16, 1)
    x = rng.standard_normal(1 << 14)
    rows.append(("conv1  (n=16384, 31-point kernel)",
                 best_of(lambda: _core.conv1(x, w, offs[:, 0].copy())),
                 best_of(lambda: fallback.conv1(x, w, offs[:, 0].copy()))))

    w2, offs2 = kernel_lattice(8, 2)
    x2 = rng.standard_normal((256, 256))
    o0 = offs2[:, 0].copy()
    o1 = offs2[:, 1].copy()
    rows.append(("conv2  (256^2, disc kernel r=8)",
                 best_of(lambda: _core.conv2(x2, w2, o0, o1)),
                 best_of(lambda: fallback.conv2(x2, w2, o0, o1))))

    f = rng.standard_normal(1 << 13)
    g = rng.standard_normal(1 << 13)
    rows.append(("cet_g1 (n=8192, 31-point kernel)",
                 best_of(lambda: _core.cet_g1(f, g, w, offs[:, 0].copy())),
                 best_of(lambda: fallback.cet_g1(f, g, w, offs[:, 0].copy()))))

    rho = np.abs(rng.standard_normal(4096)) + 0.5
    m = rng.standard_normal(4096)
    args = (2.0, 0.125, 1 / 4096, 0, 2, 1e-12)
    rows.append(("euler_rhs (n=4096, MUSCL + LLF)",
                 best_of(lambda: _core.euler_rhs(rho, m, *args)),
                 best_of(lambda: fallback.euler_rhs(rho, m, *args))))

    print(f"{'kernel':40s} {'compiled':>12s} {'fallback':>12s} {'speedup':>9s}")
    for name, tc, tf in rows:
        print(f"{name:40s} {tc * 1e3:10.3f}ms {tf * 1e3:10.3f}ms "
              f"{tf / tc:8.1f}x")


if __name__ == "__main__":
    main()
