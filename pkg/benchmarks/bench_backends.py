#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the four backend entry points in isolation plus one end-to-end
recovery (whose hot loop mixes LAPACK eigensolves with the kernels), using
whichever backend is active for the end-to-end number.  Run after building
the extension:

    python benchmarks/bench_backends.py
"""
import time

import numpy as np

from qclab import backend_name
from qclab import _core_py

try:
    from qclab import _core
except ImportError:
    _core = None


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_masks(rng, n, p):
    masks = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                masks[i] |= np.uint64(1 << j)
                masks[j] |= np.uint64(1 << i)
    return masks


def bench_kernels():
    rng = np.random.default_rng(0)
    rows = []

    def add(name, fast, slow):
        t_fast = timeit(fast) if fast else None
        t_slow = timeit(slow)
        speedup = (t_slow / t_fast) if t_fast else float("nan")
        rows.append((name, t_fast, t_slow, speedup))

    masks18 = random_masks(rng, 18, 0.5)
    add(
        "exhaustive search n=18",
        (lambda: _core.exhaustive_max_qc(masks18, 18, 7, 10)) if _core else None,
        lambda: _core_py.exhaustive_max_qc(masks18, 18, 7, 10),
    )

    masks40 = random_masks(rng, 40, 0.45)
    add(
        "branch and bound n=40",
        (lambda: _core.bnb_max_qc(masks40, 40, 7, 10, 1, 40, 3 * 10**5)) if _core else None,
        lambda: _core_py.bnb_max_qc(masks40, 40, 7, 10, 1, 40, 3 * 10**5),
    )
    return rows


def bench_end_to_end():
    from qclab import SolverConfig, recover
    from qclab.generators import plant_quasi_clique

    inst = plant_quasi_clique(100, 80, 0.8, 0.2, 0.8, seed=1)
    return timeit(lambda: recover(inst.graph, 0.8, SolverConfig(), "unconstrained"), repeat=3)


def main():
    print(f"active backend: {backend_name()}")
    if _core is None:
        print("compiled extension unavailable; timing the fallback only\n")
    print(f"{'kernel':28s} {'compiled':>10s} {'pure':>10s} {'speedup':>8s}")
    for name, fast, slow, speedup in bench_kernels():
        fast_s = f"{fast * 1e3:8.2f}ms" if fast is not None else "      --"
        print(f"{name:28s} {fast_s:>10s} {slow * 1e3:8.2f}ms {speedup:7.1f}x")
    t = bench_end_to_end()
    print(f"\nend-to-end recovery (n=100, active backend): {t:.2f}s")


if __name__ == "__main__":
    main()
