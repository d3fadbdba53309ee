"""Benchmark the numba kernels against the pure numpy/Python fallback.

Runs the Monte Carlo cover-walk kernel and the packing radius sweeps on both
backends and prints throughput.  The walk results are bit-identical across
backends; this script also re-checks that.

Usage: python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from coverwalk import _kernels, _rng
from coverwalk._accel import USE_NUMBA
from coverwalk.graph_core import torus_grid
from coverwalk.packing import _corner_arrays
from coverwalk.surface import triangular_torus


def bench_walks():
    g = torus_grid(16)
    indptr, indices = g.csr
    replicas_nb, replicas_np = 4000, 60
    print(f"cover-walk kernel on torus_grid(16) (n={g.n})")

    if USE_NUMBA:
        keys = _rng.stream_keys(1, replicas_nb)
        # Warm up the JIT before timing.
        _kernels.cover_walk_batch(indptr, indices, 0, g.n, keys[:2], 10 ** 8)
        t0 = time.perf_counter()
        steps_nb = _kernels.cover_walk_batch(indptr, indices, 0, g.n, keys,
                                             10 ** 8)
        dt = time.perf_counter() - t0
        total = int(steps_nb.sum())
        print(f"  numba : {replicas_nb} replicas, {total} steps, "
              f"{dt:.3f} s, {total / dt / 1e6:.1f} M steps/s")
    else:
        print("  numba : unavailable (fallback forced or not installed)")

    keys = _rng.stream_keys(1, replicas_np)
    t0 = time.perf_counter()
    steps_np = np.array([
        _kernels._cover_walk_np(indptr, indices, 0, g.n, int(k), 10 ** 8)
        for k in keys])
    dt = time.perf_counter() - t0
    total = int(steps_np.sum())
    print(f"  numpy : {replicas_np} replicas, {total} steps, "
          f"{dt:.3f} s, {total / dt / 1e6:.2f} M steps/s")

    if USE_NUMBA:
        assert steps_nb[:replicas_np].tolist() == steps_np.tolist(), \
            "backends disagree on walk step counts"
        print("  parity: first replicas bit-identical across backends")


def bench_packing():
    tri = triangular_torus(12)
    ptr, cu, cw = _corner_arrays(tri)
    rng = np.random.default_rng(0)
    init = 1.0 + 0.3 * rng.random(tri.n)
    print(f"packing sweeps on triangular_torus(12) (n={tri.n})")

    if USE_NUMBA:
        r = init.copy()
        _kernels._packing_sweeps_nb(r, ptr, cu, cw, 1e-10, 2)  # warm-up
        r = init.copy()
        t0 = time.perf_counter()
        res, sweeps, _ = _kernels._packing_sweeps_nb(r, ptr, cu, cw, 1e-10,
                                                     10 ** 5)
        dt = time.perf_counter() - t0
        print(f"  numba : {sweeps} sweeps to residual {res:.1e} in {dt:.3f} s "
              f"({sweeps / dt:.0f} sweeps/s)")

    r = init.copy()
    t0 = time.perf_counter()
    res, sweeps, _ = _kernels._packing_sweeps_np(r, ptr, cu, cw, 1e-10, 10 ** 5)
    dt = time.perf_counter() - t0
    print(f"  numpy : {sweeps} sweeps to residual {res:.1e} in {dt:.3f} s "
          f"({sweeps / dt:.0f} sweeps/s)")


if __name__ == "__main__":
    print(f"active backend: {'numba' if USE_NUMBA else 'numpy'}")
    bench_walks()
    bench_packing()
