"""Hot numeric kernels with numba and pure-numpy implementations.

The numba path compiles the scalar loops; the fallback consumes the same
counter-based random draws in vectorized chunks, so cover-walk step counts
are bit-identical across backends.  Packing sweeps use the same Gauss-Seidel
order on both paths.
"""

from __future__ import annotations

import math

import numpy as np

from . import _rng
from ._accel import USE_NUMBA, njit

_GOLDEN_U64 = np.uint64(_rng.GOLDEN)
_INV53 = 1.0 / 9007199254740992.0


# --- cover-time walk ---------------------------------------------------------


@njit(cache=True)
def _mix64_nb(z):
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


@njit(cache=True)
def _cover_walk_nb(indptr, indices, start, n, key, max_steps):
    visited = np.zeros(n, dtype=np.uint8)
    visited[start] = 1
    covered = 1
    v = start
    t = np.uint64(0)
    steps = np.int64(0)
    while covered < n:
        if steps >= max_steps:
            return np.int64(-1)
        t += np.uint64(1)
        bits = _mix64_nb(key + t * _GOLDEN_U64)
        u = np.float64(bits >> np.uint64(11)) * _INV53
        deg = indptr[v + 1] - indptr[v]
        v = indices[indptr[v] + np.int64(u * deg)]
        steps += 1
        if visited[v] == 0:
            visited[v] = 1
            covered += 1
    return steps


@njit(cache=True)
def _cover_walk_batch_nb(indptr, indices, start, n, keys, max_steps, out):
    for r in range(keys.shape[0]):
        out[r] = _cover_walk_nb(indptr, indices, start, n, keys[r], max_steps)


_CHUNK = 1024


def _cover_walk_np(indptr, indices, start, n, key, max_steps):
    visited = bytearray(n)
    visited[start] = 1
    covered = 1
    v = int(start)
    steps = 0
    t = 0
    while covered < n:
        draws = _rng.stream_doubles(int(key), t, _CHUNK)
        t += _CHUNK
        for u in draws:
            if steps >= max_steps:
                return -1
            base = indptr[v]
            deg = indptr[v + 1] - base
            v = int(indices[base + int(u * deg)])
            steps += 1
            if not visited[v]:
                visited[v] = 1
                covered += 1
                if covered == n:
                    return steps
    return steps


def cover_walk_batch(indptr, indices, start, n, keys, max_steps) -> np.ndarray:
    """Step counts of one cover walk per key; -1 marks a capped replica."""
    out = np.empty(keys.shape[0], dtype=np.int64)
    if USE_NUMBA:
        _cover_walk_batch_nb(indptr, indices, np.int64(start), np.int64(n),
                             keys, np.int64(max_steps), out)
    else:
        for r in range(keys.shape[0]):
            out[r] = _cover_walk_np(indptr, indices, start, n, keys[r], max_steps)
    return out


# --- packing radius sweeps ---------------------------------------------------
#
# Corners are stored flat: for vertex v, corners corner_ptr[v]:corner_ptr[v+1]
# with neighbor radii indices corner_u and corner_w.  The angle at v in a face
# (v, u, w) comes from the law of cosines on the tangent-circle triangle.


@njit(cache=True)
def _angle_sum_nb(r, v, corner_ptr, corner_u, corner_w):
    total = 0.0
    rv = r[v]
    for c in range(corner_ptr[v], corner_ptr[v + 1]):
        x = rv + r[corner_u[c]]
        y = rv + r[corner_w[c]]
        z = r[corner_u[c]] + r[corner_w[c]]
        cosv = (x * x + y * y - z * z) / (2.0 * x * y)
        if cosv > 1.0:
            cosv = 1.0
        elif cosv < -1.0:
            cosv = -1.0
        total += math.acos(cosv)
    return total


@njit(cache=True)
def _packing_sweeps_nb(r, corner_ptr, corner_u, corner_w, tol, max_sweeps):
    n = r.shape[0]
    two_pi = 2.0 * math.pi
    sweeps = 0
    residual = np.inf
    gb_defect = 0.0
    while sweeps < max_sweeps:
        # One Gauss-Seidel sweep: uniform-neighbor radius update per vertex.
        for v in range(n):
            k = corner_ptr[v + 1] - corner_ptr[v]
            if k == 0:
                continue
            theta = _angle_sum_nb(r, v, corner_ptr, corner_u, corner_w)
            beta = math.sin(theta / (2.0 * k))
            rhat = beta * r[v] / (1.0 - beta)
            delta = math.sin(math.pi / k)
            r[v] = rhat * (1.0 - delta) / delta
        sweeps += 1
        rmax = r.max()
        for v in range(n):
            r[v] /= rmax
        # Residual and Gauss-Bonnet defect on the fixed radii snapshot.
        residual = 0.0
        gb_defect = 0.0
        for v in range(n):
            if corner_ptr[v + 1] > corner_ptr[v]:
                theta = _angle_sum_nb(r, v, corner_ptr, corner_u, corner_w)
                err = abs(theta - two_pi)
                if err > residual:
                    residual = err
                gb_defect += theta - two_pi
        if residual <= tol:
            break
    return residual, sweeps, gb_defect


def _angle_sums_np(r, corner_ptr, corner_u, corner_w):
    rv = np.repeat(r, np.diff(corner_ptr))
    x = rv + r[corner_u]
    y = rv + r[corner_w]
    z = r[corner_u] + r[corner_w]
    cosv = np.clip((x * x + y * y - z * z) / (2.0 * x * y), -1.0, 1.0)
    angles = np.arccos(cosv)
    return np.add.reduceat(angles, corner_ptr[:-1])


def _packing_sweeps_np(r, corner_ptr, corner_u, corner_w, tol, max_sweeps):
    n = r.shape[0]
    two_pi = 2.0 * math.pi
    counts = np.diff(corner_ptr)
    sweeps = 0
    residual = np.inf
    gb_defect = 0.0
    while sweeps < max_sweeps:
        for v in range(n):
            k = counts[v]
            if k == 0:
                continue
            lo, hi = corner_ptr[v], corner_ptr[v + 1]
            x = r[v] + r[corner_u[lo:hi]]
            y = r[v] + r[corner_w[lo:hi]]
            z = r[corner_u[lo:hi]] + r[corner_w[lo:hi]]
            cosv = np.clip((x * x + y * y - z * z) / (2.0 * x * y), -1.0, 1.0)
            theta = float(np.arccos(cosv).sum())
            beta = math.sin(theta / (2.0 * k))
            rhat = beta * r[v] / (1.0 - beta)
            delta = math.sin(math.pi / k)
            r[v] = rhat * (1.0 - delta) / delta
        sweeps += 1
        r /= r.max()
        sums = _angle_sums_np(r, corner_ptr, corner_u, corner_w)
        live = counts > 0
        residual = float(np.max(np.abs(sums[live] - two_pi))) if live.any() else 0.0
        gb_defect = float(np.sum(sums[live] - two_pi))
        if residual <= tol:
            break
    return residual, sweeps, gb_defect


def packing_sweeps(r, corner_ptr, corner_u, corner_w, tol, max_sweeps):
    """Run Gauss-Seidel radius sweeps in place; returns (final residual,
    sweeps used, final Gauss-Bonnet defect)."""
    if USE_NUMBA:
        return _packing_sweeps_nb(r, corner_ptr, corner_u, corner_w,
                                  float(tol), int(max_sweeps))
    return _packing_sweeps_np(r, corner_ptr, corner_u, corner_w,
                              float(tol), int(max_sweeps))


def angle_sums(r, corner_ptr, corner_u, corner_w) -> np.ndarray:
    return _angle_sums_np(np.asarray(r, dtype=float), corner_ptr, corner_u,
                          corner_w)
