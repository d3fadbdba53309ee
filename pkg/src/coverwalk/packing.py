"""Euclidean circle packings of triangulated tori.

Radii are found by Thurston-style angle-sum iteration (uniform-neighbor
updates swept in vertex order); the layout lifts the packing to the plane
along a spanning tree of faces and reads the torus period lattice off the
holonomy mismatches.  Genus is restricted to 1, where the intrinsic metric
is flat and every vertex angle sum must equal 2*pi.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .surface import SurfaceError, Triangulation, euler_genus

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 100_000
LAYOUT_TOL = 1e-7


class PackingError(RuntimeError):
    """Solver non-convergence or inconsistent layout holonomy."""


@dataclass(frozen=True)
class Packing:
    radii: np.ndarray
    centers: np.ndarray  # (n, 2), one fundamental-domain representative each
    lattice: np.ndarray  # (2, 2), rows are the period vectors
    angle_residual: float
    kind: str = "triangulation"  # "grid" marks the explicit grid-torus packing

    @property
    def modulus(self) -> complex:
        return torus_modulus(self.lattice)

    def as_dict(self) -> dict:
        return {
            "radii": self.radii.tolist(),
            "centers": self.centers.tolist(),
            "lattice": self.lattice.tolist(),
            "angle_residual": self.angle_residual,
            "kind": self.kind,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Packing":
        doc = json.loads(text)
        return cls(
            radii=np.asarray(doc["radii"], dtype=float),
            centers=np.asarray(doc["centers"], dtype=float),
            lattice=np.asarray(doc["lattice"], dtype=float),
            angle_residual=float(doc["angle_residual"]),
            kind=doc.get("kind", "triangulation"),
        )


def _corner_arrays(tri: Triangulation):
    """Flat per-vertex corner lists: at vertex v, each incident face (v,u,w)
    contributes one (u, w) pair."""
    corners = [[] for _ in range(tri.n)]
    for a, b, c in tri.faces:
        corners[a].append((b, c))
        corners[b].append((c, a))
        corners[c].append((a, b))
    ptr = np.zeros(tri.n + 1, dtype=np.int64)
    for v in range(tri.n):
        ptr[v + 1] = ptr[v] + len(corners[v])
    cu = np.empty(ptr[-1], dtype=np.int64)
    cw = np.empty(ptr[-1], dtype=np.int64)
    pos = 0
    for v in range(tri.n):
        for u, w in corners[v]:
            cu[pos] = u
            cw[pos] = w
            pos += 1
    return ptr, cu, cw


def angle_sums(tri: Triangulation, radii: Sequence[float]) -> np.ndarray:
    ptr, cu, cw = _corner_arrays(tri)
    return _kernels.angle_sums(np.asarray(radii, dtype=float), ptr, cu, cw)


def solve_radii(tri: Triangulation, tol: float = DEFAULT_TOL,
                max_sweeps: int = MAX_SWEEPS,
                init: Optional[Sequence[float]] = None) -> np.ndarray:
    """Radii (normalized to max 1) with every angle sum equal to 2*pi
    within ``tol``.

    Deterministic: all-ones initialization, fixed vertex sweep order."""
    if tol <= 0:
        raise PackingError("tol must be positive")
    if euler_genus(tri) != 1:
        raise SurfaceError("solve_radii requires a genus-1 triangulation")
    ptr, cu, cw = _corner_arrays(tri)
    r = np.ones(tri.n) if init is None else np.asarray(init, dtype=float).copy()
    if r.shape != (tri.n,) or np.any(r <= 0):
        raise PackingError("initial radii must be positive, one per vertex")
    r /= r.max()
    residual, sweeps, gb_defect = _kernels.packing_sweeps(
        r, ptr, cu, cw, tol, max_sweeps)
    # On a torus the angle-sum defects cancel identically for any radii
    # (combinatorial Gauss-Bonnet, chi = 0); a large defect means a bug.
    if abs(gb_defect) > 1e-8 * max(1, tri.n):
        raise PackingError(f"Gauss-Bonnet defect {gb_defect:.3e} on a torus")
    if residual > tol:
        raise PackingError(
            f"radius iteration stopped at residual {residual:.3e} > tol {tol:.1e} "
            f"after {sweeps} sweeps"
        )
    r /= r.max()
    return r


def _corner_angle(rv: float, ru: float, rw: float) -> float:
    x, y, z = rv + ru, rv + rw, ru + rw
    cosv = (x * x + y * y - z * z) / (2.0 * x * y)
    return math.acos(min(1.0, max(-1.0, cosv)))


def layout(tri: Triangulation, radii: Sequence[float],
           tol: float = LAYOUT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Plane layout of a converged packing: centers in a fundamental domain
    plus the two period vectors.

    Vertex 0 sits at the origin with its first edge along +x.  Faces are
    lifted to the universal cover along a BFS tree of the dual graph; closing
    edges whose positions disagree yield the period lattice.  Holonomy that
    is not a lattice translation (radii not converged) raises PackingError.
    """
    r = np.asarray(radii, dtype=float)
    n = tri.n
    scale = float(r.max())
    faces = tri.faces
    twin = {}
    for fi, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            twin[(u, v)] = fi

    # Seed face: first face containing vertex 0, rotated to start at 0.
    f0 = next(fi for fi, f in enumerate(faces) if 0 in f)
    fa, fb, fc = faces[f0]
    while fa != 0:
        fa, fb, fc = fb, fc, fa
    pos0 = {fa: np.zeros(2)}
    pos0[fb] = np.array([r[fa] + r[fb], 0.0])
    alpha = _corner_angle(r[fa], r[fb], r[fc])
    direction = np.array([math.cos(alpha), math.sin(alpha)])
    pos0[fc] = pos0[fa] + (r[fa] + r[fc]) * direction

    face_pos: dict[int, dict[int, np.ndarray]] = {f0: pos0}
    global_pos: dict[int, np.ndarray] = dict(pos0)
    mismatches: list[np.ndarray] = []
    queue = deque([f0])
    visited = {f0}
    while queue:
        fi = queue.popleft()
        f = faces[fi]
        local = face_pos[fi]
        for i in range(3):
            u, v = f[i], f[(i + 1) % 3]
            gi = twin.get((v, u))
            if gi is None:
                raise SurfaceError("open edge in triangulation")
            if gi in visited:
                other = face_pos[gi]
                if u in other and v in other:
                    d1 = local[u] - other[u]
                    d2 = local[v] - other[v]
                    if np.linalg.norm(d1 - d2) > 10 * tol * scale:
                        raise PackingError(
                            "rotational holonomy detected; radii not converged"
                        )
                    mismatches.append(d1)
                continue
            # Place the twin face (v, u, t): direction v->t is direction v->u
            # rotated counterclockwise by the corner angle at v.
            ga, gb_, gc = faces[gi]
            while ga != v:
                ga, gb_, gc = gb_, gc, ga
            assert gb_ == u
            t = gc
            ang = _corner_angle(r[v], r[u], r[t])
            base = local[u] - local[v]
            base = base / np.linalg.norm(base)
            rot = np.array([
                base[0] * math.cos(ang) - base[1] * math.sin(ang),
                base[0] * math.sin(ang) + base[1] * math.cos(ang),
            ])
            pt = local[v] + (r[v] + r[t]) * rot
            face_pos[gi] = {v: local[v].copy(), u: local[u].copy(), t: pt}
            if t in global_pos:
                mismatches.append(pt - global_pos[t])
            else:
                global_pos[t] = pt
            visited.add(gi)
            queue.append(gi)

    lattice = _lattice_from_mismatches(mismatches, tol * scale)
    centers = np.array([global_pos[v] for v in range(n)])
    return centers, lattice


def _lattice_from_mismatches(mismatches, tol: float) -> np.ndarray:
    cands = [m for m in mismatches if np.linalg.norm(m) > 100 * tol]
    if not cands:
        raise PackingError("no period vectors found; layout did not wrap")
    cands.sort(key=lambda m: float(np.linalg.norm(m)))
    v1 = cands[0]
    v2 = None
    for m in cands[1:]:
        if abs(v1[0] * m[1] - v1[1] * m[0]) > 1e-9 * np.linalg.norm(v1) * np.linalg.norm(m):
            v2 = m
            break
    if v2 is None:
        raise PackingError("period vectors are collinear; layout did not wrap")
    # Lagrange-Gauss reduction to a shortest basis.
    v1, v2 = v1.copy(), v2.copy()
    while True:
        if np.dot(v2, v2) < np.dot(v1, v1):
            v1, v2 = v2, v1
        m = round(float(np.dot(v1, v2) / np.dot(v1, v1)))
        if m == 0:
            break
        v2 = v2 - m * v1
    basis = np.vstack([v1, v2])
    inv = np.linalg.inv(basis.T)
    for m in cands:
        coeff = inv @ m
        if np.max(np.abs(coeff - np.round(coeff))) > 1e-5:
            raise PackingError(
                "holonomy mismatch is not a lattice vector; radii not converged"
            )
    return basis


def torus_modulus(lattice: np.ndarray) -> complex:
    """Lattice-shape parameter in the standard fundamental domain
    (|Re| <= 1/2, |tau| >= 1, boundary canonicalized to Re >= 0)."""
    z1 = complex(lattice[0][0], lattice[0][1])
    z2 = complex(lattice[1][0], lattice[1][1])
    tau = z2 / z1
    if tau.imag < 0:
        tau = z1 / z2
    if tau.imag <= 0:
        raise PackingError("degenerate lattice")
    for _ in range(200):
        tau -= round(tau.real)
        if abs(tau) < 1.0 - 1e-14:
            tau = -1.0 / tau
        else:
            break
    # Boundary of the fundamental domain: prefer Re >= 0 representatives.
    if tau.real < -1e-12:
        if abs(abs(tau) - 1.0) < 1e-9:
            tau = -1.0 / tau
        elif abs(tau.real + 0.5) < 1e-9:
            tau += 1.0
    return tau


def tangency_residual(packing: Packing, edges) -> float:
    """Max relative tangency defect over edges, minimizing the center
    distance over lattice translates."""
    centers = packing.centers
    r = packing.radii
    basis = packing.lattice
    inv = np.linalg.inv(basis.T)
    worst = 0.0
    for u, v in edges:
        d = centers[u] - centers[v]
        coeff = inv @ d
        best = np.inf
        c0, c1 = np.round(coeff).astype(int)
        for m0 in (c0 - 1, c0, c0 + 1):
            for m1 in (c1 - 1, c1, c1 + 1):
                dist = float(np.linalg.norm(d - basis.T @ np.array([m0, m1], dtype=float)))
                best = min(best, dist)
        target = r[u] + r[v]
        worst = max(worst, abs(best - target) / target)
    return worst


def pack(tri: Triangulation, tol: float = DEFAULT_TOL,
         max_sweeps: int = MAX_SWEEPS) -> Packing:
    """Solve radii, lay out the packing and assemble the result."""
    radii = solve_radii(tri, tol=tol, max_sweeps=max_sweeps)
    centers, lattice = layout(tri, radii)
    ptr, cu, cw = _corner_arrays(tri)
    sums = _kernels.angle_sums(radii, ptr, cu, cw)
    residual = float(np.max(np.abs(sums - 2.0 * math.pi)))
    p = Packing(radii=radii, centers=centers, lattice=lattice,
                angle_residual=residual)
    worst = tangency_residual(p, tri.edges)
    if worst > LAYOUT_TOL:
        raise PackingError(f"tangency residual {worst:.3e} exceeds {LAYOUT_TOL}")
    return p


def grid_torus_packing(k: int) -> Packing:
    """Explicit packing of the (Z/kZ)^2 grid graph on the unit-square torus:
    centers (i + j*sqrt(-1))/k, radii 1/(2k), lattice Z + Z*sqrt(-1).

    The grid graph is not a triangulation; the packing is exact by
    construction and carries kind="grid"."""
    if k < 3:
        raise PackingError("grid_torus_packing needs k >= 3")
    centers = np.array([[i / k, j / k] for i in range(k) for j in range(k)])
    radii = np.full(k * k, 1.0 / (2 * k))
    lattice = np.array([[1.0, 0.0], [0.0, 1.0]])
    return Packing(radii=radii, centers=centers, lattice=lattice,
                   angle_residual=0.0, kind="grid")


def to_svg(packing: Packing, path: str, size: int = 512):
    """Draw one fundamental domain with all circles (static plot export)."""
    centers = packing.centers
    r = packing.radii
    lo = centers.min(axis=0) - r.max()
    hi = centers.max(axis=0) + r.max()
    span = float(max(hi - lo))
    s = size / span

    def sx(x):
        return (x - lo[0]) * s

    def sy(y):
        return size - (y - lo[1]) * s

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    v1, v2 = packing.lattice
    ox, oy = sx(centers[0][0]), sy(centers[0][1])
    for vec in (v1, v2):
        parts.append(
            f'<line x1="{ox:.2f}" y1="{oy:.2f}" '
            f'x2="{sx(centers[0][0] + vec[0]):.2f}" y2="{sy(centers[0][1] + vec[1]):.2f}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    for (x, y), rad in zip(centers, r):
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{rad * s:.2f}" '
            'fill="none" stroke="#1f77b4"/>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
