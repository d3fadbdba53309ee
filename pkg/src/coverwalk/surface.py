"""Oriented triangulations of closed orientable surfaces and branched-covering
arithmetic.

A Triangulation stores oriented faces; validity means every edge lies in
exactly two faces with opposite induced orientations (closed + orientable),
every vertex link is a single cycle (manifold), and the complex is connected.
Covering data (degrees, ramification indices) is pure bookkeeping checked
against the Riemann-Hurwitz identity; no analytic maps are constructed.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence


class SurfaceError(ValueError):
    """Invalid triangulation or covering data."""


@dataclass(frozen=True)
class Triangulation:
    n: int
    faces: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 3:
            raise SurfaceError("triangulation needs at least 3 vertices")
        faces = []
        for f in self.faces:
            a, b, c = (int(x) for x in f)
            if len({a, b, c}) != 3:
                raise SurfaceError(f"degenerate face {f}")
            for x in (a, b, c):
                if not 0 <= x < self.n:
                    raise SurfaceError(f"face {f} out of range for n={self.n}")
            faces.append((a, b, c))
        object.__setattr__(self, "faces", tuple(faces))
        self._check_closed_oriented()
        self._check_links()
        self._check_connected()

    def _check_closed_oriented(self):
        directed = set()
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                if (u, v) in directed:
                    raise SurfaceError(
                        f"directed edge {u}->{v} appears twice: "
                        "non-orientable or non-manifold input"
                    )
                directed.add((u, v))
        for u, v in directed:
            if (v, u) not in directed:
                raise SurfaceError(
                    f"edge {{{u},{v}}} lies in only one face: surface not closed"
                )

    def _check_links(self):
        # Around each vertex v, successors (u -> w for each face (v,u,w) up to
        # rotation) must form a single cycle.
        succ: list[dict[int, int]] = [dict() for _ in range(self.n)]
        for a, b, c in self.faces:
            for v, u, w in ((a, b, c), (b, c, a), (c, a, b)):
                if u in succ[v]:
                    raise SurfaceError(f"non-manifold corner at vertex {v}")
                succ[v][u] = w
        for v, s in enumerate(succ):
            if not s:
                raise SurfaceError(f"vertex {v} lies in no face")
            start = next(iter(s))
            cur = s[start]
            count = 1
            while cur != start:
                if cur not in s:
                    raise SurfaceError(f"broken link at vertex {v}")
                cur = s[cur]
                count += 1
                if count > len(s):
                    break
            if count != len(s):
                raise SurfaceError(f"link of vertex {v} is not a single cycle")

    def _check_connected(self):
        if not self.faces:
            raise SurfaceError("triangulation has no faces")
        adj = [set() for _ in range(self.n)]
        for a, b, c in self.faces:
            adj[a].update((b, c))
            adj[b].update((a, c))
            adj[c].update((a, b))
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise SurfaceError("triangulation is not connected")

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        es = set()
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                es.add((min(u, v), max(u, v)))
        return tuple(sorted(es))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "faces": [list(f) for f in self.faces]},
                          sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Triangulation":
        doc = json.loads(text)
        return cls(n=int(doc["n"]), faces=tuple(tuple(f) for f in doc["faces"]))


def euler_genus(tri: Triangulation) -> int:
    """Genus from Euler's polyhedron formula: |V| - |E| + |F| = 2 - 2g."""
    chi = tri.n - tri.num_edges + tri.num_faces
    if chi % 2 != 0:
        raise SurfaceError(f"odd Euler characteristic {chi}")
    g = (2 - chi) // 2
    if g < 0:
        raise SurfaceError(f"negative genus from characteristic {chi}")
    return g


def tetrahedron() -> Triangulation:
    """Boundary of the tetrahedron: the minimal sphere triangulation."""
    return Triangulation(4, ((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)))


def triangular_torus(k: int) -> Triangulation:
    """Quotient of the triangular lattice: k^2 vertices, 6-regular, genus 1.

    Vertex (i, j) has index i*k + j; neighbors are (i, j) +- e1, e2, e1+e2.
    """
    if k < 3:
        raise SurfaceError("triangular_torus needs k >= 3")

    def v(i, j):
        return (i % k) * k + (j % k)

    faces = []
    for i in range(k):
        for j in range(k):
            faces.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            faces.append((v(i, j), v(i + 1, j + 1), v(i, j + 1)))
    return Triangulation(k * k, tuple(faces))


def hex_refine(tri: Triangulation) -> Triangulation:
    """Midpoint (1-to-4) subdivision: V' = V + E, E' = 2E + 3F, F' = 4F.

    Edge midpoints get indices tri.n + rank(edge) in the lexicographic edge
    order; genus is preserved and new vertices have degree 6.
    """
    mid = {e: tri.n + i for i, e in enumerate(tri.edges)}

    def m(u, v):
        return mid[(min(u, v), max(u, v))]

    faces = []
    for a, b, c in tri.faces:
        ab, bc, ca = m(a, b), m(b, c), m(c, a)
        faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return Triangulation(tri.n + tri.num_edges, tuple(faces))


@dataclass(frozen=True)
class CoveringLedger:
    """Claimed branched covering: genus pair, degree and ramification data.

    ``fibers`` lists, for each recorded target point, the ramification
    indices of the points above it.
    """

    g1: int
    g2: int
    deg: int
    fibers: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise SurfaceError("genera must be nonnegative")
        if self.deg < 1:
            raise SurfaceError("degree must be positive")
        fibers = tuple(tuple(int(e) for e in fib) for fib in self.fibers)
        for fib in fibers:
            if any(e < 1 for e in fib):
                raise SurfaceError("ramification indices must be >= 1")
        object.__setattr__(self, "fibers", fibers)

    @property
    def ramification_sum(self) -> int:
        return sum(e - 1 for fib in self.fibers for e in fib)

    @classmethod
    def from_json(cls, text: str) -> "CoveringLedger":
        doc = json.loads(text)
        return cls(
            g1=int(doc["g1"]),
            g2=int(doc["g2"]),
            deg=int(doc["deg"]),
            fibers=tuple(tuple(fib) for fib in doc["fibers"]),
        )


def riemann_hurwitz_residual(ledger: CoveringLedger) -> int:
    """(2-2g1) - [deg*(2-2g2) - sum(e_P - 1)]; zero iff consistent."""
    return (2 - 2 * ledger.g1) - (
        ledger.deg * (2 - 2 * ledger.g2) - ledger.ramification_sum
    )


def degree_constancy_check(ledger: CoveringLedger) -> bool:
    """True iff every recorded fiber's indices sum to the degree."""
    return all(sum(fib) == ledger.deg for fib in ledger.fibers)


def branch_point_budget(g: int, deg: int) -> tuple[int, int]:
    """(2*deg - (2 - 2g), 4g): the exact ramification budget and its cap.

    The cap holds whenever deg <= g + 1 (the minimal-degree covering to the
    sphere); larger degrees trigger a warning, not an error.
    """
    if deg > g + 1:
        warnings.warn(
            f"deg={deg} exceeds g+1={g + 1}; the 4g cap assumes a minimal-degree "
            "covering to the sphere",
            stacklevel=2,
        )
    return 2 * deg - (2 - 2 * g), 4 * g
