"""Finite simple undirected graphs: validation, Dirichlet energy, generators, I/O.

Vertices are dense integer indices 0..n-1.  Graphs are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph construction or precondition violation."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``genus_hint`` is advisory metadata (a declared minimum genus); it is
    never verified, since genus computation for general graphs is NP-hard.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    genus_hint: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        seen = set()
        canon = []
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge {{{u},{v}}}")
            seen.add((u, v))
            canon.append((u, v))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))
        if self.genus_hint is not None and self.genus_hint < 0:
            raise GraphError("genus_hint must be nonnegative")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) with neighbor lists sorted by index."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees)
        indices = np.empty(indptr[-1], dtype=np.int64)
        pos = indptr[:-1].copy()
        for v, nbrs in enumerate(self.adjacency):
            indices[pos[v]: pos[v] + len(nbrs)] = nbrs
        return indptr, indices

    @cached_property
    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        count = 1
        adj = self.adjacency
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def laplacian(self, sparse: bool = False):
        if sparse:
            from scipy.sparse import csr_matrix

            rows, cols, vals = [], [], []
            for v in range(self.n):
                rows.append(v)
                cols.append(v)
                vals.append(float(self.degrees[v]))
            for u, v in self.edges:
                rows += [u, v]
                cols += [v, u]
                vals += [-1.0, -1.0]
            return csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))
        L = np.zeros((self.n, self.n))
        for u, v in self.edges:
            L[u, v] -= 1.0
            L[v, u] -= 1.0
        np.fill_diagonal(L, self.degrees)
        return L

    def require_connected(self, op: str = "operation"):
        if not self.is_connected:
            raise GraphError(f"{op} requires a connected graph")

    # --- JSON wire format -------------------------------------------------
    # {"n": int, "edges": [[u,v],...], "genus_hint": int|null}
    # edges with u < v, sorted lexicographically; newline-terminated UTF-8.

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "edges": [[u, v] for u, v in self.edges],
            "genus_hint": self.genus_hint,
        }
        return json.dumps(doc, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        doc = json.loads(text)
        return cls(
            n=int(doc["n"]),
            edges=tuple((int(u), int(v)) for u, v in doc["edges"]),
            genus_hint=None if doc.get("genus_hint") is None else int(doc["genus_hint"]),
        )


@dataclass
class ValidationReport:
    simple: bool
    connected: bool
    n: int
    num_edges: int
    max_degree: int
    avg_degree: float
    min_degree: int
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {
            "simple": self.simple,
            "connected": self.connected,
            "n": self.n,
            "num_edges": self.num_edges,
            "max_degree": self.max_degree,
            "avg_degree": self.avg_degree,
            "min_degree": self.min_degree,
            "problems": list(self.problems),
            "ok": self.ok,
        }


def validate(graph: Graph) -> ValidationReport:
    """Report simplicity, connectivity and degree statistics.

    Construction already rejects loops and duplicates, so ``simple`` is
    always true for a live Graph; the report records it for parsed input.
    """
    problems = []
    if not graph.is_connected:
        problems.append("graph is not connected")
    degs = graph.degrees
    if graph.n > 1 and int(degs.min()) < 1:
        problems.append("isolated vertex present")
    return ValidationReport(
        simple=True,
        connected=graph.is_connected,
        n=graph.n,
        num_edges=graph.num_edges,
        max_degree=int(degs.max()) if graph.n else 0,
        avg_degree=2.0 * graph.num_edges / graph.n,
        min_degree=int(degs.min()) if graph.n else 0,
        problems=problems,
    )


def dirichlet_energy(graph: Graph, f: Sequence[float]) -> float:
    """Sum over edges of squared differences of ``f``."""
    values = np.asarray(f, dtype=float)
    if values.shape != (graph.n,):
        raise GraphError(f"vertex function has length {values.shape}, expected ({graph.n},)")
    if not np.all(np.isfinite(values)):
        raise GraphError("vertex function must be finite")
    if graph.num_edges == 0:
        return 0.0
    e = np.asarray(graph.edges, dtype=np.int64)
    diffs = values[e[:, 0]] - values[e[:, 1]]
    return float(np.dot(diffs, diffs))


# --- generators ------------------------------------------------------------


def path(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs n >= 2")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def torus_grid(k: int) -> Graph:
    """The grid graph on (Z/kZ)^2; vertex (i, j) has index i*k + j."""
    if k < 3:
        raise GraphError("torus_grid needs k >= 3 (k = 2 duplicates edges)")
    edges = []
    for i in range(k):
        for j in range(k):
            v = i * k + j
            edges.append((v, ((i + 1) % k) * k + j))
            edges.append((v, i * k + (j + 1) % k))
    return Graph(k * k, tuple(edges), genus_hint=1)


def lollipop(clique_size: int, path_length: int) -> Graph:
    """Complete graph K_clique with a path of ``path_length`` edges glued at
    vertex clique_size-1; path vertices continue the index range."""
    if clique_size < 3:
        raise GraphError("lollipop needs clique_size >= 3")
    if path_length < 1:
        raise GraphError("lollipop needs path_length >= 1")
    n = clique_size + path_length
    edges = [(i, j) for i in range(clique_size) for j in range(i + 1, clique_size)]
    prev = clique_size - 1
    for t in range(path_length):
        edges.append((prev, clique_size + t))
        prev = clique_size + t
    return Graph(n, tuple(edges))


def tree_plus_k5(n: int, g: int) -> Graph:
    """A max-degree-3 tree on n - 4g vertices with g disjoint K5 blocks, each
    sharing one vertex with a distinct tree leaf (minimum genus g, max degree
    at most 5).

    The tree is a complete binary tree truncated to its first n - 4g vertices
    in BFS order (parent of i is (i-1)//2); block i attaches to the i-th leaf
    in BFS order, and each block's four new vertices follow the tree indices.
    """
    if g < 1:
        raise GraphError("tree_plus_k5 needs g >= 1")
    m = n - 4 * g
    if m < 1:
        raise GraphError(f"infeasible (n, g): tree part would have {m} vertices")
    leaves = [i for i in range(m) if 2 * i + 1 >= m]
    if len(leaves) < g:
        raise GraphError(
            f"infeasible (n, g): truncated binary tree on {m} vertices has only "
            f"{len(leaves)} leaves, need {g}"
        )
    edges = [((i - 1) // 2, i) for i in range(1, m)]
    nxt = m
    for b in range(g):
        block = [leaves[b]] + list(range(nxt, nxt + 4))
        nxt += 4
        edges += [(x, y) for i, x in enumerate(block) for y in block[i + 1:]]
    return Graph(n, tuple(edges), genus_hint=g)


def skeleton(tri) -> Graph:
    """1-skeleton of a triangulation (vertices and edges of the complex)."""
    edges = set()
    for a, b, c in tri.faces:
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((min(u, v), max(u, v)))
    from .surface import euler_genus

    return Graph(tri.n, tuple(sorted(edges)), genus_hint=euler_genus(tri))


def random_connected(n: int, extra_edges: int, seed: int) -> Graph:
    """Random connected graph: uniform random spanning tree plus extra edges.

    Test-corpus helper; deterministic in (n, extra_edges, seed).
    """
    rng = np.random.default_rng(seed)
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        j = int(rng.integers(i))
        u, v = int(order[i]), int(order[j])
        edges.add((min(u, v), max(u, v)))
    attempts = 0
    while extra_edges > 0 and attempts < 50 * extra_edges + 100:
        u, v = int(rng.integers(n)), int(rng.integers(n))
        attempts += 1
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e not in edges:
            edges.add(e)
            extra_edges -= 1
    return Graph(n, tuple(sorted(edges)))
