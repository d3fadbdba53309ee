"""Exact linear-algebraic walk quantities: hitting/commute/difference times,
effective resistance, the visited-set cover-time DP, and Matthews' bounds.

Convention lock: H[u, v] is the expected number of steps of a walk started at
v until it first hits u (the target indexes the row).  Commute and difference
times follow: C[u, v] = H[u, v] + H[v, u], D[u, v] = H[u, v] - H[v, u].
Silently flipping the argument order corrupts the sign of D; don't.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph_core import Graph, GraphError

RESIDUAL_TOL = 1e-10
DENSE_LIMIT = 512


class SolverError(RuntimeError):
    """Linear solve failed to reach the required residual."""


@dataclass(frozen=True)
class WalkTables:
    H: np.ndarray
    C: np.ndarray
    D: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class CoverResult:
    per_start: np.ndarray
    overall: float  # max over starts


def _check_residual(residual: float, what: str):
    if not residual <= RESIDUAL_TOL:
        raise SolverError(f"{what}: residual {residual:.3e} exceeds {RESIDUAL_TOL}")


def _solve_spd(A_dense: Optional[np.ndarray], A_sparse, b: np.ndarray,
               n: int) -> np.ndarray:
    """Solve an SPD system, dense below DENSE_LIMIT, Jacobi-preconditioned CG
    above."""
    if n <= DENSE_LIMIT:
        return np.linalg.solve(A_dense, b)
    from scipy.sparse.linalg import LinearOperator, cg

    diag = A_sparse.diagonal()
    M = LinearOperator(A_sparse.shape, matvec=lambda x: x / diag)
    x, info = cg(A_sparse, b, M=M, rtol=1e-14, atol=1e-13, maxiter=20 * n)
    if info != 0:
        raise SolverError(f"CG failed to converge (info={info})")
    return x


def hitting_times(graph: Graph) -> np.ndarray:
    """H[u, v] = expected steps from v to first visit of u.

    For each target u the first-step equations read, after multiplying by
    degrees, (L restricted to V \\ {u}) h = d; each system's max-norm residual
    is checked against 1e-10.
    """
    graph.require_connected("hitting_times")
    n = graph.n
    d = graph.degrees.astype(float)
    H = np.zeros((n, n))
    use_dense = n <= DENSE_LIMIT
    L_dense = graph.laplacian() if use_dense else None
    L_sparse = None if use_dense else graph.laplacian(sparse=True)
    for u in range(n):
        keep = np.arange(n) != u
        b = d[keep]
        if use_dense:
            A = L_dense[np.ix_(keep, keep)]
            h = np.linalg.solve(A, b)
            res = float(np.max(np.abs(A @ h - b)))
        else:
            A = L_sparse[keep][:, keep].tocsr()
            h = _solve_spd(None, A, b, n)
            res = float(np.max(np.abs(A @ h - b)))
        _check_residual(res, f"hitting_times target {u}")
        H[u, keep] = h
    return H


def commute_difference(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """C[u, v] = H[u, v] + H[v, u]; D[u, v] = H[u, v] - H[v, u]."""
    return H + H.T, H - H.T


def effective_resistance(graph: Graph) -> np.ndarray:
    """Full matrix of pairwise effective resistances.

    Computed from the grounded Laplacian inverse: R[u, v] is the potential
    difference of the unit-current flow from u to v.
    """
    graph.require_connected("effective_resistance")
    n = graph.n
    if n == 1:
        return np.zeros((1, 1))
    if n <= DENSE_LIMIT:
        L = graph.laplacian()
        A = L[1:, 1:]
        Minv = np.linalg.inv(A)
        res = float(np.max(np.abs(A @ Minv - np.eye(n - 1))))
        _check_residual(res, "effective_resistance grounded inverse")
        M = np.zeros((n, n))
        M[1:, 1:] = Minv
    else:
        L = graph.laplacian(sparse=True)
        A = L[1:][:, 1:].tocsr()
        M = np.zeros((n, n))
        for col in range(n - 1):
            b = np.zeros(n - 1)
            b[col] = 1.0
            x = _solve_spd(None, A, b, n)
            _check_residual(float(np.max(np.abs(A @ x - b))),
                            f"effective_resistance column {col}")
            M[1:, col + 1] = x
    diag = np.diag(M)
    R = diag[:, None] + diag[None, :] - M - M.T
    np.fill_diagonal(R, 0.0)
    return R


def resistance_between(graph: Graph, u: int, v: int) -> float:
    """Single-pair effective resistance via one Laplacian solve."""
    graph.require_connected("resistance_between")
    if u == v:
        return 0.0
    n = graph.n
    b = np.zeros(n)
    b[u], b[v] = 1.0, -1.0
    ground = 0 if 0 not in (u, v) else (1 if 1 not in (u, v) else 2)
    keep = np.arange(n) != ground
    if n <= DENSE_LIMIT:
        A = graph.laplacian()[np.ix_(keep, keep)]
        x = np.linalg.solve(A, b[keep])
        res = float(np.max(np.abs(A @ x - b[keep])))
    else:
        A = graph.laplacian(sparse=True)[keep][:, keep].tocsr()
        x = _solve_spd(None, A, b[keep], n)
        res = float(np.max(np.abs(A @ x - b[keep])))
    _check_residual(res, f"resistance_between ({u},{v})")
    full = np.zeros(n)
    full[keep] = x
    return float(full[u] - full[v])


def verify_commute_resistance(graph: Graph, C: np.ndarray, R: np.ndarray) -> float:
    """Max relative residual of C(u,v) = 2|E| R(u,v) over all pairs."""
    lhs = C
    rhs = 2.0 * graph.num_edges * R
    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs))))


def hitting_from_resistance(graph: Graph, R: np.ndarray) -> np.ndarray:
    """Hitting times from resistances (Tetali's identity).

    In this package's convention H'[u, v] = E_v T_u, the identity reads
    H'[u, v] = 1/2 sum_w d_w (R(u,v) + R(u,w) - R(v,w)).  (Stated with the
    opposite argument order, it computes E_u T_v instead; the asymmetric
    lollipop graphs distinguish the two.)
    """
    d = graph.degrees.astype(float)
    s = R @ d
    return 0.5 * (2.0 * graph.num_edges * R + s[:, None] - s[None, :])


def walk_tables(graph: Graph) -> WalkTables:
    H = hitting_times(graph)
    C, D = commute_difference(H)
    return WalkTables(H=H, C=C, D=D, R=effective_resistance(graph))


DEFAULT_COVER_CAP = 12


def exact_cover_time(graph: Graph, cap: int = DEFAULT_COVER_CAP) -> CoverResult:
    """Expected cover time from every start via the visited-set DP.

    States are (visited set S, current vertex v in S); E = 0 on the full set,
    otherwise E = 1 + mean over neighbors of the successor state.  Sets are
    processed by decreasing cardinality, one small linear system per set.
    """
    graph.require_connected("exact_cover_time")
    n = graph.n
    if n > cap:
        raise GraphError(f"exact_cover_time: n={n} exceeds cap {cap}")
    adj = graph.adjacency
    full = (1 << n) - 1
    # E[mask] is a dense length-n vector; entries for v not in mask unused.
    E = np.zeros((full + 1, n))
    masks = sorted(range(1, full + 1), key=lambda m: -bin(m).count("1"))
    for mask in masks:
        if mask == full:
            continue
        verts = [v for v in range(n) if mask >> v & 1]
        idx = {v: i for i, v in enumerate(verts)}
        m = len(verts)
        A = np.zeros((m, m))
        b = np.zeros(m)
        for v in verts:
            i = idx[v]
            deg = len(adj[v])
            A[i, i] = deg
            b[i] = deg
            for w in adj[v]:
                if mask >> w & 1:
                    A[i, idx[w]] -= 1.0
                else:
                    b[i] += E[mask | (1 << w), w]
        x = np.linalg.solve(A, b)
        for v in verts:
            E[mask, v] = x[idx[v]]
    per_start = np.array([E[1 << v, v] for v in range(n)])
    return CoverResult(per_start=per_start, overall=float(per_start.max()))


def harmonic_number(m: int) -> float:
    return float(sum(1.0 / i for i in range(1, m + 1)))


def matthews_bounds(H: np.ndarray, subset: Optional[Sequence[int]] = None
                    ) -> tuple[float, float]:
    """Matthews' inequality: (h_{|V0|-1} min H over V0, h_{n-1} max H over V).

    The upper bound always uses the full vertex set; the lower bound uses the
    given subset (default: all vertices).
    """
    n = H.shape[0]
    V0 = list(range(n)) if subset is None else sorted(set(int(v) for v in subset))
    if len(V0) < 2:
        raise GraphError("matthews_bounds needs a subset with at least 2 vertices")
    sub = H[np.ix_(V0, V0)]
    off = sub[~np.eye(len(V0), dtype=bool)]
    lower = harmonic_number(len(V0) - 1) * float(off.min())
    offall = H[~np.eye(n, dtype=bool)]
    upper = harmonic_number(n - 1) * float(offall.max())
    return lower, upper


def order_by_difference_time(D: np.ndarray, anchor: int) -> np.ndarray:
    """Vertices sorted by D[anchor, .], ties broken by vertex index.

    Values within 1e-9 of zero are treated as exact ties so that
    vertex-transitive graphs (where D vanishes identically up to solver
    noise) sort to the identity.  In the output order, D[v_i, v_j] >= 0
    for i <= j (triangle equation)."""
    key = D[anchor].copy()
    key[np.abs(key) <= 1e-9] = 0.0
    return np.argsort(key, kind="stable")
