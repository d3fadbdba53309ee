"""Algorithmic content of the lower-bound machinery: Dirichlet resistance
certificates, logarithmic cutoff test functions, and radius-binned
maximal-separated-subset extraction.

The analytic covering map is abstracted away: a PackedConfiguration carries
the planar image point and inner radius of each vertex's circle directly.
For torus grids these come straight from the explicit grid packing with the
identity image.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph_core import Graph, GraphError, dirichlet_energy
from .packing import Packing


class ProofLabError(ValueError):
    pass


@dataclass(frozen=True)
class PackedConfiguration:
    """Per-vertex planar image points and inner radii, plus the genus and
    separation parameters of the packed family."""

    points: np.ndarray  # (n, 2)
    inner_radii: np.ndarray  # (n,), all positive
    genus: int = 1
    eps: float = 0.1

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        rad = np.asarray(self.inner_radii, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or rad.shape != (pts.shape[0],):
            raise ProofLabError("points must be (n, 2) and inner_radii (n,)")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(rad))):
            raise ProofLabError("points and radii must be finite")
        if np.any(rad <= 0):
            raise ProofLabError("inner radii must be positive")
        if self.eps <= 0:
            raise ProofLabError("eps must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "inner_radii", rad)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def delta_tilde(self) -> float:
        """Surrogate for the maximal image-circle diameter: max 2 r' (1+eps).

        This stands in for the diameters of the mapped circles, which the
        abstraction does not carry; outputs that depend on it are flagged.
        """
        return float(2.0 * self.inner_radii.max() * (1.0 + self.eps))

    @classmethod
    def from_packing(cls, packing: Packing, genus: int = 1,
                     eps: float = 0.1) -> "PackedConfiguration":
        """Identity-image configuration of a packing (centers as image points,
        radii as inner radii)."""
        return cls(points=packing.centers.copy(),
                   inner_radii=packing.radii.copy(), genus=genus, eps=eps)

    @classmethod
    def from_json(cls, text: str) -> "PackedConfiguration":
        doc = json.loads(text)
        if "points" in doc:
            return cls(
                points=np.asarray(doc["points"], dtype=float),
                inner_radii=np.asarray(doc["inner_radii"], dtype=float),
                genus=int(doc.get("genus", 1)),
                eps=float(doc.get("eps", 0.1)),
            )
        # Fall back to the Packing wire format.
        return cls.from_packing(Packing.from_json(text))


def recenter_torus_points(points: np.ndarray, lattice: np.ndarray,
                          anchor: int) -> np.ndarray:
    """Replace each image point by its period-lattice translate nearest the
    anchor, so plain Euclidean distances to the anchor equal torus distances.

    Distance computations in this module are deliberately Euclidean;
    periodicity of the source points is the caller's concern, and this helper
    discharges it for a single anchor at a time.
    """
    pts = np.asarray(points, dtype=float)
    basis = np.asarray(lattice, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or basis.shape != (2, 2):
        raise ProofLabError("points must be (n, 2) and lattice (2, 2)")
    if not 0 <= anchor < pts.shape[0]:
        raise ProofLabError("anchor out of range")
    diff = pts - pts[anchor]
    coeff = np.rint(diff @ np.linalg.inv(basis)).astype(np.int64)
    out = pts.copy()
    # Nearest translate may be one lattice step off the rounded coefficients.
    best = np.full(pts.shape[0], np.inf)
    for d0 in (-1, 0, 1):
        for d1 in (-1, 0, 1):
            cand = diff - (coeff + np.array([d0, d1])) @ basis
            norm = np.einsum("ij,ij->i", cand, cand)
            take = norm < best
            best[take] = norm[take]
            out[take] = pts[anchor] + cand[take]
    return out


@dataclass(frozen=True)
class ResistanceCertificate:
    """A single test function's Dirichlet lower bound on R(u, w)."""

    pair: tuple[int, int]
    value: float
    function: np.ndarray

    def as_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "value": self.value,
            "function": self.function.tolist(),
        }


def dirichlet_lower_bound(graph: Graph, f: Sequence[float], u: int,
                          w: int) -> ResistanceCertificate:
    """(f(u) - f(w))^2 / D(f): a certified lower bound on R(u, w) for any
    non-constant f (the variational characterization takes the sup)."""
    if u == w:
        raise ProofLabError("certificate pair must be distinct")
    values = np.asarray(f, dtype=float)
    energy = dirichlet_energy(graph, values)
    if energy <= 0.0:
        raise ProofLabError("test function has zero Dirichlet energy")
    value = (values[u] - values[w]) ** 2 / energy
    return ResistanceCertificate(pair=(u, w), value=float(value), function=values)


def log_cutoff_function(graph: Graph, cfg: PackedConfiguration, u: int, w: int,
                        a: Optional[float] = None, b: Optional[float] = None,
                        c: Optional[float] = None) -> np.ndarray:
    """The clamped logarithm test function: at v != u the value is
    min(max(ln |p_v - p_u|, c), b); at u it is a.

    Defaults: a = ln r'_u, b = ln |p_w - p_u|, and c just above its lower
    limit a + 2*delta_tilde.  Requires a + 2*delta_tilde < c < b.
    """
    if u == w:
        raise ProofLabError("u and w must be distinct")
    pts = cfg.points
    if graph.n != cfg.n:
        raise ProofLabError("graph and configuration sizes differ")
    dists = np.linalg.norm(pts - pts[u], axis=1)
    if np.any(dists[np.arange(cfg.n) != u] == 0.0):
        raise ProofLabError("coincident image points with the anchor")
    if a is None:
        a = float(np.log(cfg.inner_radii[u]))
    if b is None:
        b = float(np.log(dists[w]))
    dt = cfg.delta_tilde()
    lo = a + 2.0 * dt
    if c is None:
        if lo >= b:
            raise ProofLabError(
                f"no admissible cutoff: a + 2*delta_tilde = {lo:.4g} >= b = {b:.4g}"
            )
        c = lo + 0.01 * (b - lo)
    if not (lo < c < b):
        raise ProofLabError(
            f"cutoff ordering violated: need a + 2*delta_tilde < c < b "
            f"(a={a:.4g}, delta_tilde={dt:.4g}, c={c:.4g}, b={b:.4g})"
        )
    with np.errstate(divide="ignore"):
        g = np.minimum(np.maximum(np.log(dists), c), b)
    g[u] = a
    return g


@dataclass
class BinDiagnostics:
    j: int
    size_w: int
    size_z: int
    threshold: float
    packing_bound: float  # 4 (1+eps)^2 n^{4s} |Z_j|
    bound_holds: bool
    members: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "size_w": self.size_w,
            "size_z": self.size_z,
            "threshold": self.threshold,
            "packing_bound": self.packing_bound,
            "bound_holds": self.bound_holds,
            "members": list(self.members),
        }


@dataclass
class ExtractionResult:
    subset: list[int]
    parity: str  # "even" or "odd"
    bins: list[BinDiagnostics]
    s: float
    n: int

    def as_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "parity": self.parity,
            "bins": [b.as_dict() for b in self.bins],
            "s": self.s,
            "n": self.n,
        }


def extract_separated_subset(cfg: PackedConfiguration, W: Sequence[int],
                             s: float = 1.0 / 6.0) -> ExtractionResult:
    """Bin W by inner radius (bin j holds r' in (n^{s(j-1)}, n^{sj}]), keep
    the parity class (even/odd j) with the larger total (ties to even), and
    within each kept bin greedily build a maximal subset with pairwise image
    distance >= (1+eps) n^{s(j+1)} in vertex-index order.

    Diagnostics record the per-bin packing bound 4(1+eps)^2 n^{4s} |Z_j| >=
    |W_j|, which any maximal subset must satisfy.
    """
    if not 0.0 < s < 1.0:
        raise ProofLabError("s must lie in (0, 1)")
    W = sorted(set(int(v) for v in W))
    if not W:
        raise ProofLabError("W must be nonempty")
    n = len(W)
    eps = cfg.eps
    pts = cfg.points
    rad = cfg.inner_radii

    if n == 1:
        only = W[0]
        bin_d = BinDiagnostics(j=0, size_w=1, size_z=1, threshold=0.0,
                               packing_bound=4 * (1 + eps) ** 2, bound_holds=True,
                               members=[only])
        return ExtractionResult(subset=[only], parity="even", bins=[bin_d],
                                s=s, n=1)

    log_n = math.log(n)

    def bin_index(rp: float) -> int:
        # Smallest j with r' <= n^{sj}, i.e. j = ceil(ln r' / (s ln n)).
        x = math.log(rp) / (s * log_n)
        j = math.ceil(x)
        # Half-open bins (n^{s(j-1)}, n^{sj}]: guard exact boundary hits.
        if rp <= n ** (s * (j - 1)):
            j -= 1
        return j

    bins: dict[int, list[int]] = {}
    for v in W:
        bins.setdefault(bin_index(float(rad[v])), []).append(v)

    even_total = sum(len(m) for j, m in bins.items() if j % 2 == 0)
    odd_total = sum(len(m) for j, m in bins.items() if j % 2 != 0)
    parity = "even" if even_total >= odd_total else "odd"
    want = 0 if parity == "even" else 1

    subset: list[int] = []
    diags: list[BinDiagnostics] = []
    cap = 4.0 * (1.0 + eps) ** 2 * n ** (4.0 * s)
    for j in sorted(bins):
        if j % 2 != want:
            continue
        members = bins[j]
        threshold = (1.0 + eps) * n ** (s * (j + 1))
        chosen: list[int] = []
        for v in members:
            if all(np.linalg.norm(pts[v] - pts[z]) >= threshold for z in chosen):
                chosen.append(v)
        diags.append(BinDiagnostics(
            j=j,
            size_w=len(members),
            size_z=len(chosen),
            threshold=threshold,
            packing_bound=cap * len(chosen),
            bound_holds=cap * len(chosen) >= len(members),
            members=chosen,
        ))
        subset.extend(chosen)

    return ExtractionResult(subset=subset, parity=parity, bins=diags, s=s, n=n)
