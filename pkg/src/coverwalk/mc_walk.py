"""Reproducible Monte Carlo estimation of expected cover times.

Each replica simulates a simple random walk from the start vertex until all
vertices are visited.  Replica r draws from counter-based stream r, so the
estimate is a pure function of (graph, config) regardless of scheduling; the
numba and numpy backends return bit-identical results.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels, _rng
from .graph_core import Graph, GraphError

Z95 = 1.959963984540054
Z99 = 2.5758293035489004


class CoverTimeCapped(RuntimeError):
    """One or more replicas hit the step cap; the estimate is invalid."""

    def __init__(self, capped: int, replicas: int, max_steps: int):
        self.capped = capped
        self.replicas = replicas
        self.max_steps = max_steps
        super().__init__(
            f"{capped} of {replicas} replicas hit max_steps={max_steps}"
        )


@dataclass(frozen=True)
class McConfig:
    seed: int
    replicas: int
    start: Union[int, str] = 0  # vertex index or "worst"
    max_steps: Optional[int] = None  # default 1000 * n^2, floor n^2

    def __post_init__(self):
        if self.replicas < 2:
            raise GraphError("replicas must be >= 2 (variance undefined otherwise)")
        if isinstance(self.start, str) and self.start != "worst":
            raise GraphError(f"start must be a vertex index or 'worst', got {self.start!r}")

    def resolved_max_steps(self, n: int) -> int:
        cap = 1000 * n * n if self.max_steps is None else int(self.max_steps)
        if cap < n * n:
            raise GraphError(f"max_steps={cap} below n^2={n * n}")
        return cap

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "replicas": self.replicas,
            "start": self.start,
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    ci95: tuple[float, float]
    replicas_used: int
    steps_capped: int
    start: int
    config: McConfig

    def ci(self, z: float) -> tuple[float, float]:
        return (self.mean - z * self.std_error, self.mean + z * self.std_error)

    @property
    def ci99(self) -> tuple[float, float]:
        return self.ci(Z99)

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "ci95": list(self.ci95),
            "replicas_used": self.replicas_used,
            "steps_capped": self.steps_capped,
            "start": self.start,
            "config": self.config.as_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True) + "\n"


def _estimate_from_start(graph: Graph, cfg: McConfig, start: int,
                         seed: int) -> McEstimate:
    n = graph.n
    indptr, indices = graph.csr
    max_steps = cfg.resolved_max_steps(n)
    keys = _rng.stream_keys(seed, cfg.replicas)
    steps = _kernels.cover_walk_batch(indptr, indices, start, n, keys, max_steps)
    capped = int(np.count_nonzero(steps < 0))
    if capped:
        raise CoverTimeCapped(capped, cfg.replicas, max_steps)
    # Integer sums keep the merge exact and order-independent.
    total = int(steps.sum())
    total_sq = sum(int(s) * int(s) for s in steps.tolist())
    r = cfg.replicas
    mean = total / r
    var = max(total_sq / r - mean * mean, 0.0) * (r / (r - 1))
    se = math.sqrt(var / r)
    return McEstimate(
        mean=mean,
        std_error=se,
        ci95=(mean - Z95 * se, mean + Z95 * se),
        replicas_used=r,
        steps_capped=0,
        start=start,
        config=cfg,
    )


def estimate_cover_time(graph: Graph, cfg: McConfig) -> McEstimate:
    """Monte Carlo estimate of E_start(C); start="worst" maximizes over all
    start vertices (matching E_G(C) = max_v E_v(C)) and reports the CI of the
    maximizing start."""
    graph.require_connected("estimate_cover_time")
    if cfg.start == "worst":
        best: Optional[McEstimate] = None
        for v in range(graph.n):
            sub_seed = _rng.mix64(_rng.stream_key(cfg.seed, 0) + v)
            est = _estimate_from_start(graph, cfg, v, sub_seed)
            if best is None or est.mean > best.mean:
                best = est
        assert best is not None
        return best
    start = int(cfg.start)
    if not 0 <= start < graph.n:
        raise GraphError(f"start vertex {start} out of range")
    return _estimate_from_start(graph, cfg, start, cfg.seed)
