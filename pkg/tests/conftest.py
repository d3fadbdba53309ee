"""Shared fixtures: the random connected-graph corpus and fitting helpers."""

import numpy as np
import pytest

from coverwalk import graph_core


def make_corpus(count: int, n_lo: int = 4, n_hi: int = 50, seed: int = 2024):
    """Deterministic corpus of random connected graphs with n in [n_lo, n_hi]."""
    rng = np.random.default_rng(seed)
    graphs = []
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        extra = int(rng.integers(0, 2 * n))
        graphs.append(graph_core.random_connected(n, extra, seed + 7919 * i))
    return graphs


@pytest.fixture(scope="session")
def corpus50():
    """The 50-graph identity corpus, n in [4, 50]."""
    return make_corpus(50)


@pytest.fixture(scope="session")
def corpus_tables(corpus50):
    """Walk tables for the identity corpus, computed once per session."""
    from coverwalk import exact_walk

    return [(g, exact_walk.walk_tables(g)) for g in corpus50]


def linear_fit(x, y):
    """Least-squares slope, intercept and R^2 of y against x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), r2
