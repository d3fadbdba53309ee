import numpy as np
import pytest

from coverwalk import (
    GraphError,
    commute_difference,
    complete,
    effective_resistance,
    exact_cover_time,
    hitting_from_resistance,
    hitting_times,
    lollipop,
    matthews_bounds,
    order_by_difference_time,
    path,
    resistance_between,
    torus_grid,
    verify_commute_resistance,
    walk_tables,
)
from coverwalk.exact_walk import harmonic_number
from coverwalk.graph_core import Graph, random_connected


class TestHittingTimes:
    def test_path2(self):
        H = hitting_times(path(2))
        assert H.tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_complete3(self):
        H = hitting_times(complete(3))
        off = H[~np.eye(3, dtype=bool)]
        assert np.allclose(off, 2.0, atol=1e-12)

    def test_path3_convention(self):
        # H[u, v] = expected steps from start v to target u.
        H = hitting_times(path(3))
        assert np.allclose(H, [[0, 3, 4], [1, 0, 1], [4, 3, 0]], atol=1e-10)
        assert H[2, 0] == pytest.approx(4.0, abs=1e-10)

    def test_disconnected_rejected(self):
        with pytest.raises(GraphError):
            hitting_times(Graph(4, ((0, 1), (2, 3))))


class TestCommuteDifference:
    def test_path2(self):
        C, D = commute_difference(hitting_times(path(2)))
        assert C[0, 1] == pytest.approx(2.0)
        assert D[0, 1] == pytest.approx(0.0)

    def test_path3_endpoints(self):
        C, _ = commute_difference(hitting_times(path(3)))
        assert C[0, 2] == pytest.approx(8.0, abs=1e-10)

    def test_symmetry_antisymmetry(self, corpus_tables):
        for _, t in corpus_tables[:10]:
            assert np.allclose(t.C, t.C.T, atol=1e-9)
            assert np.allclose(t.D, -t.D.T, atol=1e-9)
            assert np.allclose(np.diag(t.H), 0.0)


class TestEffectiveResistance:
    def test_path2(self):
        assert effective_resistance(path(2))[0, 1] == pytest.approx(1.0)

    def test_path3_series(self):
        assert effective_resistance(path(3))[0, 2] == pytest.approx(2.0, abs=1e-12)

    def test_complete3_parallel(self):
        R = effective_resistance(complete(3))
        assert R[0, 1] == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_pairwise_matches_matrix(self):
        g = lollipop(4, 2)
        R = effective_resistance(g)
        for u in range(g.n):
            for v in range(g.n):
                assert resistance_between(g, u, v) == pytest.approx(
                    R[u, v], abs=1e-10)


class TestIdentities:
    def test_commute_resistance_examples(self):
        g = path(2)
        t = walk_tables(g)
        assert t.C[0, 1] == pytest.approx(2 * g.num_edges * t.R[0, 1])
        g = complete(3)
        t = walk_tables(g)
        assert t.C[0, 1] == pytest.approx(4.0, abs=1e-10)

    def test_commute_resistance_corpus(self, corpus_tables):
        for g, t in corpus_tables:
            assert verify_commute_resistance(g, t.C, t.R) <= 1e-8

    def test_hitting_from_resistance_path2(self):
        g = path(2)
        Hp = hitting_from_resistance(g, effective_resistance(g))
        assert Hp[1, 0] == pytest.approx(1.0)

    def test_hitting_from_resistance_complete3(self):
        g = complete(3)
        Hp = hitting_from_resistance(g, effective_resistance(g))
        assert np.allclose(Hp[~np.eye(3, dtype=bool)], 2.0, atol=1e-10)

    def test_hitting_from_resistance_corpus(self, corpus_tables):
        for g, t in corpus_tables:
            Hp = hitting_from_resistance(g, t.R)
            rel = np.max(np.abs(Hp - t.H) / (1.0 + np.abs(t.H)))
            assert rel <= 1e-8

    def test_triangle_equation_corpus(self, corpus_tables):
        for _, t in corpus_tables:
            D = t.D
            viol = np.max(np.abs(D[:, :, None] + D[None, :, :] - D[:, None, :]))
            assert viol <= 1e-9

    def test_resistance_triangle_corpus(self, corpus_tables):
        for _, t in corpus_tables:
            R = t.R
            # R(u, v) <= R(u, w) + R(w, v) for all triples (u, w, v).
            viol = np.max(R[:, None, :] - R[:, :, None] - R[None, :, :])
            assert viol <= 1e-9


class TestExactCoverTime:
    def test_path2(self):
        r = exact_cover_time(path(2))
        assert r.per_start.tolist() == [1.0, 1.0]
        assert r.overall == 1.0

    def test_complete3(self):
        r = exact_cover_time(complete(3))
        assert np.allclose(r.per_start, 3.0, atol=1e-12)
        assert r.overall == pytest.approx(3.0, abs=1e-12)

    def test_path3(self):
        # From an endpoint the walk only has to reach the far end (4 steps in
        # expectation); from the middle it first reaches one end (1 + ... )
        # and then crosses, giving 5.  The worst start is the middle.
        r = exact_cover_time(path(3))
        assert np.allclose(r.per_start, [4.0, 5.0, 4.0], atol=1e-12)
        assert r.overall == pytest.approx(5.0, abs=1e-12)

    def test_lollipop_frozen(self):
        r = exact_cover_time(lollipop(4, 2))
        expected = [32.43157894736842, 32.43157894736842, 32.43157894736842,
                    30.988972431077695, 22.661152882205513, 12.333333333333333]
        assert np.allclose(r.per_start, expected, atol=1e-9)

    def test_torus_grid3_start_invariant(self):
        # Vertex-transitive: every start gives the same expected cover time.
        r = exact_cover_time(torus_grid(3))
        assert np.allclose(r.per_start, r.overall, atol=1e-9)
        assert r.overall == pytest.approx(24.110848610848606, abs=1e-9)

    def test_floor(self):
        for g in (path(4), complete(5), lollipop(3, 2)):
            r = exact_cover_time(g)
            assert np.all(r.per_start >= g.n - 1)
            assert r.overall == pytest.approx(float(r.per_start.max()))

    def test_cap(self):
        with pytest.raises(GraphError):
            exact_cover_time(torus_grid(4))  # n = 16 > 12
        r = exact_cover_time(torus_grid(4), cap=16)
        assert r.overall > 16


class TestMatthews:
    def test_complete3_equality(self):
        lo, hi = matthews_bounds(hitting_times(complete(3)))
        assert lo == pytest.approx(3.0, abs=1e-12)
        assert hi == pytest.approx(3.0, abs=1e-12)

    def test_path2(self):
        lo, hi = matthews_bounds(hitting_times(path(2)))
        assert (lo, hi) == (pytest.approx(1.0), pytest.approx(1.0))

    def test_path3_endpoint_subset(self):
        lo, _ = matthews_bounds(hitting_times(path(3)), subset=[0, 2])
        assert lo == pytest.approx(4.0, abs=1e-10)  # h_1 * min H = 1 * 4

    def test_bracketing_small_graphs(self):
        for g in (path(3), path(5), complete(3), complete(5), torus_grid(3),
                  lollipop(4, 2), lollipop(3, 4)):
            H = hitting_times(g)
            lo, hi = matthews_bounds(H)
            cover = exact_cover_time(g).overall
            assert lo <= cover + 1e-9
            assert cover <= hi + 1e-9

    def test_subset_too_small(self):
        with pytest.raises(GraphError):
            matthews_bounds(hitting_times(path(3)), subset=[1])

    def test_harmonic_number(self):
        assert harmonic_number(1) == 1.0
        assert harmonic_number(3) == pytest.approx(11.0 / 6.0)


class TestOrderByDifferenceTime:
    def test_vertex_transitive_identity(self):
        t = walk_tables(torus_grid(3))
        assert np.allclose(t.D, 0.0, atol=1e-9)
        assert order_by_difference_time(t.D, 0).tolist() == list(range(9))

    def test_lollipop_tip_anchor(self):
        # lollipop(4, 3): clique 0..3 glued at 3, path 4, 5, 6; tip = 6.
        g = lollipop(4, 3)
        t = walk_tables(g)
        order = order_by_difference_time(t.D, 6).tolist()
        assert order == [6, 5, 4, 0, 1, 2, 3]
        # Path vertices all precede clique vertices.
        pos = {v: i for i, v in enumerate(order)}
        assert max(pos[v] for v in (4, 5, 6)) < min(pos[v] for v in (0, 1, 2, 3))

    def test_order_monotone_in_D(self, corpus_tables):
        for _, t in corpus_tables[:10]:
            order = order_by_difference_time(t.D, 0)
            for i in range(len(order) - 1):
                assert t.D[order[i], order[i + 1]] >= -1e-9
