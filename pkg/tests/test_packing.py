import cmath
import json
import math

import numpy as np
import pytest

from coverwalk import (
    Packing,
    PackingError,
    SurfaceError,
    grid_torus_packing,
    layout,
    pack,
    solve_radii,
    tangency_residual,
    tetrahedron,
    torus_grid,
    torus_modulus,
    triangular_torus,
)
from coverwalk.packing import angle_sums, to_svg
from coverwalk.surface import Triangulation, hex_refine

HEX_MODULUS = cmath.exp(1j * math.pi / 3)


def star_subdivide(tri: Triangulation, face_index: int = 0) -> Triangulation:
    """Split one face into three by an interior vertex (keeps the surface
    closed and oriented but breaks vertex-transitivity)."""
    a, b, c = tri.faces[face_index]
    x = tri.n
    faces = (tri.faces[:face_index] + tri.faces[face_index + 1:]
             + ((a, b, x), (b, c, x), (c, a, x)))
    return Triangulation(tri.n + 1, faces)


class TestSolveRadii:
    def test_uniform_on_triangular_torus(self):
        for k in (3, 5):
            r = solve_radii(triangular_torus(k))
            assert r.max() == pytest.approx(1.0)
            assert r.max() / r.min() - 1.0 <= 1e-8

    def test_hex_refined_torus(self):
        tri = hex_refine(triangular_torus(3))
        r = solve_radii(tri)
        sums = angle_sums(tri, r)
        assert np.max(np.abs(sums - 2 * math.pi)) <= 1e-10

    def test_angle_sums_scale_invariant(self):
        tri = triangular_torus(4)
        rng = np.random.default_rng(1)
        r = 0.5 + rng.random(tri.n)
        assert np.allclose(angle_sums(tri, r), angle_sums(tri, 2.0 * r),
                           atol=1e-12)

    def test_gauss_bonnet_any_radii(self):
        # On a torus the angle-sum defects cancel for arbitrary positive
        # radii (chi = 0).
        tri = triangular_torus(4)
        rng = np.random.default_rng(2)
        for _ in range(5):
            r = 0.1 + rng.random(tri.n)
            defect = float(np.sum(angle_sums(tri, r) - 2 * math.pi))
            assert abs(defect) <= 1e-9

    def test_sphere_rejected(self):
        with pytest.raises(SurfaceError):
            solve_radii(tetrahedron())

    def test_bad_tol_rejected(self):
        with pytest.raises(PackingError):
            solve_radii(triangular_torus(3), tol=0.0)

    def test_unique_up_to_scale(self):
        tri = star_subdivide(triangular_torus(3))
        r1 = solve_radii(tri)
        rng = np.random.default_rng(3)
        r2 = solve_radii(tri, init=1.0 + 0.5 * rng.random(tri.n))
        assert np.max(np.abs(r1 - r2)) <= 1e-6


class TestPackEndToEnd:
    def test_triangular_tori(self):
        for k in (3, 4, 6):
            tri = triangular_torus(k)
            p = pack(tri)
            assert p.angle_residual <= 1e-10
            assert tangency_residual(p, tri.edges) <= 1e-7
            assert abs(p.modulus - HEX_MODULUS) <= 1e-6

    def test_irregular_torus(self):
        tri = star_subdivide(triangular_torus(4))
        p = pack(tri)
        assert p.angle_residual <= 1e-10
        assert tangency_residual(p, tri.edges) <= 1e-7
        # Radii are genuinely non-uniform here.
        assert p.radii.max() / p.radii.min() > 1.01
        v1, v2 = p.lattice
        assert abs(v1[0] * v2[1] - v1[1] * v2[0]) > 0

    def test_layout_gauge(self):
        tri = triangular_torus(3)
        centers, lattice = layout(tri, solve_radii(tri))
        assert np.allclose(centers[0], [0.0, 0.0], atol=1e-12)
        # First edge of vertex 0 points along +x.
        det = lattice[0][0] * lattice[1][1] - lattice[0][1] * lattice[1][0]
        assert abs(det) > 0

    def test_unconverged_radii_rejected(self):
        tri = triangular_torus(3)
        bad = np.linspace(0.3, 1.0, tri.n)
        with pytest.raises(PackingError):
            layout(tri, bad)


class TestGridTorusPacking:
    def test_example_values(self):
        p = grid_torus_packing(3)
        assert p.radii.shape == (9,)
        assert np.allclose(p.radii, 1.0 / 6.0)
        assert np.allclose(p.lattice, np.eye(2))
        assert p.kind == "grid"

    def test_tangency_exact(self):
        k = 4
        p = grid_torus_packing(k)
        g = torus_grid(k)
        assert tangency_residual(p, g.edges) <= 1e-12

    def test_radii_vanish(self):
        radii = [grid_torus_packing(k).radii.max() for k in (3, 6, 12, 24)]
        assert all(b < a for a, b in zip(radii, radii[1:]))
        assert radii[-1] == pytest.approx(1.0 / 48.0)

    def test_modulus_square(self):
        assert abs(grid_torus_packing(3).modulus - 1j) <= 1e-12


class TestTorusModulus:
    def test_square_lattice(self):
        assert abs(torus_modulus(np.eye(2)) - 1j) <= 1e-12
        assert abs(torus_modulus(2 * np.eye(2)) - 1j) <= 1e-12

    def test_reduction(self):
        # A sheared square lattice reduces back to the square modulus.
        assert abs(torus_modulus(np.array([[1.0, 0.0], [3.0, 1.0]])) - 1j) <= 1e-12

    def test_hexagonal(self):
        lat = np.array([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        assert abs(torus_modulus(lat) - HEX_MODULUS) <= 1e-12

    def test_fundamental_domain(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            lat = rng.normal(size=(2, 2))
            if abs(np.linalg.det(lat)) < 1e-3:
                continue
            tau = torus_modulus(lat)
            assert tau.imag > 0
            assert abs(tau) >= 1 - 1e-9
            assert -0.5 - 1e-9 <= tau.real <= 0.5 + 1e-9

    def test_degenerate_rejected(self):
        with pytest.raises(PackingError):
            torus_modulus(np.array([[1.0, 0.0], [2.0, 0.0]]))


class TestSerialization:
    def test_json_roundtrip(self):
        p = pack(triangular_torus(3))
        text = p.to_json()
        p2 = Packing.from_json(text)
        assert np.allclose(p2.radii, p.radii)
        assert np.allclose(p2.centers, p.centers)
        assert np.allclose(p2.lattice, p.lattice)
        assert p2.to_json() == text

    def test_svg_export(self, tmp_path):
        p = grid_torus_packing(3)
        out = tmp_path / "packing.svg"
        to_svg(p, str(out))
        content = out.read_text()
        assert content.startswith("<svg") or "<svg" in content
        assert content.count("<circle") == 9
