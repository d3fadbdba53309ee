"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria are stated over the identity corpus (50 random connected graphs,
n in [4, 50]), the named generator families, and the torus-grid scaling
ranges, at the tolerances asserted below.
"""

import math

import numpy as np
import pytest

from conftest import linear_fit
from coverwalk import (
    CoveringLedger,
    McConfig,
    PackedConfiguration,
    complete,
    dirichlet_lower_bound,
    estimate_cover_time,
    exact_cover_time,
    extract_separated_subset,
    grid_torus_packing,
    hitting_from_resistance,
    hitting_times,
    log_cutoff_function,
    lollipop,
    main_upper,
    matthews_bounds,
    pack,
    path,
    recenter_torus_points,
    resistance_between,
    riemann_hurwitz_residual,
    tangency_residual,
    torus_grid,
    triangular_torus,
    verify_commute_resistance,
)
from coverwalk.graph_core import random_connected
from coverwalk.surface import branch_point_budget

HEX_MODULUS = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))


def report(name: str, passed: bool, detail: str):
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


def test_01_commute_resistance_identity(corpus_tables):
    worst = max(verify_commute_resistance(g, t.C, t.R)
                for g, t in corpus_tables)
    report("01 commute = 2|E| R on 50 random graphs",
           worst <= 1e-8, f"max relative residual {worst:.3e}")


def test_02_hitting_from_resistance(corpus_tables):
    worst = 0.0
    for g, t in corpus_tables:
        Hp = hitting_from_resistance(g, t.R)
        worst = max(worst, float(np.max(np.abs(Hp - t.H) / (1.0 + np.abs(t.H)))))
    report("02 hitting times from resistances",
           worst <= 1e-8, f"max relative deviation {worst:.3e}")


def test_03_triangle_identities(corpus_tables):
    worst_eq = 0.0
    worst_ineq = -np.inf
    for _, t in corpus_tables:
        D, R = t.D, t.R
        worst_eq = max(worst_eq, float(np.max(np.abs(
            D[:, :, None] + D[None, :, :] - D[:, None, :]))))
        worst_ineq = max(worst_ineq, float(np.max(
            R[:, None, :] - R[:, :, None] - R[None, :, :])))
    ok = worst_eq <= 1e-9 and worst_ineq <= 1e-9
    report("03 difference-time triangle equation and resistance triangle "
           "inequality", ok,
           f"max equation residual {worst_eq:.3e}, "
           f"max inequality violation {worst_ineq:.3e}")


def test_04_exact_vs_monte_carlo():
    graphs = [path(3), complete(3), torus_grid(3), lollipop(4, 2)]
    hits = 0
    trials = 0
    details = []
    for g in graphs:
        result = exact_cover_time(g)
        worst_start = int(np.argmax(result.per_start))
        exact = result.overall
        inside = 0
        for seed in range(100):
            est = estimate_cover_time(
                g, McConfig(seed=seed, replicas=10 ** 5, start=worst_start))
            lo, hi = est.ci99
            if lo <= exact <= hi:
                inside += 1
        hits += inside
        trials += 100
        details.append(f"n={g.n}: {inside}/100")
    # Sanity anchors for the exact oracle itself.
    assert exact_cover_time(complete(3)).overall == pytest.approx(3.0)
    assert exact_cover_time(path(3)).overall == pytest.approx(5.0)
    ok = all(int(d.split()[-1].split("/")[0]) >= 95 for d in details)
    report("04 exact cover time inside MC 99% CI (>=95/100 seeds)",
           ok, "; ".join(details))


def test_05_matthews_bracketing():
    graphs = [path(2), path(3), path(5), complete(3), complete(5),
              torus_grid(3), lollipop(4, 2), lollipop(3, 4)]
    ok = True
    for g in graphs:
        lo, hi = matthews_bounds(hitting_times(g))
        cover = exact_cover_time(g).overall
        ok &= lo <= cover + 1e-9 <= hi + 2e-9
    lo3, hi3 = matthews_bounds(hitting_times(complete(3)))
    equality = abs(lo3 - 3.0) <= 1e-9 and abs(hi3 - 3.0) <= 1e-9
    report("05 Matthews bracketing with equality at complete(3)",
           ok and equality,
           f"all brackets hold; complete(3) bounds ({lo3:.6g}, {hi3:.6g})")


def test_06_genus_upper_bound_torus_grids():
    details = []
    ok = True
    for k in range(3, 9):
        g = torus_grid(k)
        est = estimate_cover_time(g, McConfig(seed=k, replicas=4000))
        bound = main_upper(g.n, 1)
        hi = est.ci95[1]
        ok &= hi <= bound
        details.append(f"k={k}: CI high {hi:.0f} <= {bound:.0f}")
    assert main_upper(9, 1) == pytest.approx(432.0)
    report("06 genus-aware upper bound on torus grids", ok,
           "; ".join(details))


def test_07_lower_bound_scaling_trend():
    ks = (8, 12, 16, 24, 32)
    means = []
    scales = []
    for k in ks:
        g = torus_grid(k)
        est = estimate_cover_time(g, McConfig(seed=100 + k, replicas=10 ** 4))
        means.append(est.mean)
        n = g.n
        scales.append(n * math.log(n) ** 2)
    slope, _, r2 = linear_fit(np.log(scales), np.log(means))
    ratios = [m / s for m, s in zip(means, scales)]
    spread = max(ratios) / min(ratios)
    ok = 0.8 <= slope <= 1.2 and spread < 3.0
    report("07 cover time scales like n (ln n)^2 on torus grids", ok,
           f"fitted exponent {slope:.3f} (R^2 {r2:.3f}), "
           f"ratio spread {spread:.2f}x")


def test_08_packing_solver_triangular_tori():
    ok = True
    worst = {"spread": 0.0, "angle": 0.0, "tangency": 0.0, "modulus": 0.0}
    for k in range(3, 13):
        tri = triangular_torus(k)
        p = pack(tri)
        spread = float(p.radii.max() / p.radii.min() - 1.0)
        tres = tangency_residual(p, tri.edges)
        mdev = abs(p.modulus - HEX_MODULUS)
        worst["spread"] = max(worst["spread"], spread)
        worst["angle"] = max(worst["angle"], p.angle_residual)
        worst["tangency"] = max(worst["tangency"], tres)
        worst["modulus"] = max(worst["modulus"], mdev)
        ok &= (spread <= 1e-8 and p.angle_residual <= 1e-10
               and tres <= 1e-7 and mdev <= 1e-6)
    report("08 torus packings converge to the hexagonal packing", ok,
           f"worst spread {worst['spread']:.1e}, angle {worst['angle']:.1e}, "
           f"tangency {worst['tangency']:.1e}, modulus dev {worst['modulus']:.1e}")


def test_09_covering_arithmetic():
    ledgers = [
        CoveringLedger(g1=0, g2=0, deg=2, fibers=((2,), (2,), (1, 1))),
        CoveringLedger(g1=2, g2=0, deg=3,
                       fibers=((3,), (3,), (3,), (3,), (1, 1, 1))),
        CoveringLedger(g1=1, g2=1, deg=2, fibers=((1, 1),)),
    ]
    residuals_ok = all(riemann_hurwitz_residual(led) == 0 for led in ledgers)
    budget_ok = True
    for g in range(101):
        for deg in range(1, g + 2):
            budget, cap = branch_point_budget(g, deg)
            budget_ok &= budget == 2 * deg - (2 - 2 * g) and budget <= cap == 4 * g
    report("09 covering-ledger arithmetic", residuals_ok and budget_ok,
           "3 canonical ledgers consistent; budget formula and 4g cap hold "
           "for g <= 100, deg <= g+1")


def test_10_certificate_validity_and_growth():
    rng = np.random.default_rng(314)
    checked = 0
    valid = True
    while checked < 1000:
        n = int(rng.integers(4, 51))
        g = random_connected(n, int(rng.integers(0, 2 * n)),
                             int(rng.integers(10 ** 9)))
        for _ in range(10):
            f = rng.normal(size=n)
            u, w = rng.choice(n, size=2, replace=False)
            cert = dirichlet_lower_bound(g, f, int(u), int(w))
            valid &= cert.value <= resistance_between(g, int(u), int(w)) + 1e-9
            checked += 1
            if checked == 1000:
                break
    ks = (8, 12, 16, 24, 32)
    certs = []
    for k in ks:
        g = torus_grid(k)
        p = grid_torus_packing(k)
        pts = recenter_torus_points(p.centers, p.lattice, 0)
        cfg = PackedConfiguration(points=pts, inner_radii=p.radii)
        w = (k // 2) * k + k // 2
        f = log_cutoff_function(g, cfg, 0, w)
        cert = dirichlet_lower_bound(g, f, 0, w)
        valid &= cert.value <= resistance_between(g, 0, w) + 1e-9
        certs.append(cert.value)
    slope, _, r2 = linear_fit([math.log(k * k) for k in ks], certs)
    ok = valid and slope > 0 and r2 >= 0.9
    report("10 Dirichlet certificates valid and log-growing on torus grids",
           ok, f"1000 random certificates valid; trend slope {slope:.4f} "
               f"per ln n, R^2 {r2:.3f}")


def test_11_subset_extraction():
    rng = np.random.default_rng(2718)
    ok = True
    for _ in range(100):
        n = int(rng.integers(20, 200))
        cfg = PackedConfiguration(
            points=rng.random((n, 2)),
            inner_radii=10.0 ** rng.uniform(-3, -1, size=n),
            eps=0.1,
        )
        result = extract_separated_subset(cfg, range(n))
        s, N = result.s, result.n
        log_n = math.log(N)

        def bin_index(rp):
            j = math.ceil(math.log(rp) / (s * log_n))
            if rp <= N ** (s * (j - 1)):
                j -= 1
            return j

        for b in result.bins:
            ok &= b.bound_holds
            pts = cfg.points
            for i, u in enumerate(b.members):
                for w in b.members[i + 1:]:
                    ok &= float(np.linalg.norm(pts[u] - pts[w])) >= b.threshold
            members = [v for v in range(n)
                       if bin_index(float(cfg.inner_radii[v])) == b.j]
            ok &= len(members) == b.size_w
            for v in members:
                if v not in b.members:
                    ok &= any(np.linalg.norm(pts[v] - pts[z]) < b.threshold
                              for z in b.members)
    report("11 radius-binned subset extraction", ok,
           "packing bound, pairwise separation and per-bin maximality hold "
           "on 100 random configurations")
