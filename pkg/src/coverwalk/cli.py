"""Command-line entry point.

All subcommands are file based and reproducible: outputs are JSON (CSV for
matrices on request), echo the resolved configuration, and depend only on
the inputs and flags.  Exit codes: 0 success, 1 validation/precondition
failure, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import bounds as bounds_mod
from . import exact_walk, graph_core, mc_walk, packing, proof_lab, surface
from ._accel import backend_name
from .graph_core import Graph, GraphError
from .mc_walk import CoverTimeCapped
from .packing import PackingError
from .proof_lab import ProofLabError
from .surface import SurfaceError


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> Graph:
    return Graph.from_json(_read_text(path))


def _load_tri(path: str) -> surface.Triangulation:
    return surface.Triangulation.from_json(_read_text(path))


def _emit(doc, out: Optional[str], as_text: bool = False):
    payload = doc if as_text else json.dumps(doc, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(payload)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)


def _matrix_csv(name: str, M: np.ndarray) -> str:
    # Row index is the target vertex u for H (H[u][v] = E_v T_u).
    lines = [f"# {name}; row = target u, column = start v" if name == "H"
             else f"# {name}"]
    for row in M:
        lines.append(",".join(f"{x:.12g}" for x in row))
    return "\n".join(lines) + "\n"


# --- subcommand handlers -----------------------------------------------------


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "path":
        doc = graph_core.path(args.args_int[0]).to_json()
    elif fam == "complete":
        doc = graph_core.complete(args.args_int[0]).to_json()
    elif fam == "torus-grid":
        doc = graph_core.torus_grid(args.args_int[0]).to_json()
    elif fam == "lollipop":
        doc = graph_core.lollipop(args.args_int[0], args.args_int[1]).to_json()
    elif fam == "tree-plus-k5":
        doc = graph_core.tree_plus_k5(args.args_int[0], args.args_int[1]).to_json()
    elif fam == "triangular-torus":
        doc = surface.triangular_torus(args.args_int[0]).to_json()
    elif fam == "tetrahedron":
        doc = surface.tetrahedron().to_json()
    elif fam == "hex-refine":
        if not args.tri:
            raise GraphError("gen hex-refine requires --tri")
        doc = surface.hex_refine(_load_tri(args.tri)).to_json()
    elif fam == "skeleton":
        if not args.tri:
            raise GraphError("gen skeleton requires --tri")
        doc = graph_core.skeleton(_load_tri(args.tri)).to_json()
    else:
        raise GraphError(f"unknown family {fam!r}")
    _emit(doc, args.output, as_text=True)
    return 0


def _cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    report = graph_core.validate(g)
    _emit(report.as_dict(), args.output)
    return 0 if report.ok else 1


def _cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    tables = exact_walk.walk_tables(g)
    if args.format == "csv":
        text = "".join(_matrix_csv(name, getattr(tables, name))
                       for name in ("H", "C", "D", "R"))
        _emit(text, args.output, as_text=True)
        return 0
    doc = {
        "config": {"graph": args.graph, "format": args.format},
        "n": g.n,
        "num_edges": g.num_edges,
        "H": tables.H.tolist(),
        "C": tables.C.tolist(),
        "D": tables.D.tolist(),
        "R": tables.R.tolist(),
    }
    _emit(doc, args.output)
    return 0


def _cmd_cover_exact(args) -> int:
    g = _load_graph(args.graph)
    result = exact_walk.exact_cover_time(g, cap=args.cap)
    doc = {
        "config": {"graph": args.graph, "cap": args.cap},
        "per_start": result.per_start.tolist(),
        "cover_time": result.overall,
    }
    _emit(doc, args.output)
    return 0


def _cmd_cover_mc(args) -> int:
    g = _load_graph(args.graph)
    start = args.start if args.start == "worst" else int(args.start)
    cfg = mc_walk.McConfig(seed=args.seed, replicas=args.replicas, start=start,
                           max_steps=args.max_steps)
    est = mc_walk.estimate_cover_time(g, cfg)
    doc = est.as_dict()
    doc["config"]["graph"] = args.graph
    doc["backend"] = backend_name()
    _emit(doc, args.output)
    return 0


def _cmd_bounds(args) -> int:
    g = _load_graph(args.graph)
    if args.observed == "auto":
        if g.n <= args.cap:
            obs = bounds_mod.Observation.exact(
                exact_walk.exact_cover_time(g, cap=args.cap).overall)
        else:
            cfg = mc_walk.McConfig(seed=args.seed, replicas=args.replicas,
                                   start="worst" if g.n <= 20 else 0)
            obs = bounds_mod.Observation.from_estimate(
                mc_walk.estimate_cover_time(g, cfg))
    else:
        obs = bounds_mod.Observation.exact(float(args.observed))
    report = bounds_mod.bound_report(g, obs, c_js=args.c_js, c_main=args.c_main)
    if args.format == "text":
        _emit(report.to_text(), args.output, as_text=True)
    else:
        doc = report.as_dict()
        doc["config"] = {
            "graph": args.graph, "observed": args.observed,
            "c_js": args.c_js, "c_main": args.c_main,
        }
        _emit(doc, args.output)
    return 0 if report.ok else 1


def _cmd_genus(args) -> int:
    tri = _load_tri(args.tri)
    doc = {
        "config": {"tri": args.tri},
        "n": tri.n,
        "num_edges": tri.num_edges,
        "num_faces": tri.num_faces,
        "euler_characteristic": tri.n - tri.num_edges + tri.num_faces,
        "genus": surface.euler_genus(tri),
    }
    _emit(doc, args.output)
    return 0


def _cmd_rh_check(args) -> int:
    ledger = surface.CoveringLedger.from_json(_read_text(args.ledger))
    residual = surface.riemann_hurwitz_residual(ledger)
    constancy = surface.degree_constancy_check(ledger)
    budget, cap = surface.branch_point_budget(ledger.g1, ledger.deg)
    doc = {
        "config": {"ledger": args.ledger},
        "riemann_hurwitz_residual": residual,
        "consistent": residual == 0,
        "degree_constant": constancy,
        "ramification_sum": ledger.ramification_sum,
        "branch_budget": budget,
        "branch_budget_cap": cap,
        "degree_within_lemma3": ledger.deg <= ledger.g1 + 1,
    }
    _emit(doc, args.output)
    return 0 if residual == 0 and constancy else 1


def _cmd_pack(args) -> int:
    if args.grid is not None:
        p = packing.grid_torus_packing(args.grid)
    else:
        if not args.tri:
            raise GraphError("pack requires --tri or --grid")
        tri = _load_tri(args.tri)
        p = packing.pack(tri, tol=args.tol, max_sweeps=args.max_sweeps)
    if args.svg:
        packing.to_svg(p, args.svg)
    doc = p.as_dict()
    doc["config"] = {
        "tri": args.tri, "grid": args.grid, "tol": args.tol,
        "max_sweeps": args.max_sweeps,
    }
    tau = p.modulus
    doc["modulus"] = [tau.real, tau.imag]
    doc["backend"] = backend_name()
    _emit(doc, args.output)
    return 0


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph)
    cfg = proof_lab.PackedConfiguration.from_json(_read_text(args.packing))
    u, w = (int(x) for x in args.pair.split(","))
    f = proof_lab.log_cutoff_function(g, cfg, u, w, a=args.a, b=args.b, c=args.c)
    cert = proof_lab.dirichlet_lower_bound(g, f, u, w)
    doc = {
        "config": {
            "graph": args.graph, "packing": args.packing,
            "pair": [u, w], "a": args.a, "b": args.b, "c": args.c,
        },
        "certificate": cert.value,
        "pair": [u, w],
        "function_min": float(np.min(f)),
        "function_max": float(np.max(f)),
        "delta_tilde_surrogate": cfg.delta_tilde(),
        "note": "delta_tilde derived from inner radii and eps (abstraction)",
    }
    if args.exact and g.n <= 4096:
        doc["exact_resistance"] = exact_walk.resistance_between(g, u, w)
    _emit(doc, args.output)
    return 0


def _cmd_extract(args) -> int:
    cfg = proof_lab.PackedConfiguration.from_json(_read_text(args.config))
    if args.eps is not None:
        cfg = proof_lab.PackedConfiguration(
            points=cfg.points, inner_radii=cfg.inner_radii, genus=cfg.genus,
            eps=args.eps)
    W = list(range(cfg.n)) if not args.subset else [
        int(x) for x in args.subset.split(",")]
    result = proof_lab.extract_separated_subset(cfg, W, s=args.s)
    doc = result.as_dict()
    doc["config"] = {"config": args.config, "s": args.s, "eps": cfg.eps,
                     "subset": args.subset}
    _emit(doc, args.output)
    return 0


def _cmd_verify(args) -> int:
    rows = run_verification_suite()
    width = max(len(r[0]) for r in rows)
    ok = True
    lines = []
    for name, passed, detail in rows:
        ok &= passed
        lines.append(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  {detail}")
    lines.append(f"overall: {'PASS' if ok else 'FAIL'} ({backend_name()} backend)")
    _emit("\n".join(lines) + "\n", args.output, as_text=True)
    return 0 if ok else 1


def run_verification_suite():
    """Identity suite over a built-in corpus: the walk identities, Matthews
    bracketing, and packing residuals.  Returns (name, passed, detail) rows."""
    rows = []
    corpus = [
        ("path(3)", graph_core.path(3)),
        ("path(5)", graph_core.path(5)),
        ("complete(3)", graph_core.complete(3)),
        ("complete(5)", graph_core.complete(5)),
        ("torus_grid(3)", graph_core.torus_grid(3)),
        ("lollipop(4,2)", graph_core.lollipop(4, 2)),
        ("tree_plus_k5(9,1)", graph_core.tree_plus_k5(9, 1)),
    ]
    for name, g in corpus:
        tables = exact_walk.walk_tables(g)
        D = tables.D
        tri_eq = float(np.max(np.abs(
            D[:, :, None] + D[None, :, :] - D[:, None, :])))
        rows.append((f"triangle-equation {name}", tri_eq <= 1e-9,
                     f"max |D(u,v)+D(v,w)-D(u,w)| = {tri_eq:.2e}"))
        R = tables.R
        # Indices (u, w, v): R(u,v) <= R(u,w) + R(w,v).
        tri_ineq = float(np.max(R[:, None, :] - R[:, :, None] - R[None, :, :]))
        rows.append((f"resistance-triangle {name}", tri_ineq <= 1e-9,
                     f"max violation = {tri_ineq:.2e}"))
        cr = exact_walk.verify_commute_resistance(g, tables.C, R)
        rows.append((f"commute=2|E|R {name}", cr <= 1e-8,
                     f"max relative residual = {cr:.2e}"))
        hp = exact_walk.hitting_from_resistance(g, R)
        hr = float(np.max(np.abs(hp - tables.H) / (1.0 + np.abs(tables.H))))
        rows.append((f"hitting-from-R {name}", hr <= 1e-8,
                     f"max relative residual = {hr:.2e}"))
        if g.n <= 10:
            lo, hi = exact_walk.matthews_bounds(tables.H)
            cover = exact_walk.exact_cover_time(g).overall
            rows.append((f"matthews {name}", lo <= cover + 1e-9 and cover <= hi + 1e-9,
                         f"{lo:.4g} <= {cover:.4g} <= {hi:.4g}"))
    for k in (3, 4, 5):
        tri = surface.triangular_torus(k)
        p = packing.pack(tri)
        spread = float(p.radii.max() / p.radii.min() - 1.0)
        tres = packing.tangency_residual(p, tri.edges)
        rows.append((f"packing triangular_torus({k})",
                     p.angle_residual <= 1e-10 and tres <= 1e-7 and spread <= 1e-8,
                     f"angle={p.angle_residual:.1e} tangency={tres:.1e} spread={spread:.1e}"))
    return rows


# --- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverwalk",
        description="Cover times, resistances, genus bounds and torus circle "
                    "packings for finite graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph or triangulation")
    p.add_argument("family", choices=[
        "path", "complete", "torus-grid", "lollipop", "tree-plus-k5",
        "triangular-torus", "tetrahedron", "hex-refine", "skeleton"])
    p.add_argument("args_int", nargs="*", type=int)
    p.add_argument("--tri", help="input triangulation (hex-refine, skeleton)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="validate a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("exact", help="exact H, C, D, R tables")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("cover-exact", help="exact cover time (visited-set DP)")
    p.add_argument("--graph", required=True)
    p.add_argument("--cap", type=int, default=exact_walk.DEFAULT_COVER_CAP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_cover_exact)

    p = sub.add_parser("cover-mc", help="Monte Carlo cover-time estimate")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--start", default="0",
                   help="start vertex index, or 'worst' for max over starts")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_cover_mc)

    p = sub.add_parser("bounds", help="evaluate bound formulas against an "
                                      "observed cover time")
    p.add_argument("--graph", required=True)
    p.add_argument("--observed", required=True,
                   help="a number, or 'auto' (exact DP for small n, else MC)")
    p.add_argument("--c-js", type=float, default=1.0)
    p.add_argument("--c-main", type=float, default=1.0)
    p.add_argument("--cap", type=int, default=exact_walk.DEFAULT_COVER_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=10000)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("genus", help="genus of a triangulation (Euler formula)")
    p.add_argument("--tri", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_genus)

    p = sub.add_parser("rh-check", help="Riemann-Hurwitz consistency of a "
                                        "covering ledger")
    p.add_argument("--ledger", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_rh_check)

    p = sub.add_parser("pack", help="circle-pack a genus-1 triangulation, or "
                                    "emit the explicit grid-torus packing")
    p.add_argument("--tri")
    p.add_argument("--grid", type=int, default=None,
                   help="emit grid_torus_packing(k) instead of solving")
    p.add_argument("--tol", type=float, default=packing.DEFAULT_TOL)
    p.add_argument("--max-sweeps", type=int, default=packing.MAX_SWEEPS)
    p.add_argument("--svg", help="also write an SVG of the fundamental domain")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("certify", help="Dirichlet resistance certificate from "
                                       "the log-cutoff test function")
    p.add_argument("--graph", required=True)
    p.add_argument("--packing", required=True)
    p.add_argument("--pair", required=True, help="u,w")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--exact", action="store_true",
                   help="also compute the exact resistance for comparison")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("extract", help="radius-binned maximal separated subset")
    p.add_argument("--config", required=True)
    p.add_argument("--s", type=float, default=1.0 / 6.0)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--subset", default=None, help="comma-separated vertex ids")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("verify", help="run the built-in identity suite")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, SurfaceError, ProofLabError, FileNotFoundError,
            json.JSONDecodeError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PackingError, exact_walk.SolverError, CoverTimeCapped) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
