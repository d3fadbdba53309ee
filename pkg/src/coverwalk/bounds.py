"""Closed-form cover-time bound formulas and empirical bound reports.

Asymptotic bounds (anything stated with a (1+o(1)) factor or an existential
constant) are evaluated with the o(1) term dropped and reported as
informational rows; small-n deviations are expected and not failures.
Natural logarithms throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .graph_core import Graph, GraphError
from .mc_walk import McEstimate


def feige_bounds(n: int) -> tuple[float, float]:
    """(n ln n, (4/27) n^3): the general lower/upper bounds, asymptotic form."""
    if n < 2:
        raise GraphError("feige_bounds needs n >= 2")
    return n * math.log(n), (4.0 / 27.0) * n ** 3


def js_bounds(n: int, c: float) -> tuple[float, float]:
    """(c n (ln n)^2, 6 n^2): the bounded-degree planar bounds; the constant
    c (depending only on the maximum degree) is caller-supplied."""
    if n < 2:
        raise GraphError("js_bounds needs n >= 2")
    if c <= 0:
        raise GraphError("js_bounds needs c > 0")
    return c * n * math.log(n) ** 2, 6.0 * n * n


def main_upper(n: int, g: int) -> float:
    """Genus-aware upper bound 6n(n-1) + 12(g-1)(n-1).

    Asserts agreement with the equivalent polynomial form
    (6 + (12g-18)/n - (12g-12)/n^2) n^2 to 1e-9."""
    if n < 2:
        raise GraphError("main_upper needs n >= 2")
    if g < 0:
        raise GraphError("main_upper needs g >= 0")
    value = 6.0 * n * (n - 1) + 12.0 * (g - 1) * (n - 1)
    poly = (6.0 + (12.0 * g - 18.0) / n - (12.0 * g - 12.0) / n ** 2) * n ** 2
    assert abs(value - poly) <= 1e-9 * max(1.0, abs(value)), (value, poly)
    return value


def main_lower(n: int, g: int, max_degree: int, c: float = 1.0) -> float:
    """Genus-aware lower bound c n (ln n)^2 / (Delta (g+1)).

    The constant c is existential (never quantified); callers supply it,
    default 1."""
    if n < 2 or max_degree < 1 or g < 0:
        raise GraphError("main_lower needs n >= 2, Delta >= 1, g >= 0")
    if c <= 0:
        raise GraphError("main_lower needs c > 0")
    return c * n * math.log(n) ** 2 / (max_degree * (g + 1))


def avg_degree_genus_bound(n: int, g: int) -> float:
    """Average-degree bound 6 + 12(g-1)/n for graphs of minimum genus g."""
    if n < 1:
        raise GraphError("avg_degree_genus_bound needs n >= 1")
    return 6.0 + 12.0 * (g - 1) / n


def aldous_upper(graph: Graph) -> float:
    """Average-degree cover-time bound d_bar * n * (n-1)."""
    graph.require_connected("aldous_upper")
    d_bar = 2.0 * graph.num_edges / graph.n
    return d_bar * graph.n * (graph.n - 1)


@dataclass(frozen=True)
class Observation:
    """Observed cover time: exact value, or MC mean with CI half-widths."""

    value: float
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None

    @property
    def is_exact(self) -> bool:
        return self.ci_lo is None

    @classmethod
    def exact(cls, value: float) -> "Observation":
        return cls(value=float(value))

    @classmethod
    def from_estimate(cls, est: McEstimate) -> "Observation":
        return cls(value=est.mean, ci_lo=est.ci95[0], ci_hi=est.ci95[1])

    def as_dict(self) -> dict:
        return {"value": self.value, "ci_lo": self.ci_lo, "ci_hi": self.ci_hi}


@dataclass
class BoundRow:
    name: str
    direction: str  # "upper" or "lower"
    value: float
    status: str  # "pass", "fail", "asymptotic", "skipped"
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "direction": self.direction,
            "value": self.value,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class BoundReport:
    n: int
    num_edges: int
    max_degree: int
    avg_degree: float
    genus_hint: Optional[int]
    observed: Observation
    rows: list[BoundRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "num_edges": self.num_edges,
            "max_degree": self.max_degree,
            "avg_degree": self.avg_degree,
            "genus_hint": self.genus_hint,
            "observed": self.observed.as_dict(),
            "rows": [r.as_dict() for r in self.rows],
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"n={self.n} |E|={self.num_edges} max_deg={self.max_degree} "
            f"avg_deg={self.avg_degree:.4g} genus_hint={self.genus_hint}",
            f"observed cover time: {self.observed.value:.6g}"
            + ("" if self.observed.is_exact
               else f" (95% CI [{self.observed.ci_lo:.6g}, {self.observed.ci_hi:.6g}])"),
            f"{'bound':<26}{'dir':<7}{'value':>14}  status",
        ]
        for r in self.rows:
            lines.append(f"{r.name:<26}{r.direction:<7}{r.value:>14.6g}  {r.status}"
                         + (f"  ({r.note})" if r.note else ""))
        return "\n".join(lines) + "\n"


ASYMPTOTIC_NOTE = "asymptotic: small-n deviations expected"


def _check(direction: str, bound: float, obs: Observation) -> str:
    # MC observations are compared via the relevant CI endpoint.
    if direction == "upper":
        observed = obs.value if obs.is_exact else obs.ci_hi
        return "pass" if observed <= bound else "fail"
    observed = obs.value if obs.is_exact else obs.ci_lo
    return "pass" if observed >= bound else "fail"


def bound_report(graph: Graph, observed: Observation, c_js: float = 1.0,
                 c_main: float = 1.0) -> BoundReport:
    """Evaluate every applicable bound against an observed cover time.

    Genus-dependent rows are skipped (reported, not fatal) when the graph
    carries no genus_hint."""
    n = graph.n
    degs = graph.degrees
    report = BoundReport(
        n=n,
        num_edges=graph.num_edges,
        max_degree=int(degs.max()),
        avg_degree=2.0 * graph.num_edges / n,
        genus_hint=graph.genus_hint,
        observed=observed,
    )
    f_lo, f_hi = feige_bounds(n)
    report.rows.append(BoundRow("feige_lower", "lower", f_lo, "asymptotic",
                                ASYMPTOTIC_NOTE))
    report.rows.append(BoundRow("feige_upper", "upper", f_hi, "asymptotic",
                                ASYMPTOTIC_NOTE))
    a_up = aldous_upper(graph)
    report.rows.append(BoundRow("aldous_upper", "upper", a_up,
                                _check("upper", a_up, observed)))
    g = graph.genus_hint
    if g is None:
        report.rows.append(BoundRow("main_upper", "upper", float("nan"),
                                    "skipped", "no genus_hint"))
        report.rows.append(BoundRow("main_lower", "lower", float("nan"),
                                    "skipped", "no genus_hint"))
        report.rows.append(BoundRow("avg_degree_genus", "upper", float("nan"),
                                    "skipped", "no genus_hint"))
    else:
        m_up = main_upper(n, g)
        report.rows.append(BoundRow("main_upper", "upper", m_up,
                                    _check("upper", m_up, observed)))
        m_lo = main_lower(n, g, int(degs.max()), c_main)
        report.rows.append(BoundRow(
            "main_lower", "lower", m_lo, "asymptotic",
            ASYMPTOTIC_NOTE + "; existential constant c supplied by caller"))
        d_cap = avg_degree_genus_bound(n, g)
        d_bar = 2.0 * graph.num_edges / n
        report.rows.append(BoundRow(
            "avg_degree_genus", "upper", d_cap,
            "pass" if d_bar <= d_cap else "fail",
            f"observed avg degree {d_bar:.4g}"))
    js_lo, js_hi = js_bounds(n, c_js)
    report.rows.append(BoundRow(
        "js_lower_planar", "lower", js_lo, "asymptotic",
        ASYMPTOTIC_NOTE + "; planar-case bound, shown for comparison"))
    report.rows.append(BoundRow(
        "js_upper_planar", "upper", js_hi, "asymptotic",
        ASYMPTOTIC_NOTE + "; planar-case bound, shown for comparison"))
    return report
