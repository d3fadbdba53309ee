"""Cover times of random walks on graphs of bounded genus.

Exact walk quantities, reproducible Monte Carlo estimation, genus-dependent
cover-time bounds, Euclidean circle packings of triangulated tori, and the
Dirichlet-certificate machinery behind the lower bound.
"""

from ._accel import USE_NUMBA, backend_name
from .bounds import (
    BoundReport,
    Observation,
    aldous_upper,
    avg_degree_genus_bound,
    bound_report,
    feige_bounds,
    js_bounds,
    main_lower,
    main_upper,
)
from .exact_walk import (
    CoverResult,
    WalkTables,
    commute_difference,
    effective_resistance,
    exact_cover_time,
    hitting_from_resistance,
    hitting_times,
    matthews_bounds,
    order_by_difference_time,
    resistance_between,
    verify_commute_resistance,
    walk_tables,
)
from .graph_core import (
    Graph,
    GraphError,
    ValidationReport,
    complete,
    dirichlet_energy,
    lollipop,
    path,
    skeleton,
    torus_grid,
    tree_plus_k5,
    validate,
)
from .mc_walk import CoverTimeCapped, McConfig, McEstimate, estimate_cover_time
from .packing import (
    Packing,
    PackingError,
    grid_torus_packing,
    layout,
    pack,
    solve_radii,
    tangency_residual,
    torus_modulus,
)
from .proof_lab import (
    PackedConfiguration,
    ResistanceCertificate,
    dirichlet_lower_bound,
    extract_separated_subset,
    log_cutoff_function,
    recenter_torus_points,
)
from .surface import (
    CoveringLedger,
    SurfaceError,
    Triangulation,
    branch_point_budget,
    degree_constancy_check,
    euler_genus,
    hex_refine,
    riemann_hurwitz_residual,
    tetrahedron,
    triangular_torus,
)

__version__ = "0.1.0"
