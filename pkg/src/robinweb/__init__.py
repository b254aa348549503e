"""Verification toolkit for sharp first-eigenvalue bounds of the Robin
p-Laplacian on convex plane sets.

Exact radial eigenpairs on disks, transplantation onto convex polygons
through the boundary-distance function, an independent finite-element
oracle, and numerical certification of the resulting inequalities.
"""

from .geometry import (
    AnalyticBody3D,
    AsymmetryReport,
    BallGeometry,
    ConvexPolygon,
    EmptyBodyError,
    ErosionProfile,
    OptimizerError,
    PolygonError,
    UnsupportedBodyError,
    asymmetry_report,
    circle_polygon_intersection_area,
    disk_erosion_profile,
    erode,
    erosion_profile,
    fraenkel_asymmetry,
    hausdorff_to_ball,
    measure_polygon,
    quermass_w2,
    quermass_w2_lower_bound,
    random_convex_polygon,
    rectangle,
    regular_polygon,
    unit_ball_volume,
)
from .radial import (
    BracketError,
    LevelSpeed,
    MonotonicityReport,
    ODEStepError,
    ProfileConsistencyError,
    RadialCache,
    RadialEigenpair,
    constant_C,
    cut_parameter,
    dirichlet_radial,
    level_speed,
    monotonicity_check,
    reconstruct_radii,
    solve_radial,
    weak_form_residuals,
)
from .transplant import (
    NEGATIVE_BETA,
    POSITIVE_BETA,
    DegenerateRangeError,
    PerimeterMismatchError,
    ProofChainReport,
    QuadratureError,
    TransplantError,
    TransplantMap,
    TransplantQuotient,
    build_G,
    proof_chain_check,
    proof_chain_from_profile,
    quotient_from_profile,
    transplant_quotient,
)
from .fem import (
    DiscreteEigenpair,
    Mesh,
    SolverStagnationError,
    minimize_rayleigh_p,
    rayleigh_quotient,
    refine_and_extrapolate,
    solve_p2,
    triangulate,
)
from .bounds import (
    OracleValue,
    TheoremReport,
    check_T1,
    check_T2,
    check_T3,
    check_fuglede_lemma,
    check_weak_remark,
    fuglede_g,
    isoperimetric_deficit,
    polygon_eigenvalue_oracle,
)
from .cli import ConfigError, ResultRow, RunConfig, RunResult, generate_shape, run

__version__ = "0.1.0"
