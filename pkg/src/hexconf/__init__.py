"""PL-conformal hexagonal triangulations at desk scale.

Metric and curvature computation for conformal factors on lattice balls,
quasi-harmonic analysis of factor differences, developing-map layout with
overlap detection, and a prescribed-curvature Newton solver.
"""

__version__ = "0.1.0"

from .errors import (
    DataError,
    DegenerateError,
    DomainTooSmallError,
    HexconfError,
    IncompleteDataError,
    InvalidArgumentError,
    InvalidEdgeError,
    InvalidFactorError,
    InvalidTriangleError,
    NotAcuteError,
    NotFlatError,
    NotFoundError,
    NotLinearError,
    SolverStuckError,
)
from .lattice import (
    Ball,
    Face,
    ball,
    ball_vertex_count,
    faces_in_ball,
    graph_distance,
    neighbors,
    star_faces,
    star_triangles,
    to_plane,
)
from .trigeom import (
    DeformPath,
    MeanValueCoeffs,
    Triangle,
    angle_cot_bounds,
    angle_log_derivatives,
    angles,
    deform_path,
    mean_value_coeffs,
)
from .patch import (
    ConformalPatch,
    CurvatureReport,
    check_edge_ratio_bound,
    curvature,
    difference,
    edge_length,
    from_edge_lengths,
    length_cross_ratio,
    linear_factor,
    make_patch,
    similarity_classes,
    vertex_curvature,
)
from .quasiharm import (
    PropagationReport,
    QuasiHarmonicWeights,
    TwoFunctionBall,
    extract_weights,
    find_near_constant_ball,
    harmonic_factor_bound,
    random_quasi_harmonic,
    verify_propagation,
)
from .layout import (
    LayoutResult,
    OverlapPair,
    OverlapReport,
    Similarity,
    develop,
    extract_similarity,
    find_overlap,
    overlap_radius,
)
from .solver import (
    SolveTrace,
    YamabeProblem,
    curvature_jacobian,
    solve,
)
