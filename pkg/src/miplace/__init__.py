"""Sensor placement by Gaussian mutual information maximization.

Pick k of n network nodes to observe through additive white Gaussian
noise so that the observations are maximally informative about the joint
state. The objective is submodular and non-decreasing, so greedy and
lazy-greedy placement carry the classic (1 - ((k-1)/k)^k) optimality
guarantee; an exhaustive oracle and a randomized property suite verify
both the math and the implementation on demand.
"""

from .checks import (
    CheckReport,
    check_det_superadditivity,
    check_monotonicity,
    check_nemhauser_ratio,
    check_submodularity,
    check_zero_at_empty,
    run_all_checks,
)
from .covariances import (
    Graph,
    diagonal_covariance,
    gmrf_covariance,
    load_covariance,
    load_graph,
    path_graph,
    random_spd,
    ring_graph,
    save_covariance,
)
from .errors import (
    AlreadySelectedError,
    DimensionMismatchError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    InstanceTooSmallError,
    KTooLargeError,
    MatrixParseError,
    NonPositiveVarianceError,
    NotPositiveDefiniteError,
    NotSquareError,
    NotSymmetricError,
    SelfLoopError,
    SingularBlockError,
    TooManySubsetsError,
)
from .linalg import (
    CholeskyFactor,
    CovarianceMatrix,
    block_det_identity,
    build_covariance,
    cholesky,
    extend_factor,
    log_det,
    pivot_tolerance,
)
from .objective import (
    NOISE_FLOOR,
    GainEvaluator,
    ObservationModel,
    SensorSet,
    evaluate,
    sample_observations,
    sample_states,
)
from .optimizers import (
    ENUMERATION_CAP,
    PlacementResult,
    exhaustive,
    greedy,
    lazy_greedy,
    random_placement,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadySelectedError",
    "CheckReport",
    "CholeskyFactor",
    "CovarianceMatrix",
    "DimensionMismatchError",
    "DuplicateEdgeError",
    "ENUMERATION_CAP",
    "GainEvaluator",
    "Graph",
    "IndexOutOfRangeError",
    "InstanceTooSmallError",
    "KTooLargeError",
    "MatrixParseError",
    "NOISE_FLOOR",
    "NonPositiveVarianceError",
    "NotPositiveDefiniteError",
    "NotSquareError",
    "NotSymmetricError",
    "ObservationModel",
    "PlacementResult",
    "SelfLoopError",
    "SensorSet",
    "SingularBlockError",
    "TooManySubsetsError",
    "block_det_identity",
    "build_covariance",
    "check_det_superadditivity",
    "check_monotonicity",
    "check_nemhauser_ratio",
    "check_submodularity",
    "check_zero_at_empty",
    "cholesky",
    "diagonal_covariance",
    "evaluate",
    "exhaustive",
    "extend_factor",
    "gmrf_covariance",
    "greedy",
    "lazy_greedy",
    "load_covariance",
    "load_graph",
    "log_det",
    "path_graph",
    "pivot_tolerance",
    "random_placement",
    "random_spd",
    "ring_graph",
    "run_all_checks",
    "sample_observations",
    "sample_states",
    "save_covariance",
]
