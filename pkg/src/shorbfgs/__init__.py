"""Metric-rescaling algorithms for nonsmooth convex optimization:
Shor space-dilation and unit-step BFGS separators, the ellipsoid
baseline, and linesearch-free BFGS minimization."""

from .errors import (
    CurvatureViolation,
    DegenerateCurvature,
    DegenerateDirection,
    DegenerateGradient,
    InvalidDilation,
    NonDescentDirection,
    OracleDisagreement,
    RescalingError,
    ZeroDirection,
)
from .minimizers import (
    fixed_point_bfgs_descent,
    fixed_point_bfgs_nonsmooth,
    linesearch_free_bfgs,
)
from .objectives import (
    QuadraticObjective,
    SmoothObjective,
    SupportFunctionObjective,
)
from .oracles import (
    BallOracle,
    EllipsoidOracle,
    FiniteSetOracle,
    MaxQuadSubdiff,
    SupportOracle,
    transformed_argmin,
)
from .separators import (
    bfgs_separate,
    bfgs_separate_hull,
    cholesky_bfgs_separate,
    ellipsoid_separate,
    randomized_shor_separate,
    segment_separate,
    shor_separate,
    shor_separate_ellipsoid,
    unit_ball_iteration,
)
from .trace import (
    MinimizerConfig,
    Outcome,
    RunTrace,
    SeparatorConfig,
)
from .updates import (
    RescalingTransform,
    TransformKind,
    bfgs_update,
    bfgs_update_factored,
    bfgs_w_matrix,
    ellipsoid_update,
    shor_dilation,
)

__version__ = "0.1.0"
