"""Numerical tools for pinching conditions on algebraic curvature tensors."""

from .errors import (
    CurvlabError,
    DimensionMismatch,
    InvalidDimension,
    InvalidFrame,
    InvalidInput,
    UsageError,
)
from .frames import Frame, random_frame, rotate_frame_double_prime, rotate_frame_prime
from .models import (
    ComplexStructure,
    constant_curvature,
    flat,
    fubini_study,
    sphere,
    sphere_cross_circle,
    sphere_cross_sphere,
)
from .search import (
    FrameFunctional,
    FunctionalKind,
    MinimizationResult,
    SearchConfig,
    brute_force_extremum,
    extremize,
    min_flag_pinching,
    minimize_over_four_frames,
    minimize_sectional,
)
from .tensor import (
    CurvatureScalars,
    CurvatureTensor,
    a_sum,
    b_sum,
    condition_quantity,
    curvature_scalars,
    direct_sum,
    isotropic_quantity,
    normalized_scalar,
    project_to_curvature_space,
    random_curvature_tensor,
    restrict,
    scale,
    sectional,
)
from .verify import (
    Condition,
    ConditionReport,
    Family,
    IdentityReport,
    Verdict,
    check_condition,
    check_dim_specific_decomposition,
    check_general_decomposition,
    check_identity_2_2,
    check_identity_2_3,
    check_identity_4d,
    check_prop_main_decomposition,
    check_scalar_identity,
    eta_n,
    gamma_n,
    implication_harness,
)

__version__ = "0.1.0"
