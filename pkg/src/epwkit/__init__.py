"""Exact computations with Lagrangian data: EPW strata, GM data, quadric fibers and correspondences."""
from .correspondences import (
    cycle_decomposition_check,
    hilbert_function_of_ideal,
    line_transform_data,
    scroll_fiber,
    z_fiber,
)
from .epw import dual_stratify, dual_stratum_of, sextic_on_line, stratify, stratum_of
from .fields import GF, QQ, FieldSpec, make_field
from .gm import build_gm, hilbert_polynomial, plucker_quadric, quadric_at, sample_points
from .ideals import HomogeneousIdeal
from .kernels import BACKEND
from .lagrangian import (
    LagrangianInstance,
    decomposable_search,
    dual,
    graph_lagrangian,
    random_instance,
    validate_lagrangian,
)
from .quadric_fibers import (
    double_cover_fiber,
    rho1_fiber_classify,
    sigma1_conic,
    splitting_section,
    two_spaces_through,
)

__all__ = [
    "BACKEND",
    "FieldSpec",
    "GF",
    "HomogeneousIdeal",
    "LagrangianInstance",
    "QQ",
    "build_gm",
    "cycle_decomposition_check",
    "decomposable_search",
    "double_cover_fiber",
    "dual",
    "dual_stratify",
    "dual_stratum_of",
    "graph_lagrangian",
    "hilbert_function_of_ideal",
    "hilbert_polynomial",
    "line_transform_data",
    "make_field",
    "plucker_quadric",
    "quadric_at",
    "random_instance",
    "rho1_fiber_classify",
    "sample_points",
    "scroll_fiber",
    "sextic_on_line",
    "sigma1_conic",
    "splitting_section",
    "stratify",
    "stratum_of",
    "two_spaces_through",
    "validate_lagrangian",
    "z_fiber",
]
