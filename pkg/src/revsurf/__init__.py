"""revsurf: isometric embeddability of rotationally symmetric metrics on
the 2-sphere.

A metric ds^2 + a(s)^2 dtheta^2 on S^2, given by its profile a(s) on
[0, L], embeds isometrically in Euclidean 3-space exactly when
|a'| <= 1 everywhere; equivalently, every pole-centered disk carries
nonnegative total curvature, and every latitude circle has total geodesic
curvature of magnitude at most 2*pi. This package decides the question by
all three routes at once, constructs the explicit embedding when it
exists, and exports watertight OBJ/STL meshes.

Hot numeric kernels (order-3 jet evaluation, adaptive Simpson quadrature)
run in a compiled Cython extension when available, with a pure-Python
twin selected automatically at import; set REVSURF_PURE=1 to force the
fallback. ``backend_name()`` reports which one is active.
"""

from ._kernel import BACKEND as _BACKEND
from .corpus import random_trig_profile, trig_profile
from .curvature import (
    curvature_table, disk_integral_closed, disk_integral_quadrature,
    gauss_curvature, gauss_curvature_grid, latitude_geodesic_curvature_total,
    total_curvature, write_curvature_csv,
)
from .embeddability import (
    EMBEDDABLE, INCONCLUSIVE, NOT_EMBEDDABLE, CriterionResult,
    EmbeddabilityReport, check_derivative, check_disk, check_latitude,
    check_nonneg_curvature, check_pole_obstruction, full_report,
)
from .embedding import (
    EmbeddingMap, InducedMetricReport, embed_point, generate_mesh, psi3,
    verify_induced_metric,
)
from .errors import (
    CriteriaInconsistencyError, EvalDomainError, LexError, MeshError,
    NotEmbeddableError, ParseError, ProfileError, QuadratureError,
    RevsurfError,
)
from .expr import (
    BinOp, Call, Const, Jet3, Neg, Token, Var, eval_jet3, eval_value,
    parse, parse_expression, render, tokenize,
)
from .mesh import Mesh, write_obj, write_stl
from .profile import (
    Profile, ValidationReport, preset, preset_catalog, read_samples_csv,
)

__version__ = "0.1.0"


def backend_name():
    """Active numeric kernel: "compiled" or "pure"."""
    return _BACKEND


__all__ = [
    "__version__", "backend_name",
    # expressions
    "Token", "Jet3", "Const", "Var", "Neg", "BinOp", "Call",
    "tokenize", "parse", "parse_expression", "render", "eval_value", "eval_jet3",
    # profiles
    "Profile", "ValidationReport", "preset", "preset_catalog", "read_samples_csv",
    "random_trig_profile", "trig_profile",
    # curvature
    "gauss_curvature", "gauss_curvature_grid", "disk_integral_closed",
    "disk_integral_quadrature", "total_curvature",
    "latitude_geodesic_curvature_total", "curvature_table", "write_curvature_csv",
    # embeddability
    "EMBEDDABLE", "NOT_EMBEDDABLE", "INCONCLUSIVE", "CriterionResult",
    "EmbeddabilityReport", "check_derivative", "check_disk", "check_latitude",
    "check_pole_obstruction", "check_nonneg_curvature", "full_report",
    # embedding and meshes
    "EmbeddingMap", "InducedMetricReport", "psi3", "embed_point",
    "generate_mesh", "verify_induced_metric", "Mesh", "write_obj", "write_stl",
    # errors
    "RevsurfError", "LexError", "ParseError", "EvalDomainError", "ProfileError",
    "QuadratureError", "NotEmbeddableError", "CriteriaInconsistencyError",
    "MeshError",
]
