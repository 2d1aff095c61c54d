"""Fusion frames, fusion bases and Riesz fusion bases in C^n."""

from ._backend import BACKEND
from .basis import (
    BasisConstant,
    BiorthogonalFamily,
    FBasisVerdict,
    FDualSystem,
    basis_constant,
    bessel_hilbert_constants,
    biorthogonal_family,
    dual_system,
    f_dual,
    is_f_basis,
    verify_biorthogonality,
)
from .core import (
    DEFAULT_TOL,
    CoefficientBundle,
    OperatorMatrix,
    Subspace,
    Tolerances,
    bundle_inner,
    bundle_norm,
    intersection_dim,
    operator_norm,
    orthonormalize,
    projector,
)
from .errors import *  # noqa: F401,F403
from .frame import (
    FrameBounds,
    FusionSystem,
    classify,
    dimension_audit,
    frame_bounds,
    is_complete,
    is_exact,
    is_minimal,
    predict_transformed_bounds,
)
from .generators import generate
from .io import parse_operator, parse_system, serialize_operator, serialize_system
from .perturbation import (
    PerturbationReport,
    biorthogonal_perturbation,
    paley_wiener_global,
    paley_wiener_subsetwise,
)
from .report import analyze
from .riesz import (
    OrthonormalKind,
    RieszCertificate,
    bessel_inequality_check,
    gram_orthonormality_check,
    orthonormal_classify,
    pythagoras_check,
    resolutions_of_identity,
    riesz_analyze,
    transform_f_basis,
)

__version__ = "0.1.0"
