"""Numerical conformal curvature analysis.

The package splits into a small dependency chain: exact multilinear
algebra (tensor_core, curvature_algebra), direction spectra (spectral),
finite geometry on coordinate patches (chart_geometry, models), the
structural classifier (classifier), and a command line front end (cli).
Everything below re-exports the public names so library users can work
from the package root.
"""

from .tensor_core import (
    TangentVector,
    InnerProduct,
    SelfAdjointEndo,
    HermitianStructure,
    CurvatureTensor,
    symmetry_residual,
    orthonormal_frame,
    transform_tensor,
    self_adjoint_residual,
    skew_adjoint_residual,
    hermitian_residuals,
    max_abs,
)
from .curvature_algebra import (
    CurvatureDecomposition,
    r0,
    ricci_scalar,
    l_tensor,
    weyl_decompose,
    a_psi,
    a_phi,
    draw_act_generators,
    sum_psi_generators,
    random_act,
    complex_space_form_act,
    weyl_constants,
)
from .spectral import (
    SpectralProfile,
    OssermanReport,
    jacobi_operator,
    complement_basis,
    reduced_jacobi,
    spectral_profile,
    unit_directions,
    structured_directions,
    trace_check,
    osserman_test,
)
from .chart_geometry import (
    DomainError,
    Box,
    Ball,
    MetricChart,
    christoffel,
    riemann_at,
    covariant_derivative_riemann,
    cyclic_bianchi_residual,
    second_bianchi_residual,
    covariant_derivative_endo,
    conformal_rescale,
    default_probe_points,
)
from .classifier import (
    VerdictKind,
    Verdict,
    ToleranceConfig,
    ClassifyConfig,
    ChartReport,
    Eq2aCheck,
    DegenerateInputError,
    ReconstructionFailedError,
    check_eq2a,
    recover_phi,
    consensus_profile,
    classify_point,
    classify_act,
    parity_consistency,
    classify_chart,
)
from .models import (
    standard_phi,
    flat_chart,
    sphere_chart,
    hyperbolic_chart,
    fubini_study_chart,
    complex_hyperbolic_chart,
    perturbed_flat_chart,
    polynomial_metric_chart,
    ModelSpec,
    build_model,
    CHART_MODELS,
    ALGEBRAIC_MODELS,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # tensor_core
    "TangentVector",
    "InnerProduct",
    "SelfAdjointEndo",
    "HermitianStructure",
    "CurvatureTensor",
    "symmetry_residual",
    "orthonormal_frame",
    "transform_tensor",
    "self_adjoint_residual",
    "skew_adjoint_residual",
    "hermitian_residuals",
    "max_abs",
    # curvature_algebra
    "CurvatureDecomposition",
    "r0",
    "ricci_scalar",
    "l_tensor",
    "weyl_decompose",
    "a_psi",
    "a_phi",
    "draw_act_generators",
    "sum_psi_generators",
    "random_act",
    "complex_space_form_act",
    "weyl_constants",
    # spectral
    "SpectralProfile",
    "OssermanReport",
    "jacobi_operator",
    "complement_basis",
    "reduced_jacobi",
    "spectral_profile",
    "unit_directions",
    "structured_directions",
    "trace_check",
    "osserman_test",
    # chart_geometry
    "DomainError",
    "Box",
    "Ball",
    "MetricChart",
    "christoffel",
    "riemann_at",
    "covariant_derivative_riemann",
    "cyclic_bianchi_residual",
    "second_bianchi_residual",
    "covariant_derivative_endo",
    "conformal_rescale",
    "default_probe_points",
    # classifier
    "VerdictKind",
    "Verdict",
    "ToleranceConfig",
    "ClassifyConfig",
    "ChartReport",
    "Eq2aCheck",
    "DegenerateInputError",
    "ReconstructionFailedError",
    "check_eq2a",
    "recover_phi",
    "consensus_profile",
    "classify_point",
    "classify_act",
    "parity_consistency",
    "classify_chart",
    # models
    "standard_phi",
    "flat_chart",
    "sphere_chart",
    "hyperbolic_chart",
    "fubini_study_chart",
    "complex_hyperbolic_chart",
    "perturbed_flat_chart",
    "polynomial_metric_chart",
    "ModelSpec",
    "build_model",
    "CHART_MODELS",
    "ALGEBRAIC_MODELS",
]
