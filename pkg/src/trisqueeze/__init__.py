"""Entanglement and squeezing of three-qubit states viewed as truncated three-mode fields."""

__version__ = "0.1.0"

from .classify import Major, StateClass, Subtype, classify_state
from .entanglement import (
    EntanglementReport,
    negativity_bipartition,
    negativity_pair,
    negativity_table,
    tripartite_negativity,
)
from .linalg import (
    ContractError,
    EigenResult,
    apply_mode_operator,
    eigen_hermitian,
    partial_trace,
    partial_transpose,
)
from .squeezing import (
    MomentTable,
    SqueezeReport,
    compute_moments,
    lambda_closed_form,
    lambda_three_mode,
    lambda_two_mode,
    quadrature_variance_scan,
    squeeze_report,
)
from .states import (
    AmplitudeMode,
    Family,
    FamilySpec,
    Measure,
    SamplerConfig,
    build_state,
    ghz_state,
    pure_density,
    sample_family,
    w_state,
)
