"""Copositive extreme rays, minimal zeros and maximal faces of CP(n)."""
from .constructions import (
    CirculantParams,
    LiftResult,
    build_circulant,
    build_lift,
    check_lift_hypotheses,
    circulant_minimal_zeros,
    index_sets,
    lift_matrix,
    palindromic_u,
    verify_zeroset_shape,
)
from .faces import (
    ExposednessMethod,
    FaceDescriptor,
    RayCertificate,
    certify_exposed,
    certify_extreme,
    face_dimension,
    maximal_face_of,
    support_criterion,
)
from .graph import (
    CliqueCover,
    ZerosGraph,
    build_graph,
    j_set,
    m_sets,
    maximal_cliques,
    s_of_tau,
    zero_graph,
    zero_set_contains,
)
from .linalg import (
    SymMatrix,
    TolerancePolicy,
    kernel_basis,
    principal_submatrix,
    rank_of_family,
    svec,
)
from .pipelines import BoundsReport, bounds_report
from .zeros import (
    MinimalZeroCatalog,
    NormalizedZero,
    Verdict,
    enumerate_minimal_zeros,
    is_copositive,
    quadratic_form,
    verify_zero,
)

__version__ = "0.1.0"
