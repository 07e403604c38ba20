"""Finite compact quantum groups as structure tensors, with cocycle twisting."""

from .cocycle import (
    DualCocycle,
    QuotientMorphism,
    from_bicharacter,
    induce,
    trivial_cocycle,
    v_functional,
    verify_cocycle,
    verify_morphism,
    w_functional,
)
from .core import (
    AxiomReport,
    DualFunctional,
    FiniteHopfStarAlgebra,
    ScalarContext,
    convolution_inverse,
    convolve,
    dual_star,
    iterated_coproduct,
    pair,
    verify_hopf_axioms,
)
from .corep import (
    SpectralDecomposition,
    UnitaryCorep,
    ad_v,
    decompose_corep,
    direct_sum,
    pi_u,
    regular_corep,
    spectral_projection,
    trivial_corep,
    verify_corep,
)
from .deform import (
    CategoryReport,
    DeformationResult,
    RTwistedVolume,
    SpectralTriple,
    check_membership,
    check_volume_preservation,
    deform_triple,
    equivariance_residual,
    extract_block_form,
    intertwine_check,
    r_sigma,
    rho_sigma,
    twisted_operator_product,
    twisted_operator_star,
)
from .groups import (
    FiniteGroupData,
    cyclic_group,
    dihedral_group,
    direct_product,
    function_algebra,
    group_algebra,
    klein_four_group,
    symmetric_group_3,
    trivial_group,
)
from .peterweyl import (
    HaarState,
    PeterWeylBlock,
    PeterWeylData,
    decompose,
    haar_state,
)
from .report import CheckRecord, VerificationReport
from .suite import run_paper_suite
from .twist import (
    TwistResult,
    f_matrix_relation,
    haar_invariance,
    roundtrip,
    twist_algebra,
    twist_corep,
)

__all__ = [
    "AxiomReport",
    "CategoryReport",
    "CheckRecord",
    "DeformationResult",
    "DualCocycle",
    "DualFunctional",
    "FiniteGroupData",
    "FiniteHopfStarAlgebra",
    "HaarState",
    "PeterWeylBlock",
    "PeterWeylData",
    "QuotientMorphism",
    "RTwistedVolume",
    "ScalarContext",
    "SpectralDecomposition",
    "SpectralTriple",
    "TwistResult",
    "UnitaryCorep",
    "VerificationReport",
    "ad_v",
    "check_membership",
    "check_volume_preservation",
    "convolution_inverse",
    "convolve",
    "cyclic_group",
    "decompose",
    "decompose_corep",
    "deform_triple",
    "dihedral_group",
    "direct_product",
    "direct_sum",
    "dual_star",
    "equivariance_residual",
    "extract_block_form",
    "f_matrix_relation",
    "from_bicharacter",
    "function_algebra",
    "group_algebra",
    "haar_invariance",
    "haar_state",
    "induce",
    "intertwine_check",
    "iterated_coproduct",
    "klein_four_group",
    "pair",
    "pi_u",
    "r_sigma",
    "regular_corep",
    "rho_sigma",
    "roundtrip",
    "run_paper_suite",
    "spectral_projection",
    "symmetric_group_3",
    "trivial_cocycle",
    "trivial_corep",
    "trivial_group",
    "twist_algebra",
    "twist_corep",
    "twisted_operator_product",
    "twisted_operator_star",
    "v_functional",
    "verify_cocycle",
    "verify_corep",
    "verify_hopf_axioms",
    "verify_morphism",
    "w_functional",
]

__version__ = "0.1.0"
