"""Exact homological computations over skew complete intersections.

R = k_q[x_1..x_n]/(f_1..f_c) with root-of-unity commutation parameters:
cohomology operators, Ext modules, support varieties, complexity, and
Poincare series, all over exact cyclotomic arithmetic.
"""

from .scalars import CycScalar, ConductorMismatch
from .colorcore import (
    Poly,
    QRing,
    RingSpec,
    ValidationReport,
    c_pair,
    chi,
    parse_poly,
    poly_mul,
    validate_ring,
)
from .koszul import (
    koszul_algebra,
    koszul_diff,
    koszul_mul,
    phi_expand,
    verify_diagonal_resolution,
)
from .dualpowers import verify_appendix, xi_divided_power, xi_mul
from .resolve import (
    BettiTable,
    KoszulComplex,
    ModulePresentation,
    finite_koszul_resolution,
    minimal_R_resolution,
    semifree_resolution,
)
from .operators import (
    ExtTable,
    braided_hh,
    build_operator_complex,
    ext_over_theta,
    homology_bigraded,
)
from .support import (
    ThetaAlgebra,
    arc_check,
    complexity,
    compute_t,
    is_perfect,
    poincare_series,
    support_variety,
    support_variety_full,
)

__version__ = "0.1.0"

__all__ = [
    "CycScalar",
    "ConductorMismatch",
    "Poly",
    "QRing",
    "RingSpec",
    "ValidationReport",
    "c_pair",
    "chi",
    "parse_poly",
    "poly_mul",
    "validate_ring",
    "koszul_algebra",
    "koszul_mul",
    "koszul_diff",
    "phi_expand",
    "verify_diagonal_resolution",
    "verify_appendix",
    "xi_mul",
    "xi_divided_power",
    "ModulePresentation",
    "KoszulComplex",
    "BettiTable",
    "semifree_resolution",
    "finite_koszul_resolution",
    "minimal_R_resolution",
    "ExtTable",
    "build_operator_complex",
    "homology_bigraded",
    "braided_hh",
    "ext_over_theta",
    "ThetaAlgebra",
    "compute_t",
    "support_variety",
    "support_variety_full",
    "complexity",
    "poincare_series",
    "is_perfect",
    "arc_check",
    "__version__",
]
