"""Exact tools for factoring smooth complete fans and for telling products
of small manifolds apart by their square-zero invariants.

The package is pure Python with exact integer arithmetic throughout;
numpy is used only as an enumeration backend for the brute-force counts.
"""

from .errors import BudgetError, DomainError, InconsistentBundleError, ParseError
from .lattice import (
    IntegerMatrix,
    SmithNormalForm,
    determinant,
    extends_to_basis,
    is_primitive,
    kernel_basis,
    primitive_part,
    rank,
    random_unimodular,
    smith_normal_form,
    unimodular_inverse,
)
from .fankit import (
    Cone,
    FactorBlock,
    FactorizationResult,
    Fan,
    ValidationReport,
    blowup_at_cone,
    factorize,
    fan_from_dict,
    fan_from_json,
    fan_to_dict,
    fan_to_json,
    hirzebruch,
    is_smooth_complete,
    isomorphic,
    load_fan,
    product,
    projective_fan,
    reassemble,
    validate,
)
from .squarezero import (
    Diag,
    FourSphere,
    PQ,
    ProductManifold,
    ProjLine,
    QuadraticProfile,
    RealCensus,
    TopInvariants,
    closed_count_mod2,
    count_square_zero,
    factor_census,
    normalize,
    parse_product,
    poincare,
    product_manifold_profile,
    profile,
    real_census,
    top_invariants,
)
from .recovery import (
    InvariantBundle,
    MultiplicityVector,
    bundle,
    cancellation_check,
    multiplicities_of,
    realize,
    recover,
    recover_poincare_tail,
    same_decomposition,
)
from .selftest import CRITERION_NAMES, CriterionResult, run_all, run_criterion

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "DomainError",
    "InconsistentBundleError",
    "ParseError",
    "IntegerMatrix",
    "SmithNormalForm",
    "determinant",
    "extends_to_basis",
    "is_primitive",
    "kernel_basis",
    "primitive_part",
    "rank",
    "random_unimodular",
    "smith_normal_form",
    "unimodular_inverse",
    "Cone",
    "FactorBlock",
    "FactorizationResult",
    "Fan",
    "ValidationReport",
    "blowup_at_cone",
    "factorize",
    "fan_from_dict",
    "fan_from_json",
    "fan_to_dict",
    "fan_to_json",
    "hirzebruch",
    "is_smooth_complete",
    "isomorphic",
    "load_fan",
    "product",
    "projective_fan",
    "reassemble",
    "validate",
    "Diag",
    "FourSphere",
    "PQ",
    "ProductManifold",
    "ProjLine",
    "QuadraticProfile",
    "RealCensus",
    "TopInvariants",
    "closed_count_mod2",
    "count_square_zero",
    "factor_census",
    "normalize",
    "parse_product",
    "poincare",
    "product_manifold_profile",
    "profile",
    "real_census",
    "top_invariants",
    "InvariantBundle",
    "MultiplicityVector",
    "bundle",
    "cancellation_check",
    "multiplicities_of",
    "realize",
    "recover",
    "recover_poincare_tail",
    "same_decomposition",
    "CRITERION_NAMES",
    "CriterionResult",
    "run_all",
    "run_criterion",
    "__version__",
]
