"""
xmodkit: crossed modules, Gr-categories and extensions of finite groups.

Provides:
- Finite groups by Cayley table, homomorphisms, subgroups and quotients
- Crossed modules, their strict Gr-categories and the round trip between them
- Group cohomology with coefficients in finite abelian groups
- Reduction of a crossed module to (pi0, pi1, k) and the obstruction psi*k
- Construction and classification of extensions of the type of a crossed module
- A brute-force oracle and a theorem battery cross-checking the classification
"""

from .catalog import builtin_crossed_module, crossed_module_battery, klein_group, quaternion_group
from .checks import BatteryReport, CheckStatus, TheoremChecker, build_acceptance_battery
from .cohomology import (
    Cochain,
    GModule,
    are_cohomologous,
    coboundary,
    h2_representatives,
    h_order,
    is_cocycle,
    pullback_cochain,
    pushforward_cochain,
    solve_coboundary,
)
from .config import TaskSpec, XmodkitSettings, load_settings
from .crossed import CrossedModule, DerivedData, XModMorphism, derive, from_normal_subgroup, validate, validate_morphism
from .errors import (
    BudgetExceeded,
    CohomologyError,
    CrossedModuleError,
    ExtensionError,
    FactorSetError,
    GrCategoryError,
    GroupAxiomError,
    InputError,
    ReductionError,
    XmodkitError,
)
from .extensions import (
    Extension,
    FactorSet,
    are_equivalent,
    classify,
    crossed_product,
    extension_from_factor_set,
    extension_from_functor,
    obstruction,
    validate_extension,
)
from .grcat import (
    GrFunctor,
    StrictGrCat,
    are_strong_homotopic,
    from_crossed_module,
    to_crossed_module,
    validate_category,
    validate_functor,
)
from .groups import FiniteGroup, GroupHom, Quotient, Subgroup, make_cyclic, quotient, symmetric_group
from .observability import configure_logging, emit_metric, init_observability, trace_operation
from .oracle import count_unreduced_functor_classes, enumerate_extensions_bruteforce, schreier_check
from .reduction import ReducedGrCat, ReducedGrFunctor, Stick, choose_stick, functor_obstruction, reduce, realize_functor

__version__ = "1.0.0"

__all__ = [
    # Groups
    "FiniteGroup",
    "GroupHom",
    "Quotient",
    "Subgroup",
    "make_cyclic",
    "quotient",
    "symmetric_group",
    "klein_group",
    "quaternion_group",
    # Crossed modules
    "CrossedModule",
    "DerivedData",
    "XModMorphism",
    "derive",
    "from_normal_subgroup",
    "validate",
    "validate_morphism",
    "builtin_crossed_module",
    "crossed_module_battery",
    # Gr-categories
    "GrFunctor",
    "StrictGrCat",
    "are_strong_homotopic",
    "from_crossed_module",
    "to_crossed_module",
    "validate_category",
    "validate_functor",
    # Cohomology
    "Cochain",
    "GModule",
    "are_cohomologous",
    "coboundary",
    "h2_representatives",
    "h_order",
    "is_cocycle",
    "pullback_cochain",
    "pushforward_cochain",
    "solve_coboundary",
    # Reduction
    "ReducedGrCat",
    "ReducedGrFunctor",
    "Stick",
    "choose_stick",
    "functor_obstruction",
    "realize_functor",
    "reduce",
    # Extensions
    "Extension",
    "FactorSet",
    "are_equivalent",
    "classify",
    "crossed_product",
    "extension_from_factor_set",
    "extension_from_functor",
    "obstruction",
    "validate_extension",
    # Oracle and checks
    "BatteryReport",
    "CheckStatus",
    "TheoremChecker",
    "build_acceptance_battery",
    "count_unreduced_functor_classes",
    "enumerate_extensions_bruteforce",
    "schreier_check",
    # Config
    "TaskSpec",
    "XmodkitSettings",
    "load_settings",
    # Observability
    "configure_logging",
    "emit_metric",
    "init_observability",
    "trace_operation",
    # Errors
    "BudgetExceeded",
    "CohomologyError",
    "CrossedModuleError",
    "ExtensionError",
    "FactorSetError",
    "GrCategoryError",
    "GroupAxiomError",
    "InputError",
    "ReductionError",
    "XmodkitError",
]
