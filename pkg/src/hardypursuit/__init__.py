"""Sparse Szego-kernel approximation on the unit disc.

Greedy kernel expansion with maximal selection, minimum-norm operator
inversion, Moore-Penrose pseudo-inversion, fixed-plan transfer-matrix
solvers, and independent brute-force oracles for all of them.
"""

__version__ = "0.1.0"

from .basis import BasisPlan, basis_build, basis_expand, basis_invert, basis_pseudo_inverse
from .errors import (
    DegeneratePlanError,
    ExhaustedDictionaryError,
    HardyPursuitError,
    IllConditionedError,
    MalformedInputError,
    ParameterDomainError,
)
from .gram import (
    GsDiagnostics,
    OrthoSystem,
    candidate_kernel,
    extend,
    multiplicity,
)
from .hardy import (
    BoundaryFunction,
    DiscFunction,
    KernelParam,
    analytic_lift,
    apply_L,
    evaluate,
    hk_inner,
    l2_inner,
    littlewood_paley_norm2,
    plemelj_split,
    szego,
    szego_boundary,
)
from .poafd import (
    ExpansionResult,
    PoafdConfig,
    SelectionGrid,
    maximal_selection,
    poafd_expand,
    reconstruct,
    selection_objective,
)
from .solvers import (
    InversionResult,
    PseudoInverseResult,
    solve_expansion,
    solve_inversion,
    solve_pseudo_inverse,
)

__all__ = [
    "__version__",
    "BasisPlan",
    "BoundaryFunction",
    "DegeneratePlanError",
    "DiscFunction",
    "ExhaustedDictionaryError",
    "ExpansionResult",
    "GsDiagnostics",
    "HardyPursuitError",
    "IllConditionedError",
    "InversionResult",
    "KernelParam",
    "MalformedInputError",
    "OrthoSystem",
    "ParameterDomainError",
    "PoafdConfig",
    "PseudoInverseResult",
    "SelectionGrid",
    "analytic_lift",
    "apply_L",
    "basis_build",
    "basis_expand",
    "basis_invert",
    "basis_pseudo_inverse",
    "candidate_kernel",
    "evaluate",
    "extend",
    "hk_inner",
    "l2_inner",
    "littlewood_paley_norm2",
    "maximal_selection",
    "multiplicity",
    "plemelj_split",
    "poafd_expand",
    "reconstruct",
    "selection_objective",
    "solve_expansion",
    "solve_inversion",
    "solve_pseudo_inverse",
    "szego",
    "szego_boundary",
]
