"""Fixed-plan transfer-matrix solvers.

Given a user-supplied sequence of distinct kernel parameters, these
routines orthonormalize the corresponding dictionary once and solve the
three problems directly from the transfer matrix: expansion (the
orthogonal projection onto the kernel span), minimum-norm inversion
(pull the expansion back to the boundary through the normalized kernel
column), and pseudo-inversion (project boundary data first, then invert).

This is the non-adaptive comparator to the greedy engine: the parameters
are whatever the caller fixed, in the order given.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegeneratePlanError, IllConditionedError
from .gram import DEFAULT_DELTA_SPAN, DEFAULT_EPS_COINCIDE, OrthoSystem, extend
from .hardy import (
    DEFAULT_R_MAX,
    DEFAULT_TRUNC,
    BoundaryFunction,
    DiscFunction,
    KernelParam,
    apply_L,
    hk_inner,
    szego,
    szego_boundary,
)

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class BasisPlan:
    """Ordered distinct parameters, all at derivative order zero."""

    params: tuple[KernelParam, ...]
    eps_coincide: float = DEFAULT_EPS_COINCIDE

    def __post_init__(self):
        params = tuple(
            p if isinstance(p, KernelParam) else KernelParam(complex(p)) for p in self.params
        )
        if not params:
            raise ValueError("plan must contain at least one parameter")
        for i, p in enumerate(params):
            if p.order != 0:
                raise ValueError("plan parameters must have derivative order 0")
            for j in range(i):
                if abs(p.q - params[j].q) <= self.eps_coincide:
                    raise DegeneratePlanError(i, f"plan entries {j} and {i} coincide")
        object.__setattr__(self, "params", params)

    @property
    def n(self) -> int:
        return len(self.params)

    @classmethod
    def from_points(cls, points, eps_coincide: float = DEFAULT_EPS_COINCIDE) -> "BasisPlan":
        return cls(tuple(KernelParam(complex(q)) for q in points), eps_coincide)


def basis_build(
    plan: BasisPlan,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
    delta_span: float = DEFAULT_DELTA_SPAN,
) -> OrthoSystem:
    """Gram-Schmidt orthonormalization of the plan's kernels, in order."""
    sys = OrthoSystem.empty()
    for i, p in enumerate(plan.params):
        sys, diag = extend(sys, szego(p, n_trunc, r_max), delta_span, param=p)
        if not diag.accepted:
            raise DegeneratePlanError(i)
    return sys


def expand_on_system(F: DiscFunction, sys: OrthoSystem) -> DiscFunction:
    """Orthogonal projection of F onto the system's span."""
    width = max(len(F.coeffs), sys.b_matrix().shape[1] if sys.n else 1)
    acc = np.zeros(width, dtype=np.complex128)
    for b in sys.B:
        acc[: len(b.coeffs)] += hk_inner(F, b) * b.coeffs
    return DiscFunction(acc)


def invert_on_system(F: DiscFunction, sys: OrthoSystem, r_max: float = DEFAULT_R_MAX) -> BoundaryFunction:
    """Minimum-norm boundary solution through the transfer matrix.

    Solves the coefficient row against the lower-triangular transfer
    matrix (never forming its inverse) and combines with the normalized
    boundary kernels.
    """
    cond = float(np.linalg.cond(sys.A)) if sys.n else 1.0
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise IllConditionedError(f"transfer matrix condition estimate {cond:.3e} exceeds {_COND_LIMIT:.0e}")
    f_b = np.array([hk_inner(F, b) for b in sys.B], dtype=np.complex128)
    # row vector y with y A = F_B, i.e. A^T y^T = F_B^T
    y = solve_triangular(sys.A, f_b, lower=True, trans="T")
    n_trunc = sys.b_matrix().shape[1] - 1
    acc = BoundaryFunction.zero(n_trunc)
    for yl, p in zip(y, sys.params):
        disc_norm = szego(p, n_trunc, r_max).norm()
        acc = acc + (yl / disc_norm) * szego_boundary(p, n_trunc, r_max)
    return acc


def basis_expand(
    F: DiscFunction,
    plan: BasisPlan,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> DiscFunction:
    """Plan-basis expansion of F (projection onto the plan's kernel span)."""
    return expand_on_system(F, basis_build(plan, n_trunc, r_max))


def basis_invert(
    F: DiscFunction,
    plan: BasisPlan,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> BoundaryFunction:
    """Minimum-norm boundary preimage whose image is the plan expansion of F."""
    return invert_on_system(F, basis_build(plan, n_trunc, r_max), r_max)


def basis_pseudo_inverse(
    F: BoundaryFunction,
    plan: BasisPlan,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> BoundaryFunction:
    """Pseudo-inversion of boundary data: project to the analytic part,
    then run the inversion pipeline on the projection."""
    return basis_invert(apply_L(F), plan, n_trunc, r_max)
