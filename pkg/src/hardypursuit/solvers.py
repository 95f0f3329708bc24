"""End-to-end adaptive solvers built on the greedy engine.

Expansion works directly in the disc space.  Inversion maps each
orthonormal function through the inverse operator by swapping every
(multiple) kernel atom for its boundary representative with unchanged
Gram-Schmidt coefficients; because the boundary kernel carries the same
nonnegative coefficients, that substitution is exactly the analytic lift
of the coefficient vector, so no linear system is ever re-solved.
Pseudo-inversion projects two-sided boundary data onto its analytic part
first and then follows the inversion pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gram import OrthoSystem
from .hardy import (
    BoundaryFunction,
    DiscFunction,
    analytic_lift,
    apply_L,
    plemelj_split,
)
from .poafd import ExpansionResult, PoafdConfig, poafd_expand


@dataclass(frozen=True)
class InversionResult:
    """Expansion of F together with its boundary preimage.

    inverse_atoms[k] is the image of the k-th orthonormal function under
    the inverse operator; partial inverses share the expansion's
    coefficients, so prefix norms agree with the disc-side partial sums.
    """

    expansion: ExpansionResult
    inverse: BoundaryFunction
    inverse_atoms: tuple[BoundaryFunction, ...]

    def partial_inverse(self, n: int | None = None) -> BoundaryFunction:
        if n is None:
            n = self.expansion.n_terms
        if not 0 <= n <= self.expansion.n_terms:
            raise ValueError(f"prefix length must be in 0..{self.expansion.n_terms}, got {n}")
        width = max((a.trunc for a in self.inverse_atoms), default=0)
        acc = BoundaryFunction.zero(width)
        for k in range(n):
            acc = acc + self.expansion.coefficients[k] * self.inverse_atoms[k]
        return acc

    def to_json_dict(self, include_system: bool = False) -> dict:
        doc = self.expansion.to_json_dict(include_system=include_system)
        doc["inverse"] = self.inverse.to_json_dict()
        return doc


@dataclass(frozen=True)
class PseudoInverseResult:
    """Projection of two-sided data, its defect, and the inverted expansion."""

    projection: DiscFunction
    defect: float
    expansion: ExpansionResult
    inverse: BoundaryFunction
    inverse_atoms: tuple[BoundaryFunction, ...]

    def partial_inverse(self, n: int | None = None) -> BoundaryFunction:
        if n is None:
            n = self.expansion.n_terms
        if not 0 <= n <= self.expansion.n_terms:
            raise ValueError(f"prefix length must be in 0..{self.expansion.n_terms}, got {n}")
        width = max((a.trunc for a in self.inverse_atoms), default=self.projection.trunc)
        acc = BoundaryFunction.zero(width)
        for k in range(n):
            acc = acc + self.expansion.coefficients[k] * self.inverse_atoms[k]
        return acc

    def approximation_error(self, n: int | None = None) -> float:
        """Distance from the data to the n-term image: sqrt of the defect
        squared plus the disc-side residual squared."""
        if n is None:
            n = self.expansion.n_terms
        return float(np.hypot(self.defect, self.expansion.residual_norms[n]))

    def to_json_dict(self, include_system: bool = False) -> dict:
        doc = self.expansion.to_json_dict(include_system=include_system)
        doc["projection"] = self.projection.to_json_dict()
        doc["defect"] = self.defect
        doc["inverse"] = self.inverse.to_json_dict()
        return doc


def solve_expansion(F: DiscFunction, config: PoafdConfig | None = None) -> ExpansionResult:
    """Adaptive expansion of F in the disc space."""
    return poafd_expand(F, config)


def solve_inversion(F: DiscFunction, config: PoafdConfig | None = None) -> InversionResult:
    """Minimum-norm boundary preimage of F via the adaptive expansion.

    The returned function has no negative-frequency content, which is
    exactly the minimum-norm characterization of the preimage.
    """
    expansion = poafd_expand(F, config)
    atoms = tuple(analytic_lift(b) for b in expansion.system.B)
    width = max((a.trunc for a in atoms), default=F.trunc)
    inverse = BoundaryFunction.zero(width)
    for coeff, atom in zip(expansion.coefficients, atoms):
        inverse = inverse + coeff * atom
    return InversionResult(expansion=expansion, inverse=inverse, inverse_atoms=atoms)


def solve_pseudo_inverse(F: BoundaryFunction, config: PoafdConfig | None = None) -> PseudoInverseResult:
    """Pseudo-inversion of arbitrary two-sided boundary data.

    Projects onto the analytic part (the co-analytic remainder is the
    unavoidable defect), expands the projection adaptively, and lifts the
    expansion back to the boundary.
    """
    _, fminus = plemelj_split(F)
    projection = apply_L(F)
    defect = fminus.norm()
    if projection.norm2() == 0.0:
        empty = ExpansionResult(
            system=OrthoSystem.empty(),
            coefficients=np.zeros(0, dtype=np.complex128),
            residual_norms=np.array([0.0]),
            objective_trace=np.zeros(0),
            objective_suprema=np.zeros(0),
        )
        return PseudoInverseResult(
            projection=projection,
            defect=defect,
            expansion=empty,
            inverse=BoundaryFunction.zero(F.trunc),
            inverse_atoms=(),
        )
    expansion = poafd_expand(projection, config)
    atoms = tuple(analytic_lift(b) for b in expansion.system.B)
    width = max((a.trunc for a in atoms), default=projection.trunc)
    inverse = BoundaryFunction.zero(width)
    for coeff, atom in zip(expansion.coefficients, atoms):
        inverse = inverse + coeff * atom
    return PseudoInverseResult(
        projection=projection,
        defect=defect,
        expansion=expansion,
        inverse=inverse,
        inverse_atoms=atoms,
    )
