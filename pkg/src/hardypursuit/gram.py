"""Incremental Gram-Schmidt over kernel dictionaries.

Maintains the orthonormal functions B_1..B_n, the normalized dictionary
elements E_1..E_n they came from, and the lower-triangular transfer
matrix A with entries <E_i, B_j>.  Candidates numerically inside the
current span are rejected rather than normalized into noise.

Modified Gram-Schmidt is used, with a second orthogonalization pass when
the candidate is nearly dependent (small defect ratio); classical
single-pass G-S loses orthogonality for kernels with nearby parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hardy import DEFAULT_R_MAX, DEFAULT_TRUNC, DiscFunction, KernelParam, hk_inner, szego

DEFAULT_EPS_COINCIDE = 1e-9
DEFAULT_DELTA_SPAN = 1e-12

# defect ratio below which a second orthogonalization pass is forced
_REORTH_RATIO = 1e-4
# residual cross-correlation above which a pass is repeated regardless
_REORTH_TOL = 1e-10


@dataclass(frozen=True)
class GsDiagnostics:
    """Per-candidate record of the orthogonalization step."""

    projection_coeffs: np.ndarray  # <candidate, B_k>, k < n
    defect: float  # ||candidate||^2 - sum |projections|^2
    accepted: bool


@dataclass(frozen=True)
class OrthoSystem:
    """Ordered selected parameters with their orthonormalization.

    A is lower triangular with A[i, j] = <E_i, B_j>, so the rows of A
    expand the normalized dictionary elements in the orthonormal basis.
    """

    params: tuple[KernelParam | None, ...]
    B: tuple[DiscFunction, ...]
    E: tuple[DiscFunction, ...]
    A: np.ndarray

    @classmethod
    def empty(cls) -> "OrthoSystem":
        return cls(params=(), B=(), E=(), A=np.zeros((0, 0), dtype=np.complex128))

    @property
    def n(self) -> int:
        return len(self.B)

    def b_matrix(self) -> np.ndarray:
        """Stack of the orthonormal coefficient vectors, shape (n, N+1)."""
        if not self.B:
            return np.zeros((0, 0), dtype=np.complex128)
        width = max(len(b.coeffs) for b in self.B)
        out = np.zeros((len(self.B), width), dtype=np.complex128)
        for i, b in enumerate(self.B):
            out[i, : len(b.coeffs)] = b.coeffs
        return out

    def orthonormality_defect(self) -> float:
        """max |<B_i, B_j> - delta_ij| over the current system."""
        if not self.B:
            return 0.0
        m = self.b_matrix()
        gram = m @ np.conj(m.T)
        return float(np.max(np.abs(gram - np.eye(self.n))))

    def to_json_dict(self, include_functions: bool = True) -> dict:
        doc = {
            "params": [p.to_json_dict() if p is not None else None for p in self.params],
            "transfer_matrix": [[[z.real, z.imag] for z in row] for row in self.A],
        }
        if include_functions:
            doc["orthonormal"] = [b.to_json_dict() for b in self.B]
            doc["dictionary"] = [e.to_json_dict() for e in self.E]
        return doc


def multiplicity(params, q: complex, eps_coincide: float = DEFAULT_EPS_COINCIDE) -> int:
    """1 + number of previously selected parameters within eps_coincide of q."""
    if eps_coincide <= 0:
        raise ValueError("eps_coincide must be positive")
    q = complex(q)
    count = 0
    for p in params:
        prev = p.q if isinstance(p, KernelParam) else complex(p)
        if abs(prev - q) <= eps_coincide:
            count += 1
    return count + 1


def candidate_kernel(
    params,
    q: complex,
    eps_coincide: float = DEFAULT_EPS_COINCIDE,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> DiscFunction:
    """Dictionary candidate at q: the multiple kernel whose derivative
    order is the number of coincident prior selections."""
    order = multiplicity(params, q, eps_coincide) - 1
    return szego(KernelParam(q, order), n_trunc=n_trunc, r_max=r_max)


def _mgs_reduce(v: np.ndarray, bmat: np.ndarray) -> np.ndarray:
    # one modified Gram-Schmidt sweep: project out each basis row in turn
    for row in bmat:
        v = v - np.sum(v * np.conj(row)) * row
    return v


def extend(
    sys: OrthoSystem,
    candidate: DiscFunction,
    delta_span: float = DEFAULT_DELTA_SPAN,
    param: KernelParam | None = None,
) -> tuple[OrthoSystem, GsDiagnostics]:
    """Orthonormalize a candidate against the system.

    Returns the extended system and diagnostics.  When the candidate's
    defect is at most delta_span * ||candidate||^2 it is numerically in
    the span: the system is returned unchanged with accepted=False.
    """
    if delta_span <= 0:
        raise ValueError("delta_span must be positive")
    cand_norm2 = candidate.norm2()
    if cand_norm2 == 0.0:
        raise ValueError("cannot extend with the zero function")

    width = max([len(candidate.coeffs)] + [len(b.coeffs) for b in sys.B])
    cand = candidate.padded(width - 1)
    bmat = sys.b_matrix()
    if bmat.size and bmat.shape[1] < width:
        bmat = np.pad(bmat, ((0, 0), (0, width - bmat.shape[1])))

    proj = bmat @ np.conj(cand.coeffs) if sys.n else np.zeros(0, dtype=np.complex128)
    proj = np.conj(proj)  # <candidate, B_k>
    defect = cand_norm2 - float(np.sum(np.abs(proj) ** 2))
    diag = GsDiagnostics(projection_coeffs=proj, defect=defect, accepted=False)
    if defect <= delta_span * cand_norm2:
        return sys, diag

    v = _mgs_reduce(cand.coeffs.copy(), bmat)
    if defect < _REORTH_RATIO * cand_norm2:
        v = _mgs_reduce(v, bmat)
    b = v / np.linalg.norm(v)
    if sys.n and np.max(np.abs(bmat @ np.conj(b))) > _REORTH_TOL:
        v = _mgs_reduce(b, bmat)
        b = v / np.linalg.norm(v)

    b_fn = DiscFunction(b)
    e_fn = DiscFunction(cand.coeffs / np.sqrt(cand_norm2))
    row = np.zeros(sys.n + 1, dtype=np.complex128)
    for j, bj in enumerate(sys.B):
        row[j] = hk_inner(e_fn, bj)
    row[sys.n] = hk_inner(e_fn, b_fn)
    a = np.zeros((sys.n + 1, sys.n + 1), dtype=np.complex128)
    a[: sys.n, : sys.n] = sys.A
    a[sys.n, :] = row

    extended = OrthoSystem(
        params=sys.params + (param,),
        B=sys.B + (b_fn,),
        E=sys.E + (e_fn,),
        A=a,
    )
    return extended, GsDiagnostics(projection_coeffs=proj, defect=defect, accepted=True)
