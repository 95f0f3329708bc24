"""Greedy kernel expansion by pre-orthogonal maximal selection.

Each iteration orthogonalizes every candidate kernel against the current
system first, then selects the parameter whose orthonormalized direction
correlates best with the residual.  The continuum supremum is replaced
by a polar selection grid, optionally sharpened by local grid refinement
around the incumbent argmax (full mode), or relaxed to a rho-fraction
acceptance threshold (weak mode).

Repeated parameter selections are handled with multiple kernels: when
the argmax coincides with an earlier selection, the candidate switches
to the next parameter derivative of the kernel, which is the direction
the Gram-Schmidt limit would produce.

The per-iteration grid sweep is a pure reduction over a read-only
snapshot of the system and residual; its argmax is tie-broken by
(smallest |q|, then smallest principal argument), which is independent
of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExhaustedDictionaryError
from .gram import (
    DEFAULT_DELTA_SPAN,
    DEFAULT_EPS_COINCIDE,
    OrthoSystem,
    candidate_kernel,
    extend,
    multiplicity,
)
from .hardy import DEFAULT_R_MAX, DEFAULT_TRUNC, DiscFunction, KernelParam, hk_inner

DEFAULT_MAX_TERMS = 64
DEFAULT_RADIAL = 64
DEFAULT_ANGULAR = 128
_REFINE_SHRINK = 4.0
_REFINE_POINTS = 9  # per axis of the local square


@dataclass(frozen=True)
class SelectionGrid:
    """Discrete parameter candidates inside the closed disc of radius r_max."""

    points: np.ndarray
    radial_count: int
    angular_count: int
    r_max: float

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=np.complex128))
        if pts.size == 0:
            raise ValueError("selection grid must be nonempty")
        if not (0 < self.r_max < 1):
            raise ValueError("r_max must lie in (0, 1)")
        if np.max(np.abs(pts)) > self.r_max * (1 + 1e-12):
            raise ValueError("grid points must satisfy |q| <= r_max")
        object.__setattr__(self, "points", pts)

    @classmethod
    def polar(
        cls,
        radial_count: int = DEFAULT_RADIAL,
        angular_count: int = DEFAULT_ANGULAR,
        r_max: float = DEFAULT_R_MAX,
    ) -> "SelectionGrid":
        """Origin plus radial_count rings of angular_count points each."""
        if radial_count < 1 or angular_count < 1:
            raise ValueError("grid counts must be positive")
        radii = r_max * np.arange(1, radial_count + 1) / radial_count
        angles = np.exp(2j * np.pi * np.arange(angular_count) / angular_count)
        rings = (radii[:, None] * angles[None, :]).ravel()
        return cls(
            points=np.concatenate(([0.0 + 0.0j], rings)),
            radial_count=radial_count,
            angular_count=angular_count,
            r_max=r_max,
        )

    def spacing(self) -> float:
        """Coarse resolution: the larger of radial gap and outer arc length."""
        dr = self.r_max / max(self.radial_count, 1)
        ds = 2.0 * np.pi * self.r_max / max(self.angular_count, 1)
        return max(dr, ds)


@dataclass(frozen=True)
class PoafdConfig:
    mode: str = "full"
    rho: float | None = None
    max_terms: int = DEFAULT_MAX_TERMS
    tol_residual: float | None = None  # None -> 1e-8 * ||F||
    eps_coincide: float = DEFAULT_EPS_COINCIDE
    delta_span: float = DEFAULT_DELTA_SPAN
    grid: SelectionGrid | None = None
    refine_steps: int = 3
    n_trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        if self.mode not in ("full", "weak"):
            raise ValueError("mode must be 'full' or 'weak'")
        if self.mode == "weak":
            if self.rho is None or not (0.0 < self.rho < 1.0):
                raise ValueError("weak mode requires rho in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")
        if self.tol_residual is not None and self.tol_residual < 0:
            raise ValueError("tol_residual must be nonnegative")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be nonnegative")

    def resolved_grid(self) -> SelectionGrid:
        return self.grid if self.grid is not None else SelectionGrid.polar()


@dataclass(frozen=True)
class ExpansionResult:
    """Full trace of a greedy expansion.

    residual_norms[0] is the input norm; residual_norms[n] is the
    residual after n terms, so reconstruct(n) leaves exactly that much.
    """

    system: OrthoSystem
    coefficients: np.ndarray
    residual_norms: np.ndarray
    objective_trace: np.ndarray
    objective_suprema: np.ndarray

    @property
    def n_terms(self) -> int:
        return len(self.coefficients)

    def reconstruct(self, n: int | None = None) -> DiscFunction:
        if n is None:
            n = self.n_terms
        if not 0 <= n <= self.n_terms:
            raise ValueError(f"partial-sum length must be in 0..{self.n_terms}, got {n}")
        width = self.system.b_matrix().shape[1] if self.system.n else 1
        acc = np.zeros(width, dtype=np.complex128)
        for k in range(n):
            acc += self.coefficients[k] * self.system.B[k].coeffs
        return DiscFunction(acc if acc.size else [0.0])

    def to_json_dict(self, include_system: bool = False) -> dict:
        doc = {
            "params": [p.to_json_dict() if p is not None else None for p in self.system.params],
            "coefficients": [[z.real, z.imag] for z in self.coefficients],
            "residual_norms": [float(r) for r in self.residual_norms],
            "objective_trace": [float(v) for v in self.objective_trace],
            "objective_suprema": [float(v) for v in self.objective_suprema],
            "transfer_matrix": [[[z.real, z.imag] for z in row] for row in self.system.A],
        }
        if include_system:
            doc["system"] = self.system.to_json_dict()
        return doc


def reconstruct(result: ExpansionResult, n: int | None = None) -> DiscFunction:
    """Partial sum of the first n selected terms."""
    return result.reconstruct(n)


def selection_objective(
    sys: OrthoSystem,
    G: DiscFunction,
    q: complex,
    params=None,
    *,
    eps_coincide: float = DEFAULT_EPS_COINCIDE,
    delta_span: float = DEFAULT_DELTA_SPAN,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> float:
    """|<G, B_n^q>| for the candidate at q, without mutating the system.

    Candidates whose defect falls at or below delta_span * ||candidate||^2
    are numerically in the span and score 0, excluding them from argmax.
    """
    if params is None:
        params = sys.params
    cand = candidate_kernel(params, q, eps_coincide, n_trunc, r_max)
    cand_norm2 = cand.norm2()
    numer = hk_inner(G, cand)
    defect = cand_norm2
    for k, b in enumerate(sys.B):
        p_k = hk_inner(cand, b)
        defect -= abs(p_k) ** 2
        numer -= np.conj(p_k) * hk_inner(G, b)
    if defect <= delta_span * cand_norm2:
        return 0.0
    return float(abs(numer) / np.sqrt(defect))


def _objectives_from_parts(
    numer: np.ndarray, defect: np.ndarray, norm2: np.ndarray, delta_span: float
) -> np.ndarray:
    safe = defect > delta_span * norm2
    out = np.zeros(len(numer), dtype=np.float64)
    out[safe] = np.abs(numer[safe]) / np.sqrt(defect[safe])
    return out


class _GridSweep:
    """Vectorized objective evaluation over a fixed grid.

    Keeps the kernel matrix, cumulative projections onto the system, and
    the running defect, so each iteration costs one matvec per new basis
    function instead of a full recomputation.
    """

    def __init__(self, grid: SelectionGrid, n_trunc: int):
        k = np.arange(n_trunc + 1, dtype=np.float64)
        self.points = grid.points
        self.kmat = np.conj(self.points)[:, None] ** k[None, :]
        self.norm2 = np.sum(np.abs(self.kmat) ** 2, axis=1)
        self.defect = self.norm2.copy()
        self._p_cols: list[np.ndarray] = []

    @classmethod
    def for_system(cls, grid: SelectionGrid, n_trunc: int, sys: OrthoSystem) -> "_GridSweep":
        sweep = cls(grid, n_trunc)
        for b in sys.B:
            sweep.append_basis(b)
        return sweep

    def append_basis(self, b: DiscFunction) -> None:
        coeffs = b.coeffs
        if len(coeffs) > self.kmat.shape[1]:
            raise ValueError("basis truncation exceeds the sweep kernels")
        if len(coeffs) < self.kmat.shape[1]:
            coeffs = np.pad(coeffs, (0, self.kmat.shape[1] - len(coeffs)))
        col = self.kmat @ np.conj(coeffs)  # <K_q, B>
        self._p_cols.append(col)
        self.defect = self.defect - np.abs(col) ** 2

    def objectives(self, G: DiscFunction, gb: np.ndarray, delta_span: float) -> np.ndarray:
        """Order-0 objective at every grid point (coincident points excluded
        by the caller)."""
        g = G.coeffs
        if len(g) != self.kmat.shape[1]:
            raise ValueError("residual truncation does not match the sweep kernels")
        # <G, K_q> = conj(K_q . conj(G)) avoids conjugating the big matrix
        numer = np.conj(self.kmat @ np.conj(g))
        if self._p_cols:
            numer = numer - np.stack(self._p_cols, axis=1) @ np.conj(gb)
        return _objectives_from_parts(numer, self.defect, self.norm2, delta_span)


def _argmax_tiebreak(values: np.ndarray, points: np.ndarray) -> int:
    """Index of the largest value; exact ties go to smallest |q|, then
    smallest principal argument.  Independent of evaluation order."""
    best = values.max()
    idx = np.flatnonzero(values == best)
    if len(idx) > 1:
        mags = np.abs(points[idx])
        idx = idx[mags == mags.min()]
        if len(idx) > 1:
            args = np.angle(points[idx])
            idx = idx[args == args.min()]
    return int(idx[0])


def _coincident_indices(points: np.ndarray, params, eps_coincide: float) -> np.ndarray:
    if not params:
        return np.zeros(0, dtype=np.intp)
    prev = np.array([p.q for p in params if p is not None], dtype=np.complex128)
    if prev.size == 0:
        return np.zeros(0, dtype=np.intp)
    close = np.min(np.abs(points[:, None] - prev[None, :]), axis=1) <= eps_coincide
    return np.flatnonzero(close)


def _scalar_objective(sys, G, q, config, grid):
    return selection_objective(
        sys,
        G,
        q,
        eps_coincide=config.eps_coincide,
        delta_span=config.delta_span,
        n_trunc=G.trunc,
        r_max=grid.r_max,
    )


def _batch_objectives(sys, G, points, gb, config, grid) -> np.ndarray:
    """Objectives at arbitrary points in one shot; points coinciding with a
    prior selection fall back to the per-point multiple-kernel path."""
    k = np.arange(len(G.coeffs), dtype=np.float64)
    kmat = np.conj(points)[:, None] ** k[None, :]
    norm2 = np.sum(np.abs(kmat) ** 2, axis=1)
    numer = np.conj(kmat @ np.conj(G.coeffs))
    defect = norm2
    if sys.n:
        bmat = sys.b_matrix()
        if bmat.shape[1] < len(G.coeffs):
            bmat = np.pad(bmat, ((0, 0), (0, len(G.coeffs) - bmat.shape[1])))
        proj = kmat @ np.conj(bmat.T)  # <K_q, B_k>
        numer = numer - proj @ np.conj(gb)
        defect = norm2 - np.sum(np.abs(proj) ** 2, axis=1)
    vals = _objectives_from_parts(numer, defect, norm2, config.delta_span)
    for i in _coincident_indices(points, sys.params, config.eps_coincide):
        vals[i] = _scalar_objective(sys, G, complex(points[i]), config, grid)
    return vals


def _refine(sys, G, q0: complex, config: PoafdConfig, grid: SelectionGrid, gb: np.ndarray):
    """Local square grids around the incumbent, shrinking by factor 4."""
    q_best = q0
    v_best = float(_batch_objectives(sys, G, np.array([q0]), gb, config, grid)[0])
    half = grid.spacing()
    for _ in range(config.refine_steps):
        offs = np.linspace(-half, half, _REFINE_POINTS)
        cand = (q_best + offs[:, None] + 1j * offs[None, :]).ravel()
        mags = np.abs(cand)
        outside = mags > grid.r_max
        cand[outside] *= grid.r_max / mags[outside]
        vals = _batch_objectives(sys, G, cand, gb, config, grid)
        pick = _argmax_tiebreak(vals, cand)
        if vals[pick] > v_best or (
            vals[pick] == v_best
            and (abs(cand[pick]), np.angle(cand[pick])) < (abs(q_best), np.angle(q_best))
        ):
            q_best, v_best = complex(cand[pick]), float(vals[pick])
        half /= _REFINE_SHRINK
    return q_best, v_best


def _select(sys: OrthoSystem, G: DiscFunction, config: PoafdConfig, sweep: _GridSweep, grid: SelectionGrid):
    """One maximal-selection step.  Returns (param, achieved, grid_sup)."""
    gb = np.array([hk_inner(G, b) for b in sys.B], dtype=np.complex128)
    objs = sweep.objectives(G, gb, config.delta_span)
    coincident = _coincident_indices(sweep.points, sys.params, config.eps_coincide)

    if config.mode == "weak":
        mask = np.ones(len(objs), dtype=bool)
        mask[coincident] = False
        sup = float(objs[mask].max()) if mask.any() else 0.0
        if sup <= 0.0:
            raise ExhaustedDictionaryError("no admissible candidate has positive objective")
        threshold = config.rho * sup
        for i in np.flatnonzero(mask):
            if objs[i] >= threshold:
                return KernelParam(complex(sweep.points[i]), 0), float(objs[i]), sup
        raise ExhaustedDictionaryError("weak-mode scan found no acceptable candidate")

    # full mode: coincident grid points switch to their multiple kernels
    for i in coincident:
        objs[i] = _scalar_objective(sys, G, complex(sweep.points[i]), config, grid)
    sup = float(objs.max())
    if sup <= 0.0:
        raise ExhaustedDictionaryError("every grid candidate is numerically in the span")
    pick = _argmax_tiebreak(objs, sweep.points)
    q_star, achieved = complex(sweep.points[pick]), float(objs[pick])
    if config.refine_steps > 0:
        q_star, achieved = _refine(sys, G, q_star, config, grid, gb)
    order = multiplicity(sys.params, q_star, config.eps_coincide) - 1
    return KernelParam(q_star, order), achieved, sup


def maximal_selection(sys: OrthoSystem, G: DiscFunction, config: PoafdConfig) -> tuple[KernelParam, float]:
    """Best parameter for the current residual under the configured mode."""
    if G.norm2() == 0.0:
        raise ValueError("residual must be nonzero")
    grid = config.resolved_grid()
    system_width = sys.b_matrix().shape[1] if sys.n else 0
    n_trunc = max(config.n_trunc, G.trunc, system_width - 1)
    sweep = _GridSweep.for_system(grid, n_trunc, sys)
    param, achieved, _ = _select(sys, G.padded(n_trunc), config, sweep, grid)
    return param, achieved


def poafd_expand(F: DiscFunction, config: PoafdConfig | None = None) -> ExpansionResult:
    """Greedy expansion of F: select, orthonormalize, strip, repeat.

    Stops at max_terms or when the residual norm reaches tol_residual
    (default 1e-8 times the input norm).
    """
    if config is None:
        config = PoafdConfig()
    fnorm = F.norm()
    if fnorm == 0.0:
        raise ValueError("cannot expand the zero function")
    grid = config.resolved_grid()
    n_trunc = max(config.n_trunc, F.trunc)
    tol = config.tol_residual if config.tol_residual is not None else 1e-8 * fnorm

    F = F.padded(n_trunc)
    sweep = _GridSweep(grid, n_trunc)
    sys = OrthoSystem.empty()
    G = F
    coefficients: list[complex] = []
    residual_norms = [fnorm]
    objective_trace: list[float] = []
    objective_suprema: list[float] = []

    for _ in range(config.max_terms):
        gnorm = G.norm()
        if gnorm <= tol or gnorm == 0.0:
            break
        param, achieved, sup = _select(sys, G, config, sweep, grid)
        cand = candidate_kernel(sys.params, param.q, config.eps_coincide, n_trunc, grid.r_max)
        sys, diag = extend(sys, cand, config.delta_span, param=param)
        if not diag.accepted:
            raise ExhaustedDictionaryError(
                f"selected candidate at q={param.q} is numerically in the span"
            )
        b_n = sys.B[-1]
        coeff = hk_inner(F, b_n)
        G = G - coeff * b_n
        coefficients.append(coeff)
        residual_norms.append(G.norm())
        objective_trace.append(achieved)
        objective_suprema.append(sup)
        sweep.append_basis(b_n)

    return ExpansionResult(
        system=sys,
        coefficients=np.array(coefficients, dtype=np.complex128),
        residual_norms=np.array(residual_norms, dtype=np.float64),
        objective_trace=np.array(objective_trace, dtype=np.float64),
        objective_suprema=np.array(objective_suprema, dtype=np.float64),
    )
