"""Independent brute-force verifiers for the primary code paths.

Every oracle here reaches its answer by a route the checked module does
not use: projections through explicit Gram normal equations with
closed-form kernel entries, greedy selection recomputed from scratch
with Householder QR, kernel derivatives by central finite differences in
the parameter, and norms by area quadrature.  Oracles only build on the
coefficient-space primitives, never on the engines they certify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError
from .hardy import (
    DEFAULT_R_MAX,
    DEFAULT_TRUNC,
    DiscFunction,
    KernelParam,
    evaluate,
    hk_inner,
    littlewood_paley_norm2,
    szego,
)

DEFAULT_SEED = 20260810
_FD_H_MIN = 1e-7
_FD_H_MAX = 1e-3
_GRAM_COND_LIMIT = 1e14
_GRAM_RIDGE = 1e-12


@dataclass(frozen=True)
class GramSystem:
    """Normal equations for projection onto a kernel span."""

    gram: np.ndarray  # (n, n), entry [i, j] = <K_{q_j}, K_{q_i}>, closed form
    rhs: np.ndarray  # (n,), entry [i] = <F, K_{q_i}> = F(q_i)
    cond: float


def _plain_points(params) -> np.ndarray:
    pts = []
    for p in params:
        if isinstance(p, KernelParam):
            if p.order != 0:
                raise ValueError("gram oracle handles derivative order 0 only")
            pts.append(p.q)
        else:
            pts.append(complex(p))
    return np.asarray(pts, dtype=np.complex128)


def build_gram_system(F: DiscFunction, params) -> GramSystem:
    """Closed-form Gram matrix 1/(1 - conj(q_j) q_i) and reproducing rhs."""
    q = _plain_points(params)
    gram = 1.0 / (1.0 - np.conj(q)[None, :] * q[:, None])
    rhs = np.array([evaluate(F, qi) for qi in q], dtype=np.complex128)
    cond = float(np.linalg.cond(gram))
    return GramSystem(gram=gram, rhs=rhs, cond=cond)


def projection_least_squares(
    F: DiscFunction,
    params,
    n_trunc: int | None = None,
    r_max: float = DEFAULT_R_MAX,
) -> DiscFunction:
    """Projection of F onto span{K_{q_j}} by solving the normal equations."""
    system = build_gram_system(F, params)
    if not np.isfinite(system.cond) or system.cond > _GRAM_COND_LIMIT:
        raise IllConditionedError(
            f"gram condition estimate {system.cond:.3e} exceeds {_GRAM_COND_LIMIT:.0e}"
        )
    try:
        x = np.linalg.solve(system.gram, system.rhs)
    except np.linalg.LinAlgError:
        ridge = system.gram + _GRAM_RIDGE * np.eye(len(system.rhs))
        x = np.linalg.solve(ridge, system.rhs)
    n = F.trunc if n_trunc is None else max(n_trunc, F.trunc)
    q = _plain_points(params)
    acc = np.zeros(n + 1, dtype=np.complex128)
    for xj, qj in zip(x, q):
        acc += xj * szego(KernelParam(qj), n, r_max).coeffs
    return DiscFunction(acc)


def _tiebreak_argmax(values: np.ndarray, points: np.ndarray) -> int:
    # must mirror the engine: largest value, then smallest |q|, then smallest angle
    best = values.max()
    idx = np.flatnonzero(values == best)
    if len(idx) > 1:
        mags = np.abs(points[idx])
        idx = idx[mags == mags.min()]
        if len(idx) > 1:
            args = np.angle(points[idx])
            idx = idx[args == args.min()]
    return int(idx[0])


def exhaustive_greedy(
    F: DiscFunction,
    grid_points=None,
    n_steps: int = 10,
    *,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
    eps_coincide: float = 1e-9,
    delta_span: float = 1e-12,
) -> tuple[list[KernelParam], np.ndarray]:
    """Greedy selection with every step recomputed from scratch.

    At each step a Householder QR of the already selected atoms is
    rebuilt, every grid candidate is orthogonalized directly against it,
    and the best correlation with the current residual wins.  Returns the
    selected parameters and the residual norms (leading entry ||F||).

    The fine grid defaults to a 32 x 64 polar grid; a SelectionGrid or a
    plain array of points is accepted.
    """
    if grid_points is None:
        from .poafd import SelectionGrid

        grid_points = SelectionGrid.polar(32, 64, r_max).points
    pts = np.asarray(getattr(grid_points, "points", grid_points), dtype=np.complex128)
    n_tr = max(n_trunc, F.trunc)
    fvec = np.zeros(n_tr + 1, dtype=np.complex128)
    fvec[: len(F.coeffs)] = F.coeffs

    def atom(q: complex, order: int) -> np.ndarray:
        return szego(KernelParam(q, order), n_tr, r_max).coeffs

    selected: list[KernelParam] = []
    residuals = [float(np.linalg.norm(fvec))]
    g = fvec
    for _ in range(n_steps):
        if selected:
            cols = np.stack([atom(p.q, p.order) for p in selected], axis=1)
            q_sel = np.linalg.qr(cols, mode="reduced")[0]
        else:
            q_sel = np.zeros((n_tr + 1, 0), dtype=np.complex128)
        vals = np.zeros(len(pts), dtype=np.float64)
        orders = np.zeros(len(pts), dtype=np.intp)
        for i, q in enumerate(pts):
            order = sum(1 for p in selected if abs(p.q - q) <= eps_coincide)
            orders[i] = order
            cand = atom(q, order)
            v = cand - q_sel @ (np.conj(q_sel.T) @ cand)
            vnorm2 = float(np.real(np.vdot(v, v)))
            if vnorm2 <= delta_span * float(np.real(np.vdot(cand, cand))):
                continue
            vals[i] = abs(np.vdot(v, g)) / math.sqrt(vnorm2)
        if vals.max() <= 0.0:
            break
        pick = _tiebreak_argmax(vals, pts)
        selected.append(KernelParam(complex(pts[pick]), int(orders[pick])))
        cols = np.stack([atom(p.q, p.order) for p in selected], axis=1)
        q_all = np.linalg.qr(cols, mode="reduced")[0]
        g = fvec - q_all @ (np.conj(q_all.T) @ fvec)
        residuals.append(float(np.linalg.norm(g)))
    return selected, np.asarray(residuals)


def finite_difference_kernel_derivative(
    q: complex,
    m: int,
    h: float,
    n_trunc: int = DEFAULT_TRUNC,
    r_max: float = DEFAULT_R_MAX,
) -> DiscFunction:
    """Order-m parameter derivative of the kernel by central differences.

    The differencing runs along the real parameter direction, which is
    enough because the coefficients are analytic in the conjugated
    parameter.  Step h must lie in [1e-7, 1e-3].
    """
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    if m == 0:
        return szego(KernelParam(complex(q)), n_trunc, r_max)
    if not _FD_H_MIN <= h <= _FD_H_MAX:
        raise ValueError(f"step h must lie in [{_FD_H_MIN}, {_FD_H_MAX}]")
    q = complex(q)
    acc = np.zeros(n_trunc + 1, dtype=np.complex128)
    for j in range(m + 1):
        weight = (-1.0) ** j * math.comb(m, j)
        shift = (m / 2.0 - j) * h
        acc += weight * szego(KernelParam(q + shift), n_trunc, r_max).coeffs
    return DiscFunction(acc / h**m)


def quadrature_hk_norm2(F: DiscFunction, radial_nodes: int = 256, angular_nodes: int = 256) -> float:
    """Disc norm squared by area quadrature, independent of coefficient sums."""
    return littlewood_paley_norm2(F, radial_nodes, angular_nodes)


def _random_disc_function(rng: np.random.Generator, degree: int) -> DiscFunction:
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return DiscFunction(c)


def _random_point(rng: np.random.Generator, radius: float) -> complex:
    # uniform on the disc of the given radius
    r = radius * math.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * math.pi)
    return complex(r * math.cos(t), r * math.sin(t))


def run_verification(seed: int = DEFAULT_SEED, trials: int = 100) -> dict:
    """Cross-check every oracle/primary pair; returns a pass/fail report."""
    from .basis import BasisPlan, basis_expand
    from .poafd import PoafdConfig, SelectionGrid, poafd_expand

    rng = np.random.default_rng(seed)
    checks = []

    def record(name: str, max_error: float, tolerance: float, detail: str = "") -> None:
        checks.append(
            {
                "name": name,
                "passed": bool(max_error <= tolerance),
                "max_error": float(max_error),
                "tolerance": float(tolerance),
                "detail": detail,
            }
        )

    # reproducing property: kernel pairing equals point evaluation
    worst = 0.0
    for _ in range(max(trials, 100)):
        F = _random_disc_function(rng, 64)
        q = _random_point(rng, 0.9)
        err = abs(hk_inner(F, szego(KernelParam(q), 256)) - evaluate(F, q)) / F.norm()
        worst = max(worst, err)
    record("reproducing_property", worst, 1e-10, "pairing vs Horner evaluation, |q| <= 0.9")

    # closed-form kernel pairings
    worst = 0.0
    for _ in range(50):
        a, b = _random_point(rng, 0.9), _random_point(rng, 0.9)
        got = hk_inner(szego(KernelParam(a), 256), szego(KernelParam(b), 256))
        worst = max(worst, abs(got - 1.0 / (1.0 - np.conj(a) * b)))
    record("kernel_gram_identity", worst, 1e-10, "pairings vs 1/(1 - conj(a) b)")

    # projection via normal equations vs plan expansion
    worst = 0.0
    for _ in range(trials):
        pts = _separated_points(rng, count=int(rng.integers(2, 7)), radius=0.85, min_sep=0.08)
        F = _random_disc_function(rng, 48)
        plan = BasisPlan.from_points(pts)
        got = basis_expand(F, plan)
        want = projection_least_squares(F, pts, n_trunc=got.trunc)
        worst = max(worst, (got - want).norm() / max(1.0, F.norm()))
    record("projection_vs_plan_expansion", worst, 1e-8, f"{trials} random plans of size <= 6")

    # kernel derivatives vs finite differences
    for m, h, tol in ((1, 1e-5, 1e-6), (2, 1e-4, 1e-4)):
        worst = 0.0
        for _ in range(20):
            q = _random_point(rng, 0.9)
            exact = szego(KernelParam(q, m), 256)
            approx = finite_difference_kernel_derivative(q, m, h, 256)
            worst = max(worst, (exact - approx).norm() / exact.norm())
        record(f"kernel_derivative_m{m}", worst, tol, f"central differences, h = {h}")

    # quadrature norm vs coefficient norm
    worst = 0.0
    for _ in range(50):
        F = _random_disc_function(rng, 8)
        worst = max(worst, abs(quadrature_hk_norm2(F) - F.norm2()))
    record("littlewood_paley_random", worst, 1e-6, "degree <= 8 polynomials at 256x256 nodes")
    record(
        "littlewood_paley_monomial",
        abs(quadrature_hk_norm2(DiscFunction([0.0, 1.0])) - 1.0),
        1e-8,
        "closed case F(z) = z",
    )

    # greedy engine vs exhaustive re-scan on a shared coarse grid
    grid = SelectionGrid.polar(16, 32)
    config = PoafdConfig(max_terms=8, tol_residual=0.0, grid=grid, refine_steps=0)
    sel_err = 0.0
    res_err = 0.0
    for _ in range(3):
        pts = [_random_point(rng, 0.8) for _ in range(8)]
        coeffs = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        F = DiscFunction(
            np.sum([c * szego(KernelParam(p), 256).coeffs for c, p in zip(coeffs, pts)], axis=0)
        )
        got = poafd_expand(F, config)
        want_sel, want_res = exhaustive_greedy(F, grid.points, 8, n_trunc=256)
        sel_err = max(
            sel_err,
            max(
                abs(p.q - w.q) + abs(p.order - w.order)
                for p, w in zip(got.system.params, want_sel)
            ),
        )
        res_err = max(res_err, float(np.max(np.abs(got.residual_norms - want_res))))
    record("exhaustive_greedy_selections", sel_err, 0.0, "identical picks on a 16x32 grid")
    record("exhaustive_greedy_residuals", res_err, 1e-9, "residual traces on a 16x32 grid")

    return {"seed": seed, "all_passed": all(c["passed"] for c in checks), "checks": checks}


def _separated_points(
    rng: np.random.Generator, count: int, radius: float, min_sep: float
) -> list[complex]:
    pts: list[complex] = []
    while len(pts) < count:
        q = _random_point(rng, radius)
        if all(abs(q - p) > min_sep for p in pts):
            pts.append(q)
    return pts
