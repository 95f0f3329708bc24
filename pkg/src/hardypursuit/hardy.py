"""Coefficient-space model of the unit-circle / unit-disc Hilbert space pair.

Functions on the circle live in L2 and are stored as two-sided Fourier
coefficient vectors; holomorphic functions on the disc are stored as
one-sided Taylor coefficient vectors with the square-summable norm.  In
this Parseval model every inner product is an exact finite sum, so the
Cauchy-integral operator (drop the negative frequencies) and its inverse
(re-embed the analytic part) act exactly on coefficients, and all
discretization error is confined to the truncation degree.

The Szego kernel and its parameter derivatives supply the kernel
dictionary used by the greedy expansion and inversion routines in the
rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError

DEFAULT_TRUNC = 256
DEFAULT_R_MAX = 0.95

_MIN_QUAD_NODES = 16


def _as_coeff_array(values) -> np.ndarray:
    c = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    return c


def _complex_pairs(c: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in c]


def _pairs_to_complex(pairs) -> np.ndarray:
    try:
        arr = np.asarray([[float(p[0]), float(p[1])] for p in pairs], dtype=np.float64)
    except (TypeError, ValueError, IndexError) as exc:
        raise ValueError("coefficients must be a list of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("coefficients must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


@dataclass(frozen=True)
class DiscFunction:
    """Holomorphic function on the disc, truncated Taylor coefficients c_0..c_N."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeff_array(self.coeffs))

    @property
    def trunc(self) -> int:
        """Truncation degree N (len(coeffs) - 1)."""
        return len(self.coeffs) - 1

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self) -> float:
        return float(np.sqrt(self.norm2()))

    def padded(self, n_trunc: int) -> "DiscFunction":
        if n_trunc < self.trunc:
            raise ValueError("cannot pad to a smaller truncation degree")
        if n_trunc == self.trunc:
            return self
        c = np.zeros(n_trunc + 1, dtype=np.complex128)
        c[: len(self.coeffs)] = self.coeffs
        return DiscFunction(c)

    def __add__(self, other: "DiscFunction") -> "DiscFunction":
        a, b = _aligned(self.coeffs, other.coeffs)
        return DiscFunction(a + b)

    def __sub__(self, other: "DiscFunction") -> "DiscFunction":
        a, b = _aligned(self.coeffs, other.coeffs)
        return DiscFunction(a - b)

    def __mul__(self, scalar) -> "DiscFunction":
        return DiscFunction(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return {"type": "disc", "coeffs": _complex_pairs(self.coeffs)}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "DiscFunction":
        if payload.get("type") != "disc":
            raise ValueError("payload is not a disc-function document")
        return cls(_pairs_to_complex(payload["coeffs"]))

    @classmethod
    def zero(cls, n_trunc: int = DEFAULT_TRUNC) -> "DiscFunction":
        return cls(np.zeros(n_trunc + 1, dtype=np.complex128))


@dataclass(frozen=True)
class BoundaryFunction:
    """Circle function as two-sided Fourier coefficients c_{-N}..c_N.

    Stored symmetrically: coeffs[j] is the coefficient of e^{i(j-N)t}.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _as_coeff_array(self.coeffs)
        if len(c) % 2 != 1:
            raise ValueError("two-sided coefficients must have odd length 2N+1")
        object.__setattr__(self, "coeffs", c)

    @property
    def trunc(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def min_k(self) -> int:
        return -self.trunc

    def coefficient(self, k: int) -> complex:
        n = self.trunc
        if not -n <= k <= n:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + n])

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self) -> float:
        return float(np.sqrt(self.norm2()))

    def padded(self, n_trunc: int) -> "BoundaryFunction":
        if n_trunc < self.trunc:
            raise ValueError("cannot pad to a smaller truncation degree")
        if n_trunc == self.trunc:
            return self
        c = np.zeros(2 * n_trunc + 1, dtype=np.complex128)
        lo = n_trunc - self.trunc
        c[lo : lo + len(self.coeffs)] = self.coeffs
        return BoundaryFunction(c)

    def __add__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        n = max(self.trunc, other.trunc)
        return BoundaryFunction(self.padded(n).coeffs + other.padded(n).coeffs)

    def __sub__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        n = max(self.trunc, other.trunc)
        return BoundaryFunction(self.padded(n).coeffs - other.padded(n).coeffs)

    def __mul__(self, scalar) -> "BoundaryFunction":
        return BoundaryFunction(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return {"type": "boundary", "min_k": self.min_k, "coeffs": _complex_pairs(self.coeffs)}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "BoundaryFunction":
        if payload.get("type") != "boundary":
            raise ValueError("payload is not a boundary-function document")
        min_k = payload.get("min_k")
        if not isinstance(min_k, int) or min_k > 0:
            raise ValueError("boundary document needs an integer min_k <= 0")
        c = _pairs_to_complex(payload["coeffs"])
        return cls.from_range(min_k, c)

    @classmethod
    def from_range(cls, min_k: int, coeffs) -> "BoundaryFunction":
        """Build from coefficients of e^{ikt}, k = min_k .. min_k + len - 1."""
        c = _as_coeff_array(coeffs)
        max_k = min_k + len(c) - 1
        n = max(-min_k, max_k, 0)
        full = np.zeros(2 * n + 1, dtype=np.complex128)
        full[min_k + n : min_k + n + len(c)] = c
        return cls(full)

    @classmethod
    def zero(cls, n_trunc: int = DEFAULT_TRUNC) -> "BoundaryFunction":
        return cls(np.zeros(2 * n_trunc + 1, dtype=np.complex128))


@dataclass(frozen=True)
class KernelParam:
    """Point in the open unit disc with a derivative order (multiplicity - 1)."""

    q: complex
    order: int = 0

    def __post_init__(self):
        q = complex(self.q)
        if not (np.isfinite(q.real) and np.isfinite(q.imag)):
            raise ParameterDomainError("kernel parameter must be finite")
        if abs(q) >= 1.0:
            raise ParameterDomainError(f"kernel parameter must lie in the open unit disc, got |q| = {abs(q)}")
        if int(self.order) < 0:
            raise ValueError("derivative order must be nonnegative")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "order", int(self.order))

    def to_json_dict(self) -> dict:
        return {"q": [self.q.real, self.q.imag], "order": self.order}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "KernelParam":
        re, im = payload["q"]
        return cls(complex(float(re), float(im)), int(payload.get("order", 0)))


def _aligned(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # zero-pad the shorter vector; exact, because trailing coefficients are zero
    if len(a) == len(b):
        return a, b
    n = max(len(a), len(b))
    if len(a) < n:
        a = np.pad(a, (0, n - len(a)))
    if len(b) < n:
        b = np.pad(b, (0, n - len(b)))
    return a, b


def hk_inner(a: DiscFunction, b: DiscFunction) -> complex:
    """Inner product sum c_k(a) * conj(c_k(b)); linear in the first slot."""
    x, y = _aligned(a.coeffs, b.coeffs)
    return complex(np.sum(x * np.conj(y)))


def l2_inner(f: BoundaryFunction, g: BoundaryFunction) -> complex:
    """Parseval form of the normalized boundary integral of f * conj(g)."""
    n = max(f.trunc, g.trunc)
    return complex(np.sum(f.padded(n).coeffs * np.conj(g.padded(n).coeffs)))


def _kernel_coeffs(q: complex, order: int, n_trunc: int) -> np.ndarray:
    """Taylor coefficients of the order-m parameter derivative of the kernel.

    Order 0 gives c_k = conj(q)^k; order m differentiates that m times in
    the conjugated parameter, c_k = k(k-1)...(k-m+1) conj(q)^{k-m}.
    """
    k = np.arange(n_trunc + 1, dtype=np.float64)
    qbar = np.conj(q)
    if order == 0:
        return qbar ** k
    falling = np.ones(n_trunc + 1, dtype=np.float64)
    for i in range(order):
        falling *= k - i
    # falling factorial vanishes for k < order, killing the negative powers
    powers = qbar ** np.maximum(k - order, 0.0)
    return falling * powers


def _check_param(param: KernelParam, r_max: float) -> None:
    # one-ulp slack: polar grid points on the r_max circle may round up
    if abs(param.q) > r_max * (1.0 + 1e-12):
        raise ParameterDomainError(
            f"kernel parameter |q| = {abs(param.q):.6g} exceeds the allowed radius {r_max}"
        )


def szego(param: KernelParam, n_trunc: int = DEFAULT_TRUNC, r_max: float = DEFAULT_R_MAX) -> DiscFunction:
    """Disc-side Szego kernel K_q, or its order-m parameter derivative."""
    _check_param(param, r_max)
    return DiscFunction(_kernel_coeffs(param.q, param.order, n_trunc))


def szego_boundary(
    param: KernelParam, n_trunc: int = DEFAULT_TRUNC, r_max: float = DEFAULT_R_MAX
) -> BoundaryFunction:
    """Boundary representative of the (multiple) Szego kernel: same
    coefficients on k >= 0, zero on the negative frequencies."""
    _check_param(param, r_max)
    return analytic_lift(DiscFunction(_kernel_coeffs(param.q, param.order, n_trunc)))


def evaluate(F: DiscFunction, p: complex) -> complex:
    """Horner evaluation of the Taylor polynomial at |p| < 1."""
    p = complex(p)
    if abs(p) >= 1.0:
        raise ParameterDomainError(f"evaluation point must satisfy |p| < 1, got {abs(p)}")
    return complex(np.polynomial.polynomial.polyval(p, F.coeffs))


def apply_L(f: BoundaryFunction) -> DiscFunction:
    """Cauchy integral of boundary data: keep k >= 0, drop the rest."""
    n = f.trunc
    return DiscFunction(f.coeffs[n:].copy())


def analytic_lift(F: DiscFunction, n_trunc: int | None = None) -> BoundaryFunction:
    """Boundary values of F: the isometric inverse of apply_L on the
    analytic half, with zero negative-frequency content."""
    n = F.trunc if n_trunc is None else n_trunc
    if n < F.trunc:
        raise ValueError("n_trunc must cover the degree of F")
    c = np.zeros(2 * n + 1, dtype=np.complex128)
    c[n : n + len(F.coeffs)] = F.coeffs
    return BoundaryFunction(c)


def plemelj_split(f: BoundaryFunction) -> tuple[BoundaryFunction, BoundaryFunction]:
    """Split into the analytic part (k >= 0) and co-analytic part (k < 0)."""
    n = f.trunc
    plus = np.zeros_like(f.coeffs)
    minus = np.zeros_like(f.coeffs)
    plus[n:] = f.coeffs[n:]
    minus[:n] = f.coeffs[:n]
    return BoundaryFunction(plus), BoundaryFunction(minus)


def littlewood_paley_norm2(F: DiscFunction, radial_nodes: int = 256, angular_nodes: int = 256) -> float:
    """Area-integral form of the squared disc norm.

    Computes |F(0)|^2 + 2 * integral over the disc of |F'(z)|^2 log(1/|z|)
    with the normalized area measure, by Gauss-Legendre quadrature in the
    radius on (0, 1) and the trapezoid rule in the angle.  The log factor
    is integrable and the open-interval radial nodes never touch it.
    """
    if radial_nodes < _MIN_QUAD_NODES or angular_nodes < _MIN_QUAD_NODES:
        raise ValueError(f"node counts must be at least {_MIN_QUAD_NODES}")
    deriv = F.coeffs[1:] * np.arange(1, len(F.coeffs))
    head = float(np.abs(F.coeffs[0]) ** 2)
    if len(deriv) == 0:
        return head
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w
    theta = 2.0 * np.pi * np.arange(angular_nodes) / angular_nodes
    z = r[:, None] * np.exp(1j * theta)[None, :]
    dvals = np.polynomial.polynomial.polyval(z, deriv)
    ring = np.sum(np.abs(dvals) ** 2, axis=1)
    radial = np.sum(wr * r * np.log(1.0 / r) * ring)
    return head + float(4.0 / angular_nodes * radial)


def function_from_json(payload: dict) -> DiscFunction | BoundaryFunction:
    """Dispatch a coefficient document to the matching space."""
    kind = payload.get("type")
    if kind == "disc":
        return DiscFunction.from_json_dict(payload)
    if kind == "boundary":
        return BoundaryFunction.from_json_dict(payload)
    raise ValueError(f"unknown function document type: {kind!r}")
