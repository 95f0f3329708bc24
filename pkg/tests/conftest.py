import numpy as np
import pytest

from hardypursuit import DiscFunction, KernelParam, szego


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_disc(rng, degree: int) -> DiscFunction:
    return DiscFunction(rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))


def random_point(rng, radius: float) -> complex:
    r = radius * np.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(t), r * np.sin(t))


def separated_points(rng, count: int, radius: float, min_sep: float) -> list[complex]:
    pts: list[complex] = []
    while len(pts) < count:
        q = random_point(rng, radius)
        if all(abs(q - p) > min_sep for p in pts):
            pts.append(q)
    return pts


def kernel_combination(points, coeffs, n_trunc: int = 256) -> DiscFunction:
    acc = np.zeros(n_trunc + 1, dtype=np.complex128)
    for c, q in zip(coeffs, points):
        acc += c * szego(KernelParam(q), n_trunc).coeffs
    return DiscFunction(acc)


def polar_grid_point(i: int, j: int, radial: int = 64, angular: int = 128, r_max: float = 0.95) -> complex:
    """The (ring i, slot j) point of the default polar selection grid."""
    return complex((r_max * i / radial) * np.exp(2j * np.pi * j / angular))
