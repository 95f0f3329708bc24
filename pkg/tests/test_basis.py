import numpy as np
import pytest

from hardypursuit import (
    BasisPlan,
    BoundaryFunction,
    DegeneratePlanError,
    KernelParam,
    apply_L,
    basis_build,
    basis_expand,
    basis_invert,
    basis_pseudo_inverse,
    hk_inner,
    szego,
    szego_boundary,
)
from hardypursuit.oracle import projection_least_squares

from conftest import kernel_combination, random_disc, separated_points


class TestBasisPlan:
    def test_single_point(self):
        plan = BasisPlan.from_points([0.0])
        assert plan.n == 1

    def test_rejects_coincident_entries(self):
        with pytest.raises(DegeneratePlanError):
            BasisPlan.from_points([0.2, 0.2 + 1e-12])

    def test_rejects_empty_and_nonzero_orders(self):
        with pytest.raises(ValueError):
            BasisPlan(())
        with pytest.raises(ValueError):
            BasisPlan((KernelParam(0.1, 1),))


class TestBasisBuild:
    def test_trivial_plan(self):
        sys = basis_build(BasisPlan.from_points([0.0]))
        np.testing.assert_allclose(sys.A, [[1.0]])
        np.testing.assert_array_equal(sys.B[0].coeffs, szego(KernelParam(0.0)).coeffs)

    def test_closed_form_transfer_matrix(self):
        sys = basis_build(BasisPlan.from_points([0.0, 0.5]))
        want = np.array([[1.0, 0.0], [np.sqrt(3.0) / 2.0, 0.5]])
        np.testing.assert_allclose(sys.A, want, atol=1e-12)

    def test_near_dependent_plan_reports_index(self):
        plan = BasisPlan.from_points([0.0, 1e-14], eps_coincide=1e-16)
        with pytest.raises(DegeneratePlanError) as info:
            basis_build(plan)
        assert info.value.index == 1


class TestBasisExpand:
    def test_in_span_recovery(self, rng):
        points = separated_points(rng, 4, 0.8, 0.15)
        F = kernel_combination(points, [1.0, -2.0, 0.5j, 3.0])
        got = basis_expand(F, BasisPlan.from_points(points))
        assert (got - F).norm() <= 1e-9 * F.norm()

    def test_orthogonal_complement_killed(self, rng):
        # build a vector orthogonal to the span from a fresh kernel's
        # Gram-Schmidt remainder, then project it
        points = separated_points(rng, 3, 0.7, 0.2)
        plan = BasisPlan.from_points(points)
        sys = basis_build(plan)
        extraneous = szego(KernelParam(0.55 + 0.3j))
        rem = extraneous.coeffs.copy()
        for b in sys.B:
            rem -= hk_inner(szego(KernelParam(0.55 + 0.3j)), b) * b.coeffs
        from hardypursuit import DiscFunction

        F = DiscFunction(rem)
        got = basis_expand(F, plan)
        assert got.norm() <= 1e-9 * F.norm()

    def test_matches_gram_oracle_on_random_inputs(self, rng):
        for _ in range(20):
            points = separated_points(rng, int(rng.integers(2, 7)), 0.85, 0.08)
            F = random_disc(rng, 48)
            got = basis_expand(F, BasisPlan.from_points(points))
            want = projection_least_squares(F, points, n_trunc=got.trunc)
            assert (got - want).norm() <= 1e-8 * max(1.0, F.norm())


class TestBasisInvert:
    def test_kernel_in_span_recovers_boundary_kernel(self):
        F = szego(KernelParam(0.5))
        got = basis_invert(F, BasisPlan.from_points([0.0, 0.5]))
        want = szego_boundary(KernelParam(0.5))
        assert (got - want).norm() <= 1e-10 * want.norm()

    def test_constant_recovers_boundary_constant(self):
        got = basis_invert(szego(KernelParam(0.0)), BasisPlan.from_points([0.0]))
        want = BoundaryFunction.from_range(0, [1.0]).padded(got.trunc)
        assert (got - want).norm() <= 1e-12

    def test_image_is_the_expansion(self, rng):
        points = separated_points(rng, 5, 0.8, 0.1)
        plan = BasisPlan.from_points(points)
        for _ in range(5):
            F = random_disc(rng, 48)
            s2 = basis_invert(F, plan)
            s1 = basis_expand(F, plan)
            err = (apply_L(s2) - s1.padded(s2.trunc)).norm()
            assert err <= 1e-8 * max(1.0, F.norm())

    def test_preimage_isometry(self, rng):
        points = separated_points(rng, 5, 0.8, 0.1)
        plan = BasisPlan.from_points(points)
        F = random_disc(rng, 48)
        s2 = basis_invert(F, plan)
        s1 = basis_expand(F, plan)
        assert abs(s2.norm() - s1.norm()) <= 1e-10 * max(1.0, s1.norm())

    def test_minimum_norm_no_negative_frequencies(self, rng):
        points = separated_points(rng, 4, 0.8, 0.1)
        s2 = basis_invert(random_disc(rng, 32), BasisPlan.from_points(points))
        n = s2.trunc
        assert np.all(s2.coeffs[:n] == 0)


class TestBasisPseudoInverse:
    def test_pure_negative_frequencies_give_zero(self):
        f = BoundaryFunction.from_range(-3, [1.0, 2.0, -1.0])
        got = basis_pseudo_inverse(f, BasisPlan.from_points([0.0, 0.3]))
        assert got.norm() == 0.0

    def test_riesz_projection_then_single_kernel(self):
        f = BoundaryFunction.from_range(-1, [1.0, 2.0])
        got = basis_pseudo_inverse(f, BasisPlan.from_points([0.0]))
        want = BoundaryFunction.from_range(0, [2.0]).padded(got.trunc)
        assert (got - want).norm() <= 1e-12

    def test_same_code_path_as_invert_after_projection(self, rng):
        points = separated_points(rng, 4, 0.8, 0.1)
        plan = BasisPlan.from_points(points)
        c = rng.standard_normal(33) + 1j * rng.standard_normal(33)
        f = BoundaryFunction(c)
        s3 = basis_pseudo_inverse(f, plan)
        s2 = basis_invert(apply_L(f), plan)
        np.testing.assert_array_equal(s3.coeffs, s2.coeffs)

    def test_analytic_in_span_consistency(self, rng):
        points = separated_points(rng, 3, 0.7, 0.2)
        plan = BasisPlan.from_points(points)
        F = kernel_combination(points, [1.0, 2.0, -1.0j])
        from hardypursuit import analytic_lift

        f = analytic_lift(F)
        s3 = basis_pseudo_inverse(f, plan)
        err = (apply_L(s3) - apply_L(f).padded(s3.trunc)).norm()
        assert err <= 1e-9 * max(1.0, f.norm())
