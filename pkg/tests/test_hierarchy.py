import math
import unittest
from typing import Any

import numpy as np
import numpy.typing as npt
import pytest

from quintlab.exceptions import ResourceCapError, ValidationError
from quintlab.grid import GridSpec, random_smooth_field
from quintlab.hierarchy import (
    QuadratureRule,
    SeparableKernel,
    commutation_check,
    contract,
    contract_minus,
    contract_plus,
    duhamel_integrand,
    duhamel_residual,
    factorized,
    free_propagate,
    integrand_distance,
    kernel_inner,
    kernel_norm,
    slot_pair_swap,
    time_swap,
)
from quintlab.nls import NlsParams, WaveFunction, evolve
from tests import oracles
from tests.common import gaussian_wave, grid_1d, quiet_logger, rng, small_kernel


def smooth_kernel(grid: GridSpec, order: int, rank: int, offset: int = 0) -> SeparableKernel:
    generator = rng(offset)
    f = random_smooth_field(grid, generator, batch_shape=(rank, order))
    g = random_smooth_field(grid, generator, batch_shape=(rank, order))
    coefficients = generator.standard_normal(rank) + 1j * generator.standard_normal(rank)
    return SeparableKernel(grid=grid, coefficients=coefficients, f=f, g=g)


def periodic_bump(grid: GridSpec) -> WaveFunction:
    values = np.exp(np.cos(2 * math.pi * grid.coordinates()[0] / grid.L))
    return WaveFunction(grid=grid, values=values).normalized()


class DenseOracleTestCase(unittest.TestCase):
    def assertDenseClose(self, expected: npt.NDArray[Any], actual: npt.NDArray[Any]) -> None:
        scale = max(1.0, float(np.max(np.abs(expected))))
        np.testing.assert_allclose(actual, expected, rtol=0, atol=1e-12 * scale)


class SeparableKernelTests(DenseOracleTestCase):
    def test_shapes_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=3, rank=2)
        self.assertEqual(3, gamma.order)
        self.assertEqual(2, gamma.rank)
        self.assertFalse(gamma.f.flags.writeable)

    def test_mismatched_factors_fails(self) -> None:
        grid = grid_1d(M=4)
        with self.assertRaisesRegex(ValidationError, "dimension_mismatch"):
            SeparableKernel(
                grid=grid, coefficients=np.ones(2), f=np.ones((2, 1, 4)), g=np.ones((1, 1, 4))
            )

    def test_rank_cap_fails(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=3, rank=2).with_rank_cap(3)
        with self.assertRaisesRegex(ResourceCapError, "rank_cap_exceeded"):
            contract(gamma, 1)

    def test_sum_and_adjoint_match_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        first = small_kernel(grid, order=2, rank=3)
        second = small_kernel(grid, order=2, rank=2, offset=1)
        self.assertDenseClose(first.to_dense() - second.to_dense(), (first - second).to_dense())
        self.assertDenseClose(oracles.adjoint(first.to_dense()), first.adjoint().to_dense())

    def test_evaluate_matches_dense_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=2, rank=3)
        dense = gamma.to_dense()
        self.assertAlmostEqual(dense[1, 2, 3, 0], gamma.evaluate([(1,), (2,)], [(3,), (0,)]))

    def test_permute_slots_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=2, rank=2)
        swapped = gamma.permute_slots([2, 1]).to_dense()
        self.assertDenseClose(np.transpose(gamma.to_dense(), (1, 0, 3, 2)), swapped)
        with self.assertRaises(ValidationError):
            gamma.permute_slots([1, 1])

    def test_trace_of_factorized_succeeds(self) -> None:
        phi = gaussian_wave(grid_1d())
        self.assertAlmostEqual(1.0, factorized(phi, 3).trace().real, places=12)

    def test_dense_cap_fails(self) -> None:
        with self.assertRaises(ResourceCapError):
            small_kernel(grid_1d(M=64), order=3, rank=1).to_dense()


class FreePropagateTests(DenseOracleTestCase):
    def test_matches_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        for order in (1, 2):
            gamma = small_kernel(grid, order=order, rank=3, offset=order)
            expected = oracles.free_propagate(gamma.to_dense(), grid, 0.37)
            self.assertDenseClose(expected, free_propagate(gamma, 0.37).to_dense())

    def test_slot_masked_matches_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        gamma = small_kernel(grid, order=2, rank=3)
        expected = oracles.free_propagate(gamma.to_dense(), grid, -0.2, slots=[2])
        self.assertDenseClose(expected, free_propagate(gamma, -0.2, slots=[2]).to_dense())

    def test_unitarity_succeeds(self) -> None:
        gamma = smooth_kernel(grid_1d(), order=3, rank=3)
        before = kernel_norm(gamma)
        for t in (0.1, 1.0, 25.0):
            after = kernel_norm(free_propagate(gamma, t))
            self.assertAlmostEqual(before, after, delta=1e-12 * before)

    def test_group_law_succeeds(self) -> None:
        gamma = smooth_kernel(grid_1d(), order=2, rank=2)
        twice = free_propagate(free_propagate(gamma, 0.3), 0.4)
        once = free_propagate(gamma, 0.7)
        self.assertLess(kernel_norm(twice - once), 1e-12)

    def test_zero_time_is_identity_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=2, rank=2)
        self.assertIs(gamma, free_propagate(gamma, 0.0))

    def test_slot_out_of_range_fails(self) -> None:
        with self.assertRaises(ValidationError):
            free_propagate(small_kernel(grid_1d(M=4), order=2, rank=1), 0.1, slots=[3])


class ContractionTests(DenseOracleTestCase):
    def test_contract_plus_matches_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        for order, j, slots in ((3, 1, (2, 3)), (4, 1, (3, 4)), (4, 2, (1, 3)), (4, 4, (1, 2))):
            gamma = small_kernel(grid, order=order, rank=3, offset=order + j)
            expected = oracles.contract(gamma.to_dense(), j, *slots, plus=True)
            self.assertDenseClose(expected, contract_plus(gamma, j, slots).to_dense())

    def test_contract_minus_matches_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        for order, j, slots in ((3, 1, (2, 3)), (4, 2, (3, 4)), (4, 3, (1, 4))):
            gamma = small_kernel(grid, order=order, rank=3, offset=order + j)
            expected = oracles.contract(gamma.to_dense(), j, *slots, plus=False)
            self.assertDenseClose(expected, contract_minus(gamma, j, slots).to_dense())

    def test_contract_doubles_rank_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=4, rank=3)
        self.assertEqual(6, contract(gamma, 1).rank)
        self.assertEqual(3, contract(gamma, 1, plus_only=True).rank)
        self.assertEqual(2, contract(gamma, 2).order)

    def test_factorized_contraction_succeeds(self) -> None:
        grid = grid_1d(M=8)
        phi = gaussian_wave(grid).values
        dense = contract(factorized(WaveFunction(grid=grid, values=phi), 3), 1).to_dense()
        density = np.abs(phi) ** 4
        expected = np.subtract.outer(density, density) * np.multiply.outer(phi, phi.conj())
        self.assertDenseClose(expected, dense)

    def test_hermitian_contraction_is_anti_hermitian_succeeds(self) -> None:
        base = smooth_kernel(grid_1d(), order=4, rank=3)
        gamma = base + base.adjoint()
        self.assertTrue(gamma.is_hermitian())
        for j in (1, 2):
            contracted = contract(gamma, j)
            scale = kernel_norm(contracted)
            self.assertLess(kernel_norm(contracted + contracted.adjoint()), 1e-10 * scale)
            self.assertLess(abs(contracted.trace()), 1e-10 * scale)

    def test_zero_kernel_succeeds(self) -> None:
        zero = SeparableKernel.zero(grid_1d(M=4), 3)
        self.assertEqual(0, contract(zero, 1).rank)
        self.assertEqual(0.0, kernel_norm(zero))

    def test_invalid_slots_fails(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=4, rank=1)
        with self.assertRaisesRegex(ValidationError, "other than") as ctx:
            contract(gamma, 3, (3, 2))
        self.assertEqual(2, len(ctx.exception.violations))
        with self.assertRaises(ValidationError):
            contract(small_kernel(grid_1d(M=4), order=2, rank=1), 1)


class KernelInnerTests(DenseOracleTestCase):
    def test_matches_dense_succeeds(self) -> None:
        grid = grid_1d(M=4)
        for order in (1, 2):
            first = small_kernel(grid, order=order, rank=3, offset=order)
            second = small_kernel(grid, order=order, rank=2, offset=10 + order)
            for alpha in (0.0, 0.75, 1.0):
                expected = oracles.sobolev_inner(first.to_dense(), second.to_dense(), grid, alpha)
                actual = kernel_inner(first, second, alpha)
                self.assertLess(abs(expected - actual), 1e-12 * max(1.0, abs(expected)))

    def test_frobenius_norm_succeeds(self) -> None:
        gamma = small_kernel(grid_1d(M=4), order=1, rank=3)
        dense = gamma.to_dense()
        expected = math.sqrt(gamma.grid.h**2 * float(np.sum(np.abs(dense) ** 2)))
        self.assertAlmostEqual(expected, kernel_norm(gamma), delta=1e-12 * expected)

    def test_factorized_norm_succeeds(self) -> None:
        grid = grid_1d()
        phi = WaveFunction(grid=grid, values=2.0 * gaussian_wave(grid).values)
        for k in (1, 2, 3):
            gamma = factorized(phi, k)
            self.assertAlmostEqual(4.0 ** (2 * k), kernel_inner(gamma, gamma).real)

    def test_difference_of_close_kernels_succeeds(self) -> None:
        gamma = smooth_kernel(grid_1d(), order=3, rank=4)
        norm = kernel_norm(gamma)
        self.assertEqual(0.0, kernel_norm(gamma - gamma))
        difference = kernel_norm(gamma.scaled(1 + 1e-11) - gamma)
        self.assertAlmostEqual(1e-11 * norm, difference, delta=1e-14 * norm)

    def test_order_mismatch_fails(self) -> None:
        grid = grid_1d(M=4)
        with self.assertRaisesRegex(ValidationError, "kernel_mismatch"):
            kernel_inner(small_kernel(grid, 1, 1), small_kernel(grid, 2, 1))


class DuhamelResidualTests(unittest.TestCase):
    T = 0.1
    STEPS = 2048

    @classmethod
    def setUpClass(cls) -> None:
        phi0 = periodic_bump(grid_1d(M=32))
        params = NlsParams(dt=cls.T / cls.STEPS, b0=1.0)
        cls.quintic = evolve(phi0, params, cls.T, logger=quiet_logger())

    def residual(self, nodes: int, rule: QuadratureRule, b0: float = 1.0) -> float:
        return duhamel_residual(self.quintic, 1, b0, nodes, rule, logger=quiet_logger())

    def test_free_trajectory_succeeds(self) -> None:
        phi0 = periodic_bump(grid_1d(M=32))
        free = evolve(phi0, NlsParams(dt=0.01), self.T, logger=quiet_logger())
        for k in (1, 2):
            residual = duhamel_residual(free, k, 0.0, 10, QuadratureRule.TRAPEZOID)
            self.assertLess(residual, 1e-10)

    def test_trapezoid_order_succeeds(self) -> None:
        coarse = self.residual(32, QuadratureRule.TRAPEZOID)
        fine = self.residual(64, QuadratureRule.TRAPEZOID)
        self.assertGreaterEqual(coarse / fine, 3.5)

    def test_simpson_accuracy_succeeds(self) -> None:
        self.assertLess(self.residual(256, QuadratureRule.SIMPSON), 1e-6)
        simpson = self.residual(64, QuadratureRule.SIMPSON)
        self.assertLess(simpson, self.residual(32, QuadratureRule.TRAPEZOID))

    def test_wrong_coupling_plateaus_succeeds(self) -> None:
        correct = self.residual(256, QuadratureRule.SIMPSON)
        wrong = self.residual(256, QuadratureRule.SIMPSON, b0=2.0)
        self.assertGreaterEqual(wrong, 100 * correct)

    def test_snapshots_off_node_grid_fails(self) -> None:
        with self.assertRaisesRegex(ValidationError, "insufficient_snapshots"):
            self.residual(3, QuadratureRule.TRAPEZOID)

    def test_simpson_odd_nodes_fails(self) -> None:
        with self.assertRaisesRegex(ValidationError, "invalid_quadrature"):
            self.residual(1, QuadratureRule.SIMPSON)

    def test_quadrature_weights_succeeds(self) -> None:
        self.assertEqual([0.5, 1.0, 1.0, 0.5], QuadratureRule.TRAPEZOID.weights(3, 1.0))
        simpson = QuadratureRule.SIMPSON.weights(4, 3.0)
        self.assertEqual([1.0, 4.0, 2.0, 4.0, 1.0], simpson)


class DuhamelIntegrandTests(unittest.TestCase):
    def test_slot_pair_swap_succeeds(self) -> None:
        self.assertEqual([1, 2, 5, 6, 3, 4], slot_pair_swap(6, 2, 1))
        self.assertEqual([1, 4, 5, 2, 3, 6, 7], slot_pair_swap(7, 1, 1))
        with self.assertRaises(ValidationError):
            slot_pair_swap(5, 2, 1)

    def test_time_swap_succeeds(self) -> None:
        self.assertEqual([0.4, 0.2, 0.3, 0.1], time_swap([0.4, 0.3, 0.2, 0.1], 1))

    def test_integrand_order_succeeds(self) -> None:
        gamma0 = smooth_kernel(grid_1d(M=16), order=5, rank=1)
        integrand = duhamel_integrand(gamma0, [1, 2], [0.3, 0.2, 0.1], 1)
        self.assertEqual(1, integrand.order)
        self.assertEqual(4, integrand.rank)

    def test_bad_picks_fails(self) -> None:
        gamma0 = smooth_kernel(grid_1d(M=16), order=5, rank=1)
        with self.assertRaises(ValidationError) as ctx:
            duhamel_integrand(gamma0, [2, 4], [0.3, 0.2], 1)
        self.assertEqual(3, len(ctx.exception.violations))

    def test_acceptable_move_preserves_integrand_succeeds(self) -> None:
        gamma0 = smooth_kernel(grid_1d(M=16), order=6, rank=2)
        distance = integrand_distance(gamma0, [2, 1], [1, 2], [0.5, 0.35, 0.1], 2, 1)
        self.assertLess(distance, 1e-10)


class CommutationTests(unittest.TestCase):
    def test_zero_gaps_succeeds(self) -> None:
        gamma = smooth_kernel(grid_1d(M=16), order=6, rank=3)
        self.assertLess(commutation_check(gamma, [0.2] * 4, 1, 2, 1, r=2), 1e-12)

    def test_generic_times_succeeds(self) -> None:
        generator = rng(7)
        for sample in range(5):
            gamma = smooth_kernel(grid_1d(M=16), order=6, rank=3, offset=sample)
            times = sorted(generator.uniform(0.0, 1.0, 4), reverse=True)
            scale = float(np.sum(np.abs(gamma.coefficients)))
            self.assertLess(commutation_check(gamma, times, 1, 2, 1, r=2), 1e-10 * scale)

    def test_plus_only_succeeds(self) -> None:
        gamma = smooth_kernel(grid_1d(M=16), order=7, rank=3)
        times = [0.9, 0.6, 0.5, 0.1]
        scale = float(np.sum(np.abs(gamma.coefficients)))
        self.assertLess(
            commutation_check(gamma, times, 1, 3, 1, r=3, plus_only=True), 1e-10 * scale
        )

    def test_slot_out_of_range_fails(self) -> None:
        gamma = smooth_kernel(grid_1d(M=16), order=5, rank=1)
        with self.assertRaisesRegex(ValidationError, "1 <= i < l"):
            commutation_check(gamma, [0.3, 0.2, 0.1, 0.0], 1, 2, 1, r=1)

    @pytest.mark.slow
    def test_sobolev_contraction_ratio_is_bounded_succeeds(self) -> None:
        grid = grid_1d(M=64)
        for alpha in (0.6, 0.75, 1.0):
            ratios = []
            for sample in range(100):
                gamma = smooth_kernel(grid, order=3, rank=3, offset=sample)
                ratios.append(kernel_norm(contract(gamma, 1), alpha) / kernel_norm(gamma, alpha))
            self.assertTrue(np.all(np.isfinite(ratios)))
            self.assertLess(max(ratios), 100.0)
