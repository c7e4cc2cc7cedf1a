import math
import unittest

import numpy as np
import pytest

from quintlab.bounds import (
    DEFAULT_RADII,
    BoundReport,
    Verdict,
    c_alpha,
    crucialint,
    crucialint_scan,
    expected_exponent,
    highreg_probe,
    highreg_ratio,
    iterated_duhamel_bound,
    km_bound_check,
    km_probe,
    map_count_bound,
    mollifier,
    observable_norm,
    poincare_check,
    poincare_ladder,
    potential_scaling_check,
    random_kernel,
    sobolev_trilinear_ratio,
    spacetime_bound_probe,
    trace_term,
    trilinear_probe,
    truncated_crucialint,
    truncation_ladder,
)
from quintlab.boardgame import map_count
from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec, sobolev_norm
from quintlab.hierarchy import SeparableKernel, factorized, kernel_norm
from quintlab.nbody import GaussianPotential
from quintlab.nls import WaveFunction
from tests.common import grid_1d, grid_2d, quiet_logger, rng


def periodic_bump(grid: GridSpec) -> WaveFunction:
    values = np.exp(np.cos(2 * math.pi * grid.coordinates()[0] / grid.L))
    return WaveFunction(grid=grid, values=values).normalized()


class BoundReportTests(unittest.TestCase):
    def test_from_samples_skips_missing_succeeds(self) -> None:
        report = BoundReport.from_samples(
            name="probe", parameters={"p": 2}, ratios=[None, math.nan, 0.5, 2.0, 1.0]
        )
        self.assertEqual(2.0, report.observed_sup)
        self.assertEqual(3, report.sample_size)
        self.assertAlmostEqual(0.75, report.refinement)
        self.assertEqual(Verdict.UNBOUNDED_TREND, report.verdict)
        self.assertEqual("unbounded_trend", report.to_dict()["verdict"])

    def test_from_samples_empty_succeeds(self) -> None:
        report = BoundReport.from_samples(name="probe", parameters={}, ratios=[None, None])
        self.assertEqual(0.0, report.observed_sup)
        self.assertEqual(0, report.sample_size)
        self.assertTrue(report.verdict.is_bounded)

    def test_verdict_from_refinement_succeeds(self) -> None:
        self.assertEqual(Verdict.BOUNDED, Verdict.from_refinement(0.01))
        self.assertEqual(Verdict.UNBOUNDED_TREND, Verdict.from_refinement(0.5))


class CrucialIntegralTests(unittest.TestCase):
    def test_closed_forms_at_zero_momentum_succeeds(self) -> None:
        self.assertAlmostEqual(2.0, crucialint(0.5, 1, 0.0), delta=1e-6)
        self.assertAlmostEqual(math.pi, crucialint(1.0, 1, 0.0), delta=1e-6)
        self.assertAlmostEqual(2 * math.pi, crucialint(0.5, 2, [0.0, 0.0]), delta=1e-6)

    def test_divergent_tail_succeeds(self) -> None:
        self.assertEqual(math.inf, crucialint(1.0, 2, 3.0))
        report = crucialint_scan(1.0, 2)
        self.assertEqual(Verdict.UNBOUNDED_TREND, report.verdict)
        self.assertTrue(math.isfinite(report.observed_sup))
        self.assertGreater(report.refinement, 0.1)
        truncated = report.parameters["truncated"]
        self.assertEqual(list(DEFAULT_RADII), report.parameters["radii"])
        self.assertEqual(truncated[-1], report.observed_sup)
        for R, value in zip(DEFAULT_RADII, truncated):
            self.assertAlmostEqual(math.pi * math.log1p(R**2), value, delta=1e-6 * value)

    def test_truncated_integral_grows_with_radius_succeeds(self) -> None:
        ladder = truncation_ladder(1.0, 2, [0.0, 0.0])
        self.assertEqual(Verdict.UNBOUNDED_TREND, ladder.verdict)
        for smaller, larger in zip(ladder.values, ladder.values[1:]):
            self.assertGreater(larger, smaller)
        for R, value in zip(ladder.radii, ladder.values):
            self.assertAlmostEqual(math.pi * math.log1p(R**2), value, delta=1e-6 * value)

    def test_truncation_ladder_of_convergent_integral_succeeds(self) -> None:
        ladder = truncation_ladder(0.5, 1)
        self.assertEqual(Verdict.BOUNDED, ladder.verdict)
        for R, value in zip(ladder.radii, ladder.values):
            self.assertAlmostEqual(2 * R / math.sqrt(1 + R**2), value, delta=1e-8)
        self.assertAlmostEqual(crucialint(0.5, 1, 0.0), ladder.values[-1], delta=1e-6)
        self.assertAlmostEqual(
            crucialint(0.5, 1, 0.0), truncated_crucialint(0.5, 1, 0.0, 1e6), delta=1e-6
        )

    def test_truncation_ladder_bad_radii_fails(self) -> None:
        with self.assertRaises(ValidationError):
            truncation_ladder(1.0, 2, radii=(1e3,))
        with self.assertRaises(ValidationError):
            truncation_ladder(1.0, 2, radii=(1e3, 1e2))
        with self.assertRaises(ValidationError):
            truncated_crucialint(1.0, 2, 0.0, 0.0)

    def test_scan_is_bounded_in_one_dimension_succeeds(self) -> None:
        report = crucialint_scan(0.75, 1)
        self.assertEqual(Verdict.BOUNDED, report.verdict)
        self.assertEqual("crucialint", report.name)
        self.assertIn("P_at_sup", report.parameters)
        self.assertTrue(math.isfinite(report.observed_sup))

    def test_out_of_range_fails(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            crucialint(1.5, 3, 0.0)
        self.assertEqual(2, len(ctx.exception.violations))

    @pytest.mark.slow
    def test_c_alpha_at_one_succeeds(self) -> None:
        result = c_alpha(1.0, 1)
        self.assertAlmostEqual(math.pi**2, result.value, delta=1e-4)
        self.assertEqual(Verdict.BOUNDED, result.verdict)

    def test_c_alpha_diverges_succeeds(self) -> None:
        result = c_alpha(1.0, 2)
        self.assertEqual(math.inf, result.value)
        self.assertEqual(Verdict.UNBOUNDED_TREND, result.verdict)
        expected = math.pi * (math.log1p(1e8) - math.log1p(1e6))
        self.assertAlmostEqual(expected, result.error_bar, delta=1e-4)


class TrilinearTests(unittest.TestCase):
    def test_constant_fields_succeeds(self) -> None:
        grid = grid_1d(M=16)
        ones = np.ones(grid.shape * 2)
        for p in (2.0, 4.0):
            ratio = sobolev_trilinear_ratio(ones, ones, ones, p, grid)
            assert ratio is not None
            self.assertAlmostEqual((2 * math.pi) ** (-2 / p), ratio, delta=1e-12)

    def test_vanishing_denominator_succeeds(self) -> None:
        grid = grid_1d(M=16)
        ones = np.ones(grid.shape * 2)
        self.assertIsNone(sobolev_trilinear_ratio(ones, ones, np.zeros_like(ones), 2.0, grid))

    def test_bad_exponent_fails(self) -> None:
        grid = grid_1d(M=16)
        ones = np.ones(grid.shape * 2)
        with self.assertRaises(ValidationError):
            sobolev_trilinear_ratio(ones, ones, ones, 1.0, grid)
        with self.assertRaises(ValidationError):
            trilinear_probe(grid_2d(M=8), 3.0, rng(), samples=1, logger=quiet_logger())

    def test_bad_shape_fails(self) -> None:
        grid = grid_1d(M=16)
        ones = np.ones(grid.shape * 2)
        with self.assertRaisesRegex(ValidationError, "dimension_mismatch"):
            sobolev_trilinear_ratio(ones, ones, np.ones(16), 2.0, grid)

    def test_probe_succeeds(self) -> None:
        report = trilinear_probe(grid_1d(M=16), 2.0, rng(1), samples=3, logger=quiet_logger())
        self.assertEqual("sobolev_trilinear", report.name)
        self.assertEqual(3, report.sample_size)
        self.assertGreater(report.observed_sup, 0.0)


class HighRegularityTests(unittest.TestCase):
    def test_zero_kernel_succeeds(self) -> None:
        self.assertIsNone(highreg_ratio(SeparableKernel.zero(grid_1d(), 3), 1, 0.75))

    def test_probe_succeeds(self) -> None:
        report = highreg_probe(
            grid_1d(M=32), 0.75, rng(2), rank=1, samples=5, logger=quiet_logger()
        )
        self.assertEqual("highreg", report.name)
        self.assertEqual(5, report.sample_size)
        self.assertTrue(math.isfinite(report.observed_sup))
        self.assertGreater(report.observed_sup, 0.0)

    def test_random_kernel_shape_succeeds(self) -> None:
        gamma = random_kernel(grid_1d(M=16), 3, 2, rng(3))
        self.assertEqual(3, gamma.order)
        self.assertEqual(2, gamma.rank)


class KmBoundTests(unittest.TestCase):
    def test_rank_one_closed_form_succeeds(self) -> None:
        grid = grid_1d(M=64)
        phi = periodic_bump(grid)
        density = np.abs(phi.values) ** 2
        tenth = grid.h * float(np.sum(density**5))
        sixth = grid.h * float(np.sum(density**3))
        check = km_bound_check(factorized(phi, 3), 1, 0.0)
        self.assertAlmostEqual(math.sqrt(2 * tenth - 2 * sixth**2), check.lhs, delta=1e-8)
        self.assertAlmostEqual(math.sqrt(tenth), check.lhs_plus, delta=1e-8)
        self.assertAlmostEqual(sobolev_norm(phi.values, 1.0, grid) ** 6, check.rhs, delta=1e-8)

    def test_trace_term_succeeds(self) -> None:
        grid = grid_1d(M=32)
        phi = periodic_bump(grid)
        expected = sobolev_norm(phi.values, 1.0, grid) ** 4
        self.assertAlmostEqual(expected, trace_term(factorized(phi, 2)), delta=1e-10)

    def test_negative_weight_fails(self) -> None:
        gamma = factorized(periodic_bump(grid_1d()), 3).scaled(-1.0)
        with self.assertRaisesRegex(ValidationError, "non_positive_kernel"):
            km_bound_check(gamma, 1, 0.5)

    def test_probe_succeeds(self) -> None:
        report = km_probe(grid_1d(M=16), 0.5, rng(4), samples=3, logger=quiet_logger())
        self.assertEqual("km_trace", report.name)
        self.assertEqual(3, report.sample_size)


class PoincareTests(unittest.TestCase):
    def test_delta_mollifier_succeeds(self) -> None:
        grid = grid_1d(M=32)
        delta = mollifier(grid, grid.h)
        self.assertAlmostEqual(1.0, grid.h * float(np.sum(delta)))
        check = poincare_check(factorized(periodic_bump(grid), 3), grid.h, 0.5)
        self.assertLess(check.lhs, 1e-12)

    def test_unresolved_width_fails(self) -> None:
        grid = grid_1d(M=32)
        with self.assertRaisesRegex(ValidationError, "unresolved_mollifier"):
            mollifier(grid, 1.5 * grid.h)

    def test_matches_direct_quadrature_succeeds(self) -> None:
        grid = grid_1d(M=64)
        a = 0.4
        phi = periodic_bump(grid)
        density = np.abs(phi.values) ** 2
        kernel = mollifier(grid, a)
        smoothed = sum(grid.h * kernel[j] * np.roll(density, j) for j in range(grid.M))
        expected = abs(grid.h * float(np.sum(density * (smoothed**2 - density**2))))
        check = poincare_check(factorized(phi, 3), a, 0.5)
        self.assertAlmostEqual(expected, check.lhs, delta=1e-10 * max(1.0, expected))
        self.assertAlmostEqual(check.lhs / check.bound_factor, check.ratio)

    def test_observable_norm_succeeds(self) -> None:
        self.assertEqual(2.0, observable_norm(None))
        self.assertEqual(3.0, observable_norm(np.array([0.5, -1.5, 1.0])))

    def test_ladder_succeeds(self) -> None:
        grid = grid_1d(M=64)
        report = poincare_ladder(
            factorized(periodic_bump(grid), 3), 0.5, a_values=(0.44, 0.4)
        )
        self.assertEqual("poincare", report.name)
        self.assertEqual(2, report.sample_size)
        ratios = report.parameters["ratios"]
        self.assertEqual(max(ratios), report.observed_sup)
        self.assertAlmostEqual(max(ratios) / min(ratios), report.parameters["spread"])
        self.assertLess(report.parameters["spread"], 1.5)
        self.assertEqual(Verdict.BOUNDED, report.verdict)

    def test_ladder_with_falling_ratio_fails(self) -> None:
        grid = grid_1d(M=64)
        report = poincare_ladder(
            factorized(periodic_bump(grid), 3), 0.5, a_values=(0.8, 0.4, 0.2)
        )
        ratios = report.parameters["ratios"]
        self.assertGreater(ratios[0], ratios[1])
        self.assertGreater(ratios[1], ratios[2])
        self.assertEqual(ratios[0], report.observed_sup)
        self.assertGreater(report.parameters["spread"], 1.5)
        self.assertEqual(Verdict.UNBOUNDED_TREND, report.verdict)

    def test_bad_arguments_fail(self) -> None:
        grid = grid_1d(M=32)
        gamma = factorized(periodic_bump(grid), 3)
        with self.assertRaises(ValidationError):
            poincare_check(gamma, 0.5, 1.0)
        with self.assertRaises(ValidationError):
            poincare_check(factorized(periodic_bump(grid), 2), 0.5, 0.5)


class ScalingTests(unittest.TestCase):
    def test_one_dimensional_slope_succeeds(self) -> None:
        report = potential_scaling_check(GaussianPotential(), 0.1, [2, 4, 8, 16], 2.0, 1)
        self.assertAlmostEqual(0.25, report.expected)
        self.assertAlmostEqual(0.25, report.slope, delta=0.01)

    @pytest.mark.slow
    def test_two_dimensional_slope_succeeds(self) -> None:
        report = potential_scaling_check(GaussianPotential(), 0.05, [2, 4, 8, 16], 4.0, 2)
        self.assertAlmostEqual(0.225, report.expected)
        self.assertAlmostEqual(0.225, report.slope, delta=0.01)

    def test_unscaled_potential_succeeds(self) -> None:
        report = potential_scaling_check(GaussianPotential(), 0.0, [1, 3], 2.0, 1)
        for row in report.rows:
            self.assertAlmostEqual(1.0, row.ratio, delta=1e-12)
        self.assertLess(report.slope_error, 1e-10)

    def test_expected_exponent_succeeds(self) -> None:
        self.assertAlmostEqual(0.25, expected_exponent(0.1, 2.0, 1))

    def test_bad_arguments_fail(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            potential_scaling_check(GaussianPotential(), -0.1, [2], 0.5, 3)
        self.assertEqual(4, len(ctx.exception.violations))


class SpacetimeTests(unittest.TestCase):
    def test_curve_succeeds(self) -> None:
        grid = grid_2d(M=8)
        gamma = random_kernel(grid, 3, 1, rng(6))
        probe = spacetime_bound_probe(gamma, 1, 0.9, 0.1, 4, logger=quiet_logger())
        self.assertEqual(5, len(probe.curve))
        values = [v for _, v in probe.curve]
        self.assertEqual(0.0, values[0])
        self.assertEqual(sorted(values), values)
        self.assertAlmostEqual(probe.lhs, values[-1])
        self.assertAlmostEqual(probe.lhs / probe.rhs, probe.ratio)

    def test_zero_kernel_succeeds(self) -> None:
        probe = spacetime_bound_probe(
            SeparableKernel.zero(grid_2d(M=8), 3), 1, 0.9, 0.1, 2, logger=quiet_logger()
        )
        self.assertEqual((0.0, 0.0), (probe.lhs, probe.rhs))

    def test_contrast_exponent_succeeds(self) -> None:
        gamma = random_kernel(grid_2d(M=8), 3, 1, rng(7))
        with self.assertRaises(ValidationError):
            spacetime_bound_probe(gamma, 1, 1.0, 0.1, 2, logger=quiet_logger())
        probe = spacetime_bound_probe(gamma, 1, 1.0, 0.1, 2, strict=False, logger=quiet_logger())
        self.assertGreater(probe.lhs, 0.0)

    def test_wrong_dimension_fails(self) -> None:
        gamma = random_kernel(grid_1d(M=16), 3, 1, rng(8))
        with self.assertRaises(ValidationError):
            spacetime_bound_probe(gamma, 1, 0.9, 0.1, 2, logger=quiet_logger())


class IteratedDuhamelTests(unittest.TestCase):
    def test_bound_chain_holds_succeeds(self) -> None:
        grid = grid_1d(M=16)
        gamma0 = factorized(periodic_bump(grid), 4)
        bound = iterated_duhamel_bound(
            gamma0, 2, 1, 0.75, 0.1, 4, rng(9), stage_constant=10.0, logger=quiet_logger()
        )
        self.assertEqual(map_count(2, 1), bound.maps)
        self.assertGreater(bound.observed, 0.0)
        self.assertGreaterEqual(bound.standard_error, 0.0)
        self.assertEqual(10.0, bound.constant)
        self.assertAlmostEqual(kernel_norm(gamma0, 0.75), bound.initial_norm)
        expected = 10.0 * bound.initial_norm * map_count_bound(2, 1) * 0.1
        self.assertAlmostEqual(expected, bound.chain_bound)
        self.assertGreater(bound.worst_stage_ratio, 0.0)
        self.assertLessEqual(bound.worst_stage_ratio, 10.0)
        self.assertTrue(bound.within)

    def test_small_stage_constant_fails(self) -> None:
        gamma0 = factorized(periodic_bump(grid_1d(M=16)), 4)
        bound = iterated_duhamel_bound(
            gamma0, 2, 1, 0.75, 0.1, 4, rng(9), stage_constant=1e-6, logger=quiet_logger()
        )
        self.assertGreater(bound.observed, bound.chain_bound)
        self.assertFalse(bound.within)

    def test_map_count_bound_succeeds(self) -> None:
        self.assertEqual(2.0, map_count_bound(1, 1))
        for r in range(1, 5):
            for n in range(1, 4):
                self.assertLessEqual(map_count(r, n), map_count_bound(r, n))

    def test_order_mismatch_fails(self) -> None:
        gamma0 = factorized(periodic_bump(grid_1d(M=16)), 3)
        with self.assertRaises(ValidationError) as ctx:
            iterated_duhamel_bound(
                gamma0, 2, 1, 0.25, 0.1, 1, rng(), stage_constant=1.0, logger=quiet_logger()
            )
        self.assertEqual(3, len(ctx.exception.violations))
