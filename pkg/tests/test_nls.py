import math
import unittest
from unittest import mock

import numpy as np

from quintlab.exceptions import NumericalError, ValidationError
from quintlab.grid import GridSpec, plane_wave
from quintlab.nls import (
    NlsModel,
    NlsParams,
    WaveFunction,
    energy,
    evolve,
    mass,
    plane_wave_solution,
    self_convergence,
    step_strang,
    trajectory_records,
)
from quintlab.nls.solver import check_finite
from tests.common import gaussian_wave, grid_1d, grid_2d, quiet_logger


class NlsParamsTests(unittest.TestCase):
    def test_quintic_couplings_succeeds(self) -> None:
        p = NlsParams(dt=1e-3, b0=2.0, lambda2=5.0)
        self.assertEqual(0.0, p.cubic_coupling)
        self.assertEqual(2.0, p.quintic_coupling)

    def test_mixed_couplings_succeeds(self) -> None:
        p = NlsParams(dt=1e-3, b0=2.0, lambda2=1.0, lambda3=0.5, model=NlsModel.MIXED)
        self.assertEqual(1.0, p.cubic_coupling)
        self.assertEqual(0.5, p.quintic_coupling)

    def test_with_dt_and_b0_succeeds(self) -> None:
        p = NlsParams(dt=1e-3, b0=1.0).with_dt(5e-4).with_b0(3.0)
        self.assertEqual(5e-4, p.dt)
        self.assertEqual(3.0, p.b0)

    def test_focusing_fails(self) -> None:
        with self.assertRaisesRegex(ValidationError, "defocusing") as ctx:
            NlsParams(dt=0.0, b0=-1.0)
        self.assertEqual(2, len(ctx.exception.violations))


class WaveFunctionTests(unittest.TestCase):
    def test_normalized_succeeds(self) -> None:
        grid = grid_1d()
        phi = WaveFunction(grid=grid, values=3.0 * np.ones(grid.shape))
        self.assertAlmostEqual(1.0, phi.normalized().mass())

    def test_normalize_zero_fails(self) -> None:
        grid = grid_1d()
        with self.assertRaisesRegex(ValidationError, "zero_field"):
            WaveFunction(grid=grid, values=np.zeros(grid.shape)).normalized()

    def test_wrong_grid_fails(self) -> None:
        with self.assertRaisesRegex(ValidationError, "dimension_mismatch"):
            WaveFunction(grid=grid_2d(), values=np.zeros(16))


class StrangTests(unittest.TestCase):
    def test_zero_field_stays_zero_succeeds(self) -> None:
        grid = grid_1d()
        phi = WaveFunction(grid=grid, values=np.zeros(grid.shape))
        after = step_strang(phi, NlsParams(dt=1e-2, b0=1.0))
        np.testing.assert_array_equal(np.zeros(grid.shape), after.values)
        self.assertAlmostEqual(1e-2, after.t)

    def test_plane_wave_phase_succeeds(self) -> None:
        grid = GridSpec(d=1, M=64, L=2 * math.pi)
        p = NlsParams(dt=1e-4, b0=1.0)
        phi0 = WaveFunction(grid=grid, values=plane_wave(grid, 1, 1.0))
        final = evolve(phi0, p, 0.1, 10**6, logger=quiet_logger())[-1]
        exact = plane_wave_solution(grid, 1.0, 1, p, 0.1)
        self.assertLess(float(np.max(np.abs(final.values - exact))), 1e-8)

    def test_mixed_plane_wave_phase_succeeds(self) -> None:
        grid = grid_2d()
        p = NlsParams(dt=1e-3, lambda2=1.0, lambda3=0.5, model=NlsModel.MIXED)
        phi0 = WaveFunction(grid=grid, values=plane_wave(grid, (1, 1), 0.7))
        final = evolve(phi0, p, 0.05, 10**6, logger=quiet_logger())[-1]
        exact = plane_wave_solution(grid, 0.7, 1, p, 0.05)
        self.assertLess(float(np.max(np.abs(final.values - exact))), 1e-8)

    def test_mass_conservation_succeeds(self) -> None:
        phi0 = gaussian_wave(GridSpec(d=1, M=64, L=2 * math.pi))
        trajectory = evolve(phi0, NlsParams(dt=1e-4, b0=1.0), 0.1, 100, logger=quiet_logger())
        drift = max(abs(mass(phi) - mass(phi0)) for phi in trajectory)
        self.assertLess(drift, 1e-12)

    def test_energy_conservation_succeeds(self) -> None:
        phi0 = gaussian_wave(GridSpec(d=1, M=64, L=2 * math.pi))
        p = NlsParams(dt=1e-4, b0=1.0)
        trajectory = evolve(phi0, p, 0.1, 100, logger=quiet_logger())
        e0 = energy(phi0, p)
        drift = max(abs(energy(phi, p) - e0) for phi in trajectory) / e0
        self.assertLess(drift, 1e-4)

    def test_self_convergence_order_succeeds(self) -> None:
        phi0 = gaussian_wave(GridSpec(d=1, M=64, L=2 * math.pi))
        result = self_convergence(
            phi0, NlsParams(dt=1e-3, b0=1.0), 0.1, [2e-3, 1e-3, 5e-4, 2.5e-4]
        )
        self.assertEqual(3, len(result.errors))
        for order in result.orders:
            self.assertGreaterEqual(order, 1.9)
            self.assertLessEqual(order, 2.1)

    def test_nonfinite_field_fails(self) -> None:
        grid = grid_1d()
        values = np.ones(grid.shape, dtype=np.complex128)
        values[5] = np.nan
        with self.assertRaisesRegex(NumericalError, "nonfinite_field") as ctx:
            step_strang(WaveFunction(grid=grid, values=values), NlsParams(dt=1e-3, b0=1.0))
        self.assertEqual([5], ctx.exception.context["node"])


class EvolveTests(unittest.TestCase):
    def test_snapshots_succeeds(self) -> None:
        phi0 = gaussian_wave(grid_1d())
        trajectory = evolve(phi0, NlsParams(dt=1e-3, b0=1.0), 0.01, 3, logger=quiet_logger())
        times = [phi.t for phi in trajectory]
        np.testing.assert_allclose([0.0, 0.003, 0.006, 0.009, 0.01], times)

    def test_invalid_arguments_fails(self) -> None:
        phi0 = gaussian_wave(grid_1d())
        with self.assertRaisesRegex(ValidationError, "invalid_input") as ctx:
            evolve(phi0, NlsParams(dt=1e-3), 0.0, 0)
        self.assertEqual(2, len(ctx.exception.violations))

    def test_dt_mismatch_fails(self) -> None:
        phi0 = gaussian_wave(grid_1d())
        with self.assertRaisesRegex(ValidationError, "dt_mismatch"):
            evolve(phi0, NlsParams(dt=3e-3), 0.01)

    def test_nonfinite_initial_field_fails(self) -> None:
        grid = grid_1d()
        values = np.ones(grid.shape, dtype=np.complex128)
        values[3] = np.inf
        with self.assertRaisesRegex(NumericalError, "nonfinite_field") as ctx:
            evolve(
                WaveFunction(grid=grid, values=values),
                NlsParams(dt=1e-3, b0=1.0),
                0.01,
                logger=quiet_logger(),
            )
        self.assertEqual({"node": [3], "t": 0.0}, ctx.exception.context)

    def test_each_state_checked_once_succeeds(self) -> None:
        phi0 = gaussian_wave(grid_1d())
        with mock.patch("quintlab.nls.solver.check_finite", wraps=check_finite) as checked:
            evolve(phi0, NlsParams(dt=1e-3, b0=1.0), 0.01, 3, logger=quiet_logger())
        times = [call.kwargs["t"] for call in checked.call_args_list]
        np.testing.assert_allclose([n * 1e-3 for n in range(11)], times)

    def test_trajectory_records_succeeds(self) -> None:
        phi0 = gaussian_wave(grid_1d())
        p = NlsParams(dt=1e-3, b0=1.0)
        records = trajectory_records(evolve(phi0, p, 0.005, 1, logger=quiet_logger()), p)
        self.assertEqual(6, len(records))
        self.assertAlmostEqual(1.0, records[0].mass)
        self.assertEqual(6, len({record.checksum for record in records}))
