"""Strang split-step integration of the defocusing quintic and mixed NLS.

One step is: half free flow exp(i dt/2 Laplacian) in Fourier space, the exact nonlinear phase
exp(-i dt (lambda2 |phi|^2 + q |phi|^4)) pointwise, and another half free flow. The nonlinear
substep is exact because |phi| is constant along the pure nonlinear flow. Both substeps have
unit modulus, so the mass is preserved up to roundoff.

The conserved energy is

    E(phi) = int |grad phi|^2 + (lambda2 / 2) int |phi|^4 + (q / 3) int |phi|^6,

whose coefficients are fixed by dE/dt = 0 along i d_t phi = -Laplacian phi + lambda2 |phi|^2 phi
+ q |phi|^4 phi: the variation of (c/n) int |phi|^(2n) is c |phi|^(2n-2) phi.
"""

import math
from functools import lru_cache
from typing import Any, List, NamedTuple, Optional, Sequence

import numpy as np
import numpy.typing as npt

from quintlab.exceptions import NumericalError, ValidationError
from quintlab.grid import GridSpec, SpectralMultiplier, transform_forward, transform_inverse
from quintlab.grid.grid_spec import ComplexArray
from quintlab.helpers import Helpers
from quintlab.logging import DefaultLogger, Logger
from quintlab.nls.wave_function import NlsParams, WaveFunction

DEFAULT_LOGGER: Logger = DefaultLogger("nls[shared]")


def check_finite(values: npt.NDArray[Any], *, t: float, what: str = "field") -> None:
    """Raises `NumericalError` naming the first nonfinite node of `values`."""
    finite = np.isfinite(values)
    if not finite.all():
        node = [int(i) for i in np.argwhere(~finite)[0]]
        raise NumericalError(
            f"Nonfinite {what} value at node {node}.",
            code="nonfinite_field",
            details="HINT: reduce dt or the couplings.",
            context={"node": node, "t": t},
        )


@lru_cache(maxsize=32)
def _half_flow(grid: GridSpec, dt: float) -> SpectralMultiplier:
    return SpectralMultiplier.free_flow(grid, dt / 2)


class StrangStepper:
    """Callable advancing a wave function by one Strang step of `params.dt`."""

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def params(self) -> NlsParams:
        return self._params

    def __init__(self, *, grid: GridSpec, params: NlsParams, workers: Optional[int] = None):
        self._grid = grid
        self._params = params
        self._workers = workers
        self._half_flow = _half_flow(grid, params.dt)

    def nonlinear_phase(self, values: ComplexArray) -> ComplexArray:
        density = np.abs(values) ** 2
        potential = self._params.cubic_coupling * density
        potential = potential + self._params.quintic_coupling * density**2
        return np.exp(-1j * self._params.dt * potential)

    def advance(self, values: ComplexArray) -> ComplexArray:
        kick = self._half_flow.values
        spectrum = transform_forward(values, self._grid, workers=self._workers) * kick
        values = transform_inverse(spectrum, self._grid, workers=self._workers)
        values = values * self.nonlinear_phase(values)
        spectrum = transform_forward(values, self._grid, workers=self._workers) * kick
        return transform_inverse(spectrum, self._grid, workers=self._workers)

    def __call__(self, phi: WaveFunction) -> WaveFunction:
        check_finite(phi.values, t=phi.t)
        values = self.advance(phi.values)
        check_finite(values, t=phi.t + self._params.dt)
        return phi.evolved(values, t=phi.t + self._params.dt)


def step_strang(phi: WaveFunction, p: NlsParams) -> WaveFunction:
    return StrangStepper(grid=phi.grid, params=p)(phi)


def mass(phi: WaveFunction) -> float:
    return phi.mass()


def energy(phi: WaveFunction, p: NlsParams) -> float:
    grid = phi.grid
    spectrum = transform_forward(phi.values, grid)
    kinetic = grid.cell_volume * np.sum(grid.k_squared * np.abs(spectrum) ** 2)
    density = np.abs(phi.values) ** 2
    cubic = p.cubic_coupling / 2 * grid.cell_volume * np.sum(density**2)
    quintic = p.quintic_coupling / 3 * grid.cell_volume * np.sum(density**3)
    return float(kinetic + cubic + quintic)


def evolve(
    phi0: WaveFunction,
    p: NlsParams,
    T: float,
    record_every: int = 1,
    *,
    workers: Optional[int] = None,
    logger: Logger = DEFAULT_LOGGER,
) -> List[WaveFunction]:
    """Integrates from `phi0` over [phi0.t, phi0.t + T].

    Snapshots are taken every `record_every` steps; the final state is always recorded.
    """
    violations = []
    if not T > 0:
        violations.append(f"T must be positive, got {T}")
    if record_every < 1:
        violations.append(f"record_every must be >= 1, got {record_every}")
    if violations:
        raise ValidationError("Cannot evolve wave function.", violations=violations)
    try:
        steps = Helpers.step_count(T, p.dt)
    except ValueError as exc:
        raise ValidationError(
            "Cannot evolve wave function.", violations=[str(exc)], code="dt_mismatch"
        ) from None

    stepper = StrangStepper(grid=phi0.grid, params=p, workers=workers)
    trajectory = [phi0]
    values = phi0.values
    check_finite(values, t=phi0.t)
    with logger.timed("nls evolve", steps=steps, dt=p.dt):
        for n in range(1, steps + 1):
            values = stepper.advance(values)
            t = phi0.t + n * p.dt
            check_finite(values, t=t)
            if n % record_every == 0 or n == steps:
                trajectory.append(phi0.evolved(values, t=t))
        logger.debug("nls evolve snapshots", count=len(trajectory))
    return trajectory


class TrajectoryRecord(NamedTuple):
    t: float
    mass: float
    energy: float
    checksum: str


def trajectory_records(trajectory: Sequence[WaveFunction], p: NlsParams) -> List[TrajectoryRecord]:
    return [
        TrajectoryRecord(
            t=phi.t,
            mass=mass(phi),
            energy=energy(phi, p),
            checksum=Helpers.field_checksum(phi.values),
        )
        for phi in trajectory
    ]


def plane_wave_solution(
    grid: GridSpec, amplitude: float, mode: int, p: NlsParams, t: float
) -> ComplexArray:
    """Exact solution A exp(i k.x) exp(-i (|k|^2 + lambda2 A^2 + q A^4) t), k = 2 pi mode / L."""
    k = 2 * np.pi * mode / grid.L
    omega = grid.d * k**2 + p.cubic_coupling * amplitude**2 + p.quintic_coupling * amplitude**4
    phase = sum(k * x for x in grid.coordinates())
    return amplitude * np.exp(1j * phase) * np.exp(-1j * omega * t)


class SelfConvergence(NamedTuple):
    dts: List[float]
    errors: List[float]
    orders: List[float]


def self_convergence(
    phi0: WaveFunction, p: NlsParams, T: float, dts: Sequence[float]
) -> SelfConvergence:
    """L2 distances between final states at successive time steps and the observed orders."""
    finals = [evolve(phi0, p.with_dt(dt), T, record_every=10**9)[-1] for dt in dts]
    grid = phi0.grid
    errors = [
        grid.l2_norm(coarse.values - fine.values) for coarse, fine in zip(finals, finals[1:])
    ]
    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:]) if a > 0 and b > 0]
    return SelfConvergence(dts=list(dts), errors=errors, orders=orders)
