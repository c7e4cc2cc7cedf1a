"""Exact evolution of N bosons under the scaled three-body Hamiltonian.

The interaction field is W = (1/N^2) sum_{i<j<k} U_N(x_i, x_j, x_k), where U_N is the mean of
V_N over the three choices of base particle, V_N(x_b - x_c, x_b - x_e). The per-triple values
and the per-node stack of triple contributions are summed in sorted order, so exchanging two
particles permutes equal summands and leaves W bit-identical.
"""

import itertools
import math
from typing import Any, Optional

import numpy as np
import numpy.typing as npt

from quintlab.constants import DEFAULT_MEMORY_CAP, MIN_AUTO_POINTS, POTENTIAL_PHASE_LIMIT
from quintlab.exceptions import NumericalError, ResourceCapError, ValidationError
from quintlab.grid import GridSpec, transform_tensor
from quintlab.grid.grid_spec import ComplexArray, FloatArray
from quintlab.nbody.potentials import PotentialSpec, minimal_image
from quintlab.nbody.state import MarginalDensity, NBodyState
from quintlab.nls.solver import check_finite

COMPLEX_BYTES = 16
FLOAT_BYTES = 8


def tensor_bytes(grid: GridSpec, N: int) -> int:
    return int(grid.M ** (grid.d * N)) * COMPLEX_BYTES


def field_bytes(grid: GridSpec, N: int) -> int:
    triples = math.comb(N, 3)
    # the stack of triple contributions plus the index arrays of the three-particle grid
    stack = int(grid.M ** (grid.d * N)) * FLOAT_BYTES * (triples + 1)
    return stack + int(grid.M ** (3 * grid.d)) * FLOAT_BYTES * (3 * grid.d + 12)


def marginal_bytes(grid: GridSpec, k: int) -> int:
    return int(grid.M ** (2 * grid.d * k)) * COMPLEX_BYTES


def evolution_bytes(grid: GridSpec, N: int, k: int) -> int:
    """Working set of one evolution: state, spectrum, phases, the field stack and the marginal."""
    return 4 * tensor_bytes(grid, N) + field_bytes(grid, N) + marginal_bytes(grid, k)


def _check_cap(message: str, required: int, memory_cap: int) -> None:
    if required > memory_cap:
        raise ResourceCapError(
            message,
            required=required,
            allowed=memory_cap,
            details="HINT: lower M or N, or raise the memory cap.",
        )


def choose_points(
    requested: int, *, d: int, N: int, k: int, memory_cap: int = DEFAULT_MEMORY_CAP
) -> int:
    """The largest power of two <= `requested` (and >= 8) whose evolution fits the cap."""
    M = requested
    while M >= MIN_AUTO_POINTS:
        if evolution_bytes(GridSpec(d=d, M=M, L=1.0), N, k) <= memory_cap:
            return M
        M //= 2
    required = evolution_bytes(GridSpec(d=d, M=MIN_AUTO_POINTS, L=1.0), N, k)
    raise ResourceCapError(
        f"Cannot fit N={N} particles in d={d} on any grid with M >= {MIN_AUTO_POINTS}.",
        required=required,
        allowed=memory_cap,
    )


def choose_dt(T: float, dt_max: float, field_max: float) -> float:
    """The largest dt <= dt_max dividing T with dt * max W < POTENTIAL_PHASE_LIMIT."""
    steps = max(1, math.ceil(T / dt_max - 1e-9))
    if field_max > 0:
        steps = max(steps, math.floor(T * field_max / POTENTIAL_PHASE_LIMIT) + 1)
    return T / steps


def _triple_field(spec: PotentialSpec, grid: GridSpec) -> FloatArray:
    """U_N on the three-particle product grid, shape (M,) * 3d."""
    d = grid.d
    index = np.indices((grid.M,) * (3 * d))
    positions = [index[p * d : (p + 1) * d] for p in range(3)]

    def displacement(p: int, q: int) -> FloatArray:
        return minimal_image(grid, positions[p] - positions[q])

    bases = np.stack(
        [
            spec.scaled(displacement(0, 1), displacement(0, 2)),
            spec.scaled(displacement(1, 0), displacement(1, 2)),
            spec.scaled(displacement(2, 0), displacement(2, 1)),
        ]
    )
    return np.sort(bases, axis=0).sum(axis=0) / 3


def potential_energy_field(
    spec: PotentialSpec, grid: GridSpec, *, memory_cap: int = DEFAULT_MEMORY_CAP
) -> FloatArray:
    N, d = spec.N, grid.d
    shape = (grid.M,) * (d * N)
    if N < 3:
        return np.zeros(shape)
    _check_cap("Cannot build the interaction field.", field_bytes(grid, N), memory_cap)

    triple = _triple_field(spec, grid)
    contributions = []
    for combo in itertools.combinations(range(N), 3):
        block_shape = [1] * (d * N)
        for p in combo:
            block_shape[p * d : (p + 1) * d] = [grid.M] * d
        contributions.append(np.broadcast_to(triple.reshape(block_shape), shape))
    stack = np.sort(np.stack(contributions), axis=0)
    return stack.sum(axis=0) / N**2


def kinetic_symbol(grid: GridSpec, N: int) -> FloatArray:
    """sum_p |k_p|^2 on the N-particle frequency grid."""
    d = grid.d
    total = np.zeros((grid.M,) * (d * N))
    for p in range(N):
        block_shape = [1] * (d * N)
        block_shape[p * d : (p + 1) * d] = [grid.M] * d
        total = total + grid.k_squared.reshape(block_shape)
    return total


class NBodyStepper:
    """Strang step for the N-body flow: half free flow on every particle axis, the exact
    potential phase exp(-i dt W), another half free flow."""

    @property
    def dt(self) -> float:
        return self._dt

    def __init__(
        self,
        *,
        grid: GridSpec,
        N: int,
        field: FloatArray,
        dt: float,
        workers: Optional[int] = None,
    ):
        if not dt > 0:
            raise ValidationError(f"dt must be positive, got {dt}.")
        self._grid = grid
        self._dt = dt
        self._workers = workers
        self._half_flow = np.exp(-0.5j * dt * kinetic_symbol(grid, N))
        self._phase = np.exp(-1j * dt * field)

    def advance(self, values: ComplexArray) -> ComplexArray:
        spectrum = transform_tensor(values, workers=self._workers) * self._half_flow
        values = transform_tensor(spectrum, inverse=True, workers=self._workers) * self._phase
        spectrum = transform_tensor(values, workers=self._workers) * self._half_flow
        return transform_tensor(spectrum, inverse=True, workers=self._workers)

    def __call__(self, state: NBodyState) -> NBodyState:
        values = self.advance(state.values)
        check_finite(values, t=state.t + self._dt, what="N-body")
        return state.evolved(values, t=state.t + self._dt)


def step_strang_nbody(state: NBodyState, field: FloatArray, dt: float) -> NBodyState:
    return NBodyStepper(grid=state.grid, N=state.N, field=field, dt=dt)(state)


def evolve_nbody(
    state: NBodyState,
    field: FloatArray,
    dt: float,
    steps: int,
    *,
    workers: Optional[int] = None,
) -> NBodyState:
    stepper = NBodyStepper(grid=state.grid, N=state.N, field=field, dt=dt, workers=workers)
    values = state.values
    for _ in range(steps):
        values = stepper.advance(values)
    t = state.t + steps * dt
    check_finite(values, t=t, what="N-body")
    return state.evolved(values, t=t)


def marginal(
    state: NBodyState, k: int, *, memory_cap: int = DEFAULT_MEMORY_CAP
) -> MarginalDensity:
    if not 1 <= k <= state.N:
        raise ValidationError(f"Marginal order must lie in [1, {state.N}], got {k}.")
    grid = state.grid
    _check_cap(f"Cannot build the order {k} marginal.", marginal_bytes(grid, k), memory_cap)
    rows = grid.size**k
    amplitudes = state.values.reshape(rows, -1) * np.sqrt(state.cell_volume)
    return MarginalDensity(grid=grid, k=k, matrix=amplitudes @ amplitudes.conj().T)


def trace_distance(gamma: MarginalDensity, rho: MarginalDensity) -> float:
    """Tr |gamma - rho|, the sum of absolute eigenvalues of the difference."""
    if gamma.matrix.shape != rho.matrix.shape:
        raise ValidationError(
            f"Cannot compare marginals of shapes {gamma.matrix.shape} and {rho.matrix.shape}."
        )
    diff = gamma.matrix - rho.matrix
    diff = (diff + diff.conj().T) / 2
    try:
        eigenvalues = np.linalg.eigvalsh(diff)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "Eigenvalue solver failed in the trace distance.", code="eigensolver_failed"
        ) from exc
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericalError("Trace distance eigenvalues are not finite.")
    return float(np.sum(np.abs(eigenvalues)))


def energy_per_particle(state: NBodyState, field: npt.NDArray[Any]) -> float:
    """(<Psi, -Laplacian Psi> + <Psi, W Psi>) / N."""
    spectrum = transform_tensor(state.values)
    symbol = kinetic_symbol(state.grid, state.N)
    kinetic = state.cell_volume * np.sum(symbol * np.abs(spectrum) ** 2)
    interaction = state.cell_volume * np.sum(field * np.abs(state.values) ** 2)
    return float(np.real(kinetic + interaction)) / state.N


def energy_trace_diag(state: NBodyState, k: int) -> float:
    """Tr (1 - Laplacian_1) ... (1 - Laplacian_k) gamma^(k), read off the spectrum of Psi."""
    grid = state.grid
    spectrum = transform_tensor(state.values)
    weight = np.ones((grid.M,) * (grid.d * state.N))
    for p in range(k):
        block_shape = [1] * (grid.d * state.N)
        block_shape[p * grid.d : (p + 1) * grid.d] = [grid.M] * grid.d
        weight = weight * (1.0 + grid.k_squared).reshape(block_shape)
    return float(state.cell_volume * np.sum(weight * np.abs(spectrum) ** 2))
