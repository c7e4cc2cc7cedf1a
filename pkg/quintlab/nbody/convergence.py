from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from quintlab.constants import DEFAULT_MEMORY_CAP
from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec, resample_field
from quintlab.helpers import Helpers
from quintlab.logging import DefaultLogger, Logger
from quintlab.nbody.dynamics import (
    choose_dt,
    choose_points,
    energy_trace_diag,
    evolve_nbody,
    marginal,
    potential_energy_field,
    trace_distance,
)
from quintlab.nbody.potentials import BasePotential, PotentialSpec
from quintlab.nbody.state import MarginalDensity, NBodyState
from quintlab.nls import NlsParams, WaveFunction, evolve

DEFAULT_LOGGER: Logger = DefaultLogger("nbody[shared]")


class ConvergenceRow(NamedTuple):
    N: int
    M: int
    beta: float
    T: float
    k: int
    trace_distance: float
    energy_trace_diag: float
    dt: float
    b0: float


def convergence_row(
    phi0: WaveFunction,
    potential: BasePotential,
    beta: float,
    N: int,
    T: float,
    k: int,
    *,
    dt: float = 1e-3,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    coupling_scale: float = 1.0,
    b0_override: Optional[float] = None,
    workers: Optional[int] = None,
    logger: Logger = DEFAULT_LOGGER,
) -> ConvergenceRow:
    """Evolves the product state of N copies of `phi0` and compares its k-particle marginal at
    time T with the factorized state of the mean-field NLS solution."""
    source = phi0.grid
    M = choose_points(source.M, d=source.d, N=N, k=k, memory_cap=memory_cap)
    grid = GridSpec(d=source.d, M=M, L=source.L)
    if M != source.M:
        logger.info("grid reduced to fit the memory cap", N=N, requested=source.M, selected=M)
    phi = WaveFunction(grid=grid, values=resample_field(phi0.values, source, grid)).normalized()

    spec = PotentialSpec(potential=potential, beta=beta, N=N, d=grid.d)
    spec.validate_on(grid)
    field = potential_energy_field(spec, grid, memory_cap=memory_cap)
    step = choose_dt(T, dt, float(np.max(field)))
    steps = Helpers.step_count(T, step)

    with logger.timed("nbody evolve", N=N, M=M, steps=steps):
        state = evolve_nbody(NBodyState.product(phi, N), field, step, steps, workers=workers)
        gamma = marginal(state, k, memory_cap=memory_cap)

    b0 = b0_override if b0_override is not None else coupling_scale * spec.b0(grid)
    reference = evolve(phi, NlsParams(dt=step, b0=b0), T, record_every=steps, logger=logger)[-1]
    distance = trace_distance(gamma, MarginalDensity.from_product(reference, k))
    logger.debug("convergence row", N=N, trace_distance=distance)

    return ConvergenceRow(
        N=N,
        M=M,
        beta=beta,
        T=T,
        k=k,
        trace_distance=distance,
        energy_trace_diag=energy_trace_diag(state, k),
        dt=step,
        b0=b0,
    )


def convergence_experiment(
    phi0: WaveFunction,
    potential: BasePotential,
    beta: float,
    N_list: Sequence[int],
    T: float,
    k: int,
    *,
    dt: float = 1e-3,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    coupling_scale: float = 1.0,
    b0_override: Optional[float] = None,
    threads: int = 1,
    workers: Optional[int] = None,
    logger: Logger = DEFAULT_LOGGER,
) -> List[ConvergenceRow]:
    """One row per N; rows are computed concurrently and returned in the order of `N_list`."""
    violations = [f"N={N} is smaller than k={k}" for N in N_list if N < k]
    if not T > 0:
        violations.append(f"T must be positive, got {T}")
    if violations:
        raise ValidationError("Cannot run the convergence experiment.", violations=violations)

    def run(N: int) -> ConvergenceRow:
        return convergence_row(
            phi0,
            potential,
            beta,
            N,
            T,
            k,
            dt=dt,
            memory_cap=memory_cap,
            coupling_scale=coupling_scale,
            b0_override=b0_override,
            workers=workers,
            logger=logger,
        )

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(run, N_list))
