from typing import Any, ClassVar, Dict

from quintlab.experiments.base_experiment import BaseExperiment
from quintlab.grid import GridSpec, gaussian_field
from quintlab.nbody import convergence_experiment
from quintlab.nls import WaveFunction

CONVERGENCE_COLUMNS = (
    "N",
    "M",
    "beta",
    "T",
    "k",
    "trace_distance",
    "energy_trace_diag",
    "dt",
    "b0",
)


class NBodyConvergenceExperiment(BaseExperiment):
    """Trace distance between the N-body marginal and the factorized NLS solution, per N.

    Artifacts: ``convergence.csv`` with one row per entry of `N_list`, and the NLS reference
    initial datum as ``initial_field.bin``.
    """

    NAME: ClassVar[str] = "nbody-converge"
    DESCRIPTION: ClassVar[str] = "N-body marginals against the mean-field limit"

    def execute(self) -> Dict[str, Any]:
        config = self.config
        grid = GridSpec(d=config.d, M=config.M, L=config.L)
        phi0 = WaveFunction(grid=grid, values=gaussian_field(grid, config.L / 8))
        self.write_field("initial_field.bin", phi0)

        rows = convergence_experiment(
            phi0,
            config.build_potential(),
            config.beta,
            config.N_list,
            config.T,
            config.k,
            dt=config.dt,
            memory_cap=config.memory_cap,
            coupling_scale=config.coupling_scale,
            b0_override=config.b0_override,
            threads=config.threads,
            logger=self.logger,
        )
        self.write_table("convergence.csv", CONVERGENCE_COLUMNS, rows)

        ordered = sorted(rows, key=lambda row: row.N)
        distances = [row.trace_distance for row in ordered]
        decreasing = all(a > b for a, b in zip(distances, distances[1:]))
        return {
            "potential": config.build_potential().to_dict(),
            "rows": [row._asdict() for row in rows],
            "strictly_decreasing": decreasing,
        }
