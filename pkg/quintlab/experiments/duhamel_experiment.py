import math
from typing import Any, ClassVar, Dict, List, Optional, Tuple

import numpy as np

from quintlab.experiments.base_experiment import BaseExperiment
from quintlab.grid import GridSpec
from quintlab.hierarchy import QuadratureRule, duhamel_residual, factorized
from quintlab.nls import WaveFunction, evolve

RESIDUAL_COLUMNS = ("nodes", "rule", "b0", "residual", "order")

# node counts below this are too coarse to say anything
MIN_LADDER_NODES = 2

LADDER_LENGTH = 4

# the anti-test integrates with the true coupling and checks against this multiple of it
ANTI_TEST_FACTOR = 2.0


def node_ladder(nodes: int, rule: QuadratureRule) -> List[int]:
    """`nodes` and up to three successive halvings usable with `rule`, coarsest first."""
    ladder = [nodes]
    while len(ladder) < LADDER_LENGTH and ladder[-1] % 2 == 0:
        half = ladder[-1] // 2
        if half < MIN_LADDER_NODES or (rule is QuadratureRule.SIMPSON and half % 2 != 0):
            break
        ladder.append(half)
    return ladder[::-1]


def periodic_bump(grid: GridSpec) -> np.ndarray:  # type: ignore[type-arg]
    """exp(sum_i cos(2 pi x_i / L)), normalized."""
    phase = sum(np.cos(2 * np.pi * x / grid.L) for x in grid.coordinates())
    values = np.exp(phase).astype(np.complex128)
    return values / grid.l2_norm(values)


class DuhamelResidualExperiment(BaseExperiment):
    """Residual of the integral GP hierarchy for the factorized NLS solution.

    The NLS trajectory is recorded at every step; the residual is evaluated on a ladder of
    quadrature node counts and once more with the coupling doubled.
    """

    NAME: ClassVar[str] = "duhamel-residual"
    DESCRIPTION: ClassVar[str] = "integral GP hierarchy residual of factorized kernels"

    def execute(self) -> Dict[str, Any]:
        config = self.config
        grid = GridSpec(d=config.d, M=config.M, L=config.L)
        params = config.nls_params()
        phi0 = WaveFunction(grid=grid, values=periodic_bump(grid))
        trajectory = evolve(phi0, params, config.T, 1, workers=config.threads, logger=self.logger)
        self.write_kernel(
            "gamma_final.bin", factorized(trajectory[-1], config.k).with_rank_cap(config.rank_cap)
        )

        rule = config.quadrature
        rows: List[Tuple[Any, ...]] = []
        previous: Optional[float] = None
        for nodes in node_ladder(config.nodes, rule):
            residual = duhamel_residual(
                trajectory, config.k, params.b0, nodes, rule, logger=self.logger
            )
            order = (
                math.log2(previous / residual)
                if previous is not None and previous > 0 and residual > 0
                else None
            )
            rows.append((nodes, rule.value, params.b0, residual, order))
            previous = residual

        anti_b0 = ANTI_TEST_FACTOR * params.b0
        anti = duhamel_residual(
            trajectory, config.k, anti_b0, config.nodes, rule, logger=self.logger
        )
        rows.append((config.nodes, rule.value, anti_b0, anti, None))
        self.write_table("residuals.csv", RESIDUAL_COLUMNS, rows)

        final = rows[-2][3]
        return {
            "k": config.k,
            "b0": params.b0,
            "residuals": {str(row[0]): row[3] for row in rows[:-1]},
            "residual": final,
            "anti_test_residual": anti,
            "anti_test_ratio": anti / final if final > 0 else None,
        }
