from typing import Any, ClassVar, Dict, Iterator, List, Tuple

import numpy as np

from quintlab.bounds import random_kernel
from quintlab.experiments.base_experiment import BaseExperiment
from quintlab.grid import GridSpec
from quintlab.hierarchy import commutation_check

DISCREPANCY_COLUMNS = ("j", "i", "l", "sample", "discrepancy", "scale")

KERNEL_RANK = 3

# the identity holds to rounding; larger relative discrepancies fail the run summary
TOLERANCE = 1e-10


def pick_pairs(r: int, n: int) -> Iterator[Tuple[int, int, int]]:
    """Every (j, i, l) with 1 <= j < n and 1 <= i < l <= r + 2j - 2."""
    for j in range(1, n):
        top = r + 2 * j - 2
        for l in range(2, top + 1):
            for i in range(1, l):
                yield j, i, l


class CommutationExperiment(BaseExperiment):
    """Checks the propagator commutation identity behind acceptable moves on random kernels.

    For every column boundary j and pick pair i < l, `samples` random rank-3 kernels of order
    r + 2j + 2 are pushed through both chains with generic random times.
    """

    NAME: ClassVar[str] = "commutation"
    DESCRIPTION: ClassVar[str] = "commutation identity of acceptable moves"

    def execute(self) -> Dict[str, Any]:
        config = self.config
        grid = GridSpec(d=config.d, M=config.M, L=config.L)
        rows: List[Tuple[int, int, int, int, float, float]] = []
        with self.logger.timed("commutation", r=config.r, n=config.n, samples=config.samples):
            for j, i, l in pick_pairs(config.r, config.n):
                order = config.r + 2 * j + 2
                for sample in range(config.samples):
                    gamma = random_kernel(grid, order, KERNEL_RANK, self.rng).with_rank_cap(
                        config.rank_cap
                    )
                    times = np.sort(self.rng.uniform(0.0, config.T, 4))[::-1]
                    discrepancy = commutation_check(
                        gamma, [float(t) for t in times], i, l, j, r=config.r
                    )
                    scale = float(np.sum(np.abs(gamma.coefficients)))
                    rows.append((j, i, l, sample, discrepancy, scale))
        self.write_table("commutation.csv", DISCREPANCY_COLUMNS, rows)

        worst = max(row[4] / row[5] for row in rows if row[5] > 0)
        self.logger.info("commutation finished", checks=len(rows), worst=worst)
        return {
            "checks": len(rows),
            "max_relative_discrepancy": worst,
            "tolerance": TOLERANCE,
            "holds": worst <= TOLERANCE,
        }
