import io
import math
from typing import Tuple

import numpy as np

from quintlab.configuration import Configuration
from quintlab.grid import GridSpec, gaussian_field
from quintlab.hierarchy import SeparableKernel
from quintlab.logging.default_logger import DefaultLogger
from quintlab.logging.logger import LoggingLevel
from quintlab.nls import WaveFunction

common_seed = 20240611

common_config = Configuration(seed=common_seed, logging_level=LoggingLevel.ERROR)


def quiet_logger(name: str = "tests") -> DefaultLogger:
    return DefaultLogger(name, LoggingLevel.ERROR, stream=io.StringIO())


def rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(common_seed + offset)


def grid_1d(M: int = 32, L: float = 2 * math.pi) -> GridSpec:
    return GridSpec(d=1, M=M, L=L)


def grid_2d(M: int = 16, L: float = 2 * math.pi) -> GridSpec:
    return GridSpec(d=2, M=M, L=L)


def gaussian_wave(grid: GridSpec, width: float = 0.8) -> WaveFunction:
    return WaveFunction(grid=grid, values=gaussian_field(grid, width))


def small_kernel(
    grid: GridSpec, order: int, rank: int, offset: int = 0
) -> SeparableKernel:
    """A kernel with unstructured complex coefficients and factors, for oracle comparisons."""
    generator = rng(offset)
    shape: Tuple[int, ...] = (rank, order) + grid.shape
    coefficients = generator.standard_normal(rank) + 1j * generator.standard_normal(rank)
    f = generator.standard_normal(shape) + 1j * generator.standard_normal(shape)
    g = generator.standard_normal(shape) + 1j * generator.standard_normal(shape)
    return SeparableKernel(grid=grid, coefficients=coefficients, f=f, g=g)
