import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from quintlab.boardgame import CollapseMap, enumerate_maps
from quintlab.exceptions import ValidationError
from quintlab.hierarchy import SeparableKernel, contract, free_propagate, kernel_norm
from quintlab.logging import DefaultLogger, Logger

DEFAULT_LOGGER: Logger = DefaultLogger("bounds[shared]")


class DuhamelBound(NamedTuple):
    observed: float
    standard_error: float
    chain_bound: float
    constant: float
    initial_norm: float
    worst_stage_ratio: float
    maps: int

    @property
    def within(self) -> bool:
        return self.observed <= self.chain_bound


def map_count_bound(r: int, n: int) -> float:
    """2^n (ceil(r/2) - 1 + n)! / (ceil(r/2) - 1)!, at least the number of collapse maps."""
    m = math.ceil(r / 2)
    return 2.0**n * math.factorial(m - 1 + n) / math.factorial(m - 1)


def staged_integrand(
    gamma0: SeparableKernel, picks: Sequence[int], times: Sequence[float], alpha: float
) -> Tuple[float, List[float]]:
    """||S^alpha J|| for one collapse map and the norm ratio of every contraction stage."""
    n = len(picks)
    current = free_propagate(gamma0, times[n])
    ratios = []
    for column in range(n, 0, -1):
        before = kernel_norm(current, alpha)
        current = contract(current, picks[column - 1])
        ratios.append(kernel_norm(current, alpha) / before if before > 0 else 0.0)
        current = free_propagate(current, times[column - 1] - times[column])
    return kernel_norm(current, alpha), ratios


def iterated_duhamel_bound(
    gamma0: SeparableKernel,
    r: int,
    n: int,
    alpha: float,
    t_r: float,
    samples: int,
    rng: np.random.Generator,
    *,
    stage_constant: float,
    maps: Optional[Sequence[CollapseMap]] = None,
    logger: Logger = DEFAULT_LOGGER,
) -> DuhamelBound:
    """Monte-Carlo integral over t_r >= t_(r+2) >= ... >= t_(r+2n) >= 0 of
    sum_mu ||S^alpha J(t; mu)||, against the bound chain

        C^n ||S^alpha gamma0|| 2^n (ceil(r/2) - 1 + n)! / (ceil(r/2) - 1)! t_r^n / n!,

    where C = `stage_constant` bounds one contraction stage, ||S^alpha B gamma|| <= C
    ||S^alpha gamma||. C is fixed by the caller; the largest stage ratio seen on the samples is
    reported next to it.
    """
    violations = []
    if gamma0.grid.d != 1:
        violations.append(f"the bound chain is checked in d=1, got d={gamma0.grid.d}")
    if gamma0.order != r + 2 * n:
        violations.append(f"kernel order {gamma0.order} differs from r + 2n = {r + 2 * n}")
    if not 0.5 < alpha <= 1:
        violations.append(f"alpha must lie in (1/2, 1], got {alpha}")
    if not t_r > 0 or samples < 2:
        violations.append(f"need t_r > 0 and at least two samples, got {t_r}, {samples}")
    if not stage_constant > 0:
        violations.append(f"stage_constant must be positive, got {stage_constant}")
    if violations:
        raise ValidationError("Cannot evaluate iterated Duhamel bound.", violations=violations)
    maps = enumerate_maps(r, n) if maps is None else maps
    volume = t_r**n / math.factorial(n)

    values = []
    worst_ratio = 0.0
    with logger.timed("iterated duhamel", r=r, n=n, samples=samples, maps=len(maps)):
        for _ in range(samples):
            later = np.sort(rng.uniform(0.0, t_r, n))[::-1]
            times = [t_r] + [float(t) for t in later]
            total = 0.0
            for collapse_map in maps:
                norm, ratios = staged_integrand(gamma0, collapse_map.picks, times, alpha)
                total += norm
                worst_ratio = max(worst_ratio, *ratios)
            values.append(total)

    observed = volume * float(np.mean(values))
    standard_error = volume * float(np.std(values, ddof=1)) / math.sqrt(samples)
    initial_norm = kernel_norm(gamma0, alpha)
    chain_bound = stage_constant**n * initial_norm * map_count_bound(r, n) * volume
    logger.debug(
        "iterated duhamel", observed=observed, chain_bound=chain_bound, worst_ratio=worst_ratio
    )
    return DuhamelBound(
        observed=observed,
        standard_error=standard_error,
        chain_bound=chain_bound,
        constant=stage_constant,
        initial_norm=initial_norm,
        worst_stage_ratio=worst_ratio,
        maps=len(maps),
    )
