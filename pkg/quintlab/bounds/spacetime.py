from typing import List, NamedTuple, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from quintlab.exceptions import ValidationError
from quintlab.hierarchy import SeparableKernel, contract, free_propagate, kernel_norm
from quintlab.logging import DefaultLogger, Logger

DEFAULT_LOGGER: Logger = DefaultLogger("bounds[shared]")

ALPHA_RANGE = (5.0 / 6.0, 1.0)


class SpacetimeProbe(NamedTuple):
    lhs: float
    rhs: float
    ratio: float
    curve: List[Tuple[float, float]]
    """(T, lhs over [0, T]) at every node."""


def spacetime_bound_probe(
    gamma0: SeparableKernel,
    j: int,
    alpha: float,
    window: float,
    nodes: int,
    *,
    strict: bool = True,
    logger: Logger = DEFAULT_LOGGER,
) -> SpacetimeProbe:
    """Finite-window space-time norm of B_j U(t) gamma0 against ||S^alpha gamma0||.

    lhs = (int_0^window ||S^alpha B_j U(t) gamma0||^2 dt)^(1/2) by the trapezoid rule. With
    `strict` the smoothing exponent must lie in (5/6, 1); contrast runs pass strict=False.
    """
    violations = []
    if gamma0.grid.d != 2:
        violations.append(f"the probe runs in d=2, got d={gamma0.grid.d}")
    if strict and not ALPHA_RANGE[0] < alpha < ALPHA_RANGE[1]:
        violations.append(f"alpha must lie in (5/6, 1), got {alpha}")
    if not window > 0 or nodes < 1:
        violations.append(f"need window > 0 and nodes >= 1, got {window}, {nodes}")
    if violations:
        raise ValidationError("Cannot run space-time probe.", violations=violations)

    times = np.linspace(0.0, window, nodes + 1)
    if gamma0.rank == 0:
        return SpacetimeProbe(lhs=0.0, rhs=0.0, ratio=0.0, curve=[(float(t), 0.0) for t in times])

    with logger.timed("spacetime probe", alpha=alpha, nodes=nodes):
        squares = np.array(
            [kernel_norm(contract(free_propagate(gamma0, float(t)), j), alpha) ** 2 for t in times]
        )
    cumulative = np.sqrt(cumulative_trapezoid(squares, times, initial=0.0))
    rhs = kernel_norm(gamma0, alpha)
    lhs = float(cumulative[-1])
    return SpacetimeProbe(
        lhs=lhs,
        rhs=rhs,
        ratio=lhs / rhs if rhs > 0 else 0.0,
        curve=[(float(t), float(v)) for t, v in zip(times, cumulative)],
    )
