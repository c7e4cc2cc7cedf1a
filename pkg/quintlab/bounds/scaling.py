import math
from typing import List, NamedTuple, Sequence

import numpy as np

from quintlab.exceptions import NumericalError, ValidationError
from quintlab.nbody.potentials import BasePotential, GaussianPotential

# quadrature nodes per axis of R^{2d}
DEFAULT_POINTS = {1: 64, 2: 32}
# half-width of the quadrature box in units of the potential width
BOX_WIDTHS = 6.0


class ScalingRow(NamedTuple):
    N: int
    gradient_norm: float
    ratio: float


class ScalingReport(NamedTuple):
    rows: List[ScalingRow]
    slope: float
    expected: float

    @property
    def slope_error(self) -> float:
        if self.expected == 0:
            return abs(self.slope)
        return abs(self.slope - self.expected) / abs(self.expected)


def expected_exponent(beta: float, p: float, d: int) -> float:
    """2 beta (d + 1/2 - d / (2p))."""
    return 2 * beta * (d + 0.5 - d / (2 * p))


def scaled_gradient_norm(
    potential: BasePotential,
    beta: float,
    N: int,
    p: float,
    d: int,
    *,
    points: int,
    half_width: float,
) -> float:
    """||grad V_N||_{L^{2p}(R^{2d})} by the uniform rule on [-half_width, half_width]^{2d}."""
    axis = np.linspace(-half_width, half_width, points, endpoint=False)
    h = axis[1] - axis[0]
    coordinates = np.meshgrid(*([axis] * (2 * d)), indexing="ij", sparse=True)
    scale = float(N) ** beta
    a = np.stack(np.broadcast_arrays(*coordinates[:d])) * scale
    b = np.stack(np.broadcast_arrays(*coordinates[d:])) * scale
    gradient = float(N) ** ((2 * d + 1) * beta) * potential.gradient_norm(a, b)
    value = float(np.sum(gradient ** (2 * p)) * h ** (2 * d)) ** (1.0 / (2 * p))
    if not math.isfinite(value) or value <= 0:
        raise NumericalError(
            "Quadrature of the scaled potential gradient failed.",
            code="quadrature_failure",
            context={"N": N, "value": value},
        )
    return value


def potential_scaling_check(
    potential: BasePotential,
    beta: float,
    N_list: Sequence[int],
    p: float,
    d: int,
) -> ScalingReport:
    """Fits the log-log slope of ||grad V_N||_{2p} against N.

    The box is sized from the unscaled potential, so larger N only narrows the integrand.
    """
    violations = []
    if d not in (1, 2):
        violations.append(f"d must be 1 or 2, got {d}")
    if len(set(N_list)) < 2 or min(N_list, default=0) < 1:
        violations.append("need at least two distinct particle numbers >= 1")
    if not p >= 1:
        violations.append(f"p must be >= 1, got {p}")
    if not beta >= 0:
        violations.append(f"beta must be >= 0, got {beta}")
    if violations:
        raise ValidationError("Cannot check potential scaling.", violations=violations)
    width = potential.width if isinstance(potential, GaussianPotential) else 1.0

    norms = [
        scaled_gradient_norm(
            potential,
            beta,
            N,
            p,
            d,
            points=DEFAULT_POINTS[d],
            half_width=BOX_WIDTHS * width,
        )
        for N in N_list
    ]
    reference = scaled_gradient_norm(
        potential, 0.0, 1, p, d, points=DEFAULT_POINTS[d], half_width=BOX_WIDTHS * width
    )
    slope = float(np.polyfit(np.log(N_list), np.log(norms), 1)[0])
    rows = [ScalingRow(N=N, gradient_norm=v, ratio=v / reference) for N, v in zip(N_list, norms)]
    return ScalingReport(rows=rows, slope=slope, expected=expected_exponent(beta, p, d))
