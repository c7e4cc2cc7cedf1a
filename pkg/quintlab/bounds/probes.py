from typing import Any, Dict, NamedTuple, Optional

import numpy as np
import numpy.typing as npt

from quintlab.bounds.report import BoundReport
from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec, random_smooth_field, sobolev_norm, transform_tensor
from quintlab.hierarchy import SeparableKernel, contract, contract_plus, kernel_norm
from quintlab.logging import DefaultLogger, Logger

DEFAULT_LOGGER: Logger = DefaultLogger("bounds[shared]")


def random_kernel(
    grid: GridSpec,
    order: int,
    rank: int,
    rng: np.random.Generator,
    *,
    roughness: float = 0.0,
) -> SeparableKernel:
    """A kernel with complex Gaussian coefficients and independent random smooth factors."""
    coefficients = rng.standard_normal(rank) + 1j * rng.standard_normal(rank)
    f = random_smooth_field(grid, rng, batch_shape=(rank, order), roughness=roughness)
    g = random_smooth_field(grid, rng, batch_shape=(rank, order), roughness=roughness)
    return SeparableKernel(grid=grid, coefficients=coefficients, f=f, g=g)


def random_positive_kernel(
    grid: GridSpec,
    order: int,
    rank: int,
    rng: np.random.Generator,
    *,
    roughness: float = 0.0,
) -> SeparableKernel:
    """sum_m lambda_m |psi_m><psi_m| with product states psi_m and sum_m lambda_m <= 1."""
    weights = rng.dirichlet(np.ones(rank)) * rng.uniform(0.5, 1.0)
    factors = random_smooth_field(grid, rng, batch_shape=(rank, order), roughness=roughness)
    return SeparableKernel(grid=grid, coefficients=weights, f=factors, g=factors)


def check_positive(gamma: SeparableKernel, tolerance: float = 1e-10) -> None:
    """Rejects kernels that are not visibly sum_m lambda_m |psi_m><psi_m| with trace <= 1."""
    c = gamma.coefficients
    violations = []
    if np.any(np.abs(c.imag) > tolerance) or np.any(c.real < -tolerance):
        violations.append("coefficients must be real and nonnegative")
    if not np.array_equal(gamma.f, gamma.g):
        violations.append("unprimed and primed factors must coincide")
    trace = gamma.trace().real
    if trace > 1.0 + tolerance:
        violations.append(f"trace must be at most one, got {trace:.12g}")
    if violations:
        raise ValidationError(
            "Kernel is not a positive density of trace at most one.",
            code="non_positive_kernel",
            violations=violations,
        )


def check_lebesgue_exponent(p: float, d: int) -> None:
    if d == 1 and not p > 1:
        raise ValidationError(f"Lebesgue exponent must exceed 1 in d=1, got p={p}.")
    if d >= 2 and not p >= 2 * d:
        raise ValidationError(f"Lebesgue exponent must be at least {2 * d} in d={d}, got p={p}.")


def _pair_weight(grid: GridSpec) -> npt.NDArray[np.float64]:
    """<k_1> <k_2> on the two-particle frequency grid."""
    one = np.sqrt(1.0 + grid.k_squared)
    return np.multiply.outer(one, one)


def sobolev_trilinear_ratio(
    V: npt.NDArray[Any],
    psi1: npt.NDArray[Any],
    psi2: npt.NDArray[Any],
    p: float,
    grid: GridSpec,
) -> Optional[float]:
    """|<psi1, V psi2>| / (||V||_p ||psi1||_2 ||<grad_1><grad_2> psi2||_2) on grid x grid.

    None when a factor of the denominator vanishes.
    """
    check_lebesgue_exponent(p, grid.d)
    shape = grid.shape * 2
    for name, array in (("V", V), ("psi1", psi1), ("psi2", psi2)):
        if np.shape(array) != shape:
            raise ValidationError(
                f"{name} of shape {np.shape(array)} is not a two-particle field on {grid!r}.",
                code="dimension_mismatch",
            )
    cell = grid.cell_volume**2
    v_norm = (cell * np.sum(np.abs(V) ** p)) ** (1.0 / p)
    psi1_norm = np.sqrt(cell * np.sum(np.abs(psi1) ** 2))
    weighted = _pair_weight(grid) * transform_tensor(psi2)
    psi2_norm = np.sqrt(cell * np.sum(np.abs(weighted) ** 2))
    denominator = v_norm * psi1_norm * psi2_norm
    if denominator == 0:
        return None
    return float(abs(cell * np.vdot(psi1, V * psi2)) / denominator)


def _random_pair_field(grid: GridSpec, rng: np.random.Generator, rank: int = 3) -> Any:
    a = random_smooth_field(grid, rng, batch_shape=(rank,))
    b = random_smooth_field(grid, rng, batch_shape=(rank,))
    weights = rng.standard_normal(rank) + 1j * rng.standard_normal(rank)
    return sum(w * np.multiply.outer(x, y) for w, x, y in zip(weights, a, b))


def _random_bump(grid: GridSpec, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    """A periodic Gaussian bump on grid x grid with random centers and width."""
    width = rng.uniform(0.05, 0.25) * grid.L
    r2 = np.zeros(grid.shape * 2)
    for particle in range(2):
        for x in grid.coordinates():
            center = rng.uniform(-grid.L / 2, grid.L / 2)
            shift = (x - center + grid.L / 2) % grid.L - grid.L / 2
            axes = [1] * (2 * grid.d)
            axes[particle * grid.d : (particle + 1) * grid.d] = list(shift.shape)
            r2 = r2 + shift.reshape(axes) ** 2
    return np.exp(-r2 / (2 * width**2))


def trilinear_probe(
    grid: GridSpec,
    p: float,
    rng: np.random.Generator,
    *,
    samples: int = 200,
    logger: Logger = DEFAULT_LOGGER,
) -> BoundReport:
    check_lebesgue_exponent(p, grid.d)
    with logger.timed("trilinear probe", p=p, samples=samples):
        ratios = [
            sobolev_trilinear_ratio(
                _random_bump(grid, rng),
                _random_pair_field(grid, rng),
                _random_pair_field(grid, rng),
                p,
                grid,
            )
            for _ in range(samples)
        ]
    return BoundReport.from_samples(
        name="sobolev_trilinear", parameters={"p": p, "d": grid.d, "M": grid.M}, ratios=ratios
    )


def highreg_ratio(gamma: SeparableKernel, j: int, alpha: float) -> Optional[float]:
    """||S^alpha B_j gamma|| / ||S^alpha gamma||; None for the zero kernel."""
    denominator = kernel_norm(gamma, alpha)
    if denominator == 0:
        return None
    return kernel_norm(contract(gamma, j), alpha) / denominator


def highreg_probe(
    grid: GridSpec,
    alpha: float,
    rng: np.random.Generator,
    *,
    k: int = 1,
    rank: int = 2,
    samples: int = 100,
    roughness: float = 0.0,
    logger: Logger = DEFAULT_LOGGER,
) -> BoundReport:
    parameters: Dict[str, Any] = {
        "alpha": alpha,
        "d": grid.d,
        "M": grid.M,
        "k": k,
        "rank": rank,
        "roughness": roughness,
    }
    if alpha <= grid.d / 2:
        logger.warning("alpha at or below d/2, expecting degradation", **parameters)
    with logger.timed("highreg probe", alpha=alpha, samples=samples):
        ratios = [
            highreg_ratio(random_kernel(grid, k + 2, rank, rng, roughness=roughness), 1, alpha)
            for _ in range(samples)
        ]
    return BoundReport.from_samples(name="highreg", parameters=parameters, ratios=ratios)


class KmCheck(NamedTuple):
    lhs: float
    lhs_plus: float
    rhs: float


def trace_term(gamma: SeparableKernel) -> float:
    """Tr prod_i (1 - Laplacian_i) gamma = sum_m c_m prod_i ||S^1 f_(m,i)||^2 for f = g."""
    grid = gamma.grid
    total = 0.0
    for c, factors in zip(gamma.coefficients.real, gamma.f):
        total += c * float(np.prod([sobolev_norm(f, 1.0, grid) ** 2 for f in factors]))
    return total


def km_bound_check(gamma: SeparableKernel, j: int, alpha: float) -> KmCheck:
    """The contraction norm ||S^alpha B_j gamma|| (and its B+ part) against the energy trace."""
    check_positive(gamma)
    if gamma.rank == 0:
        return KmCheck(lhs=0.0, lhs_plus=0.0, rhs=0.0)
    return KmCheck(
        lhs=kernel_norm(contract(gamma, j), alpha),
        lhs_plus=kernel_norm(contract_plus(gamma, j), alpha),
        rhs=trace_term(gamma),
    )


def km_probe(
    grid: GridSpec,
    alpha: float,
    rng: np.random.Generator,
    *,
    k: int = 1,
    rank: int = 3,
    samples: int = 50,
    logger: Logger = DEFAULT_LOGGER,
) -> BoundReport:
    ratios = []
    with logger.timed("km probe", alpha=alpha, samples=samples):
        for _ in range(samples):
            check = km_bound_check(random_positive_kernel(grid, k + 2, rank, rng), 1, alpha)
            ratios.append(check.lhs / check.rhs if check.rhs > 0 else None)
    return BoundReport.from_samples(
        name="km_trace",
        parameters={"alpha": alpha, "d": grid.d, "M": grid.M, "k": k, "rank": rank},
        ratios=ratios,
    )
