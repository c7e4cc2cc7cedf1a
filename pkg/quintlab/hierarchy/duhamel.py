from enum import Enum
from typing import List, Sequence

from quintlab.exceptions import ValidationError
from quintlab.hierarchy.kernel import (
    SeparableKernel,
    contract,
    factorized,
    free_propagate,
    kernel_norm,
)
from quintlab.logging import DefaultLogger, Logger
from quintlab.nls import WaveFunction

DEFAULT_LOGGER: Logger = DefaultLogger("hierarchy[shared]")


class QuadratureRule(Enum):
    TRAPEZOID = "trapezoid"
    SIMPSON = "simpson"

    def weights(self, intervals: int, step: float) -> List[float]:
        """Composite weights on `intervals` + 1 equispaced nodes."""
        if intervals < 1:
            raise ValidationError(f"Quadrature needs at least one interval, got {intervals}.")
        if self is QuadratureRule.TRAPEZOID:
            weights = [step] * (intervals + 1)
            weights[0] = weights[-1] = step / 2
            return weights
        if intervals % 2 != 0:
            raise ValidationError(
                f"Cannot apply Simpson's rule on {intervals} intervals.",
                code="invalid_quadrature",
                details="HINT: use an even node count or the trapezoid rule.",
            )
        weights = [step / 3 * (4 if q % 2 else 2) for q in range(intervals + 1)]
        weights[0] = weights[-1] = step / 3
        return weights


def _node_snapshots(trajectory: Sequence[WaveFunction], nodes: int) -> Sequence[WaveFunction]:
    intervals = len(trajectory) - 1
    if intervals < 1 or nodes < 1 or intervals % nodes != 0:
        raise ValidationError(
            "Cannot evaluate the Duhamel residual.",
            code="insufficient_snapshots",
            violations=[
                f"{intervals} recorded intervals cannot be subsampled onto {nodes} quadrature"
                " intervals"
            ],
            details="HINT: record the trajectory on a multiple of the node count.",
        )
    sampled = trajectory[:: intervals // nodes]
    t0, t1 = sampled[0].t, sampled[-1].t
    step = (t1 - t0) / nodes
    for q, phi in enumerate(sampled):
        if abs(phi.t - (t0 + q * step)) > 1e-9 * max(1.0, abs(t1)):
            raise ValidationError(
                "Cannot evaluate the Duhamel residual.",
                code="insufficient_snapshots",
                violations=[f"snapshot {q} at t={phi.t} is off the uniform node grid"],
            )
    return sampled


def duhamel_residual(
    trajectory: Sequence[WaveFunction],
    k: int,
    b0: float,
    nodes: int,
    rule: QuadratureRule = QuadratureRule.SIMPSON,
    *,
    logger: Logger = DEFAULT_LOGGER,
) -> float:
    """L2 norm of the integral GP equation residual

        gamma_t - U(t) gamma_0 + i b0 sum_j int_0^t U(t - s) B_j gamma^(k+2)_s ds

    for the factorized kernels of `trajectory`, with the time integral discretized on `nodes`
    equispaced intervals.
    """
    if k < 1:
        raise ValidationError(f"Order must be >= 1, got {k}.")
    sampled = _node_snapshots(trajectory, nodes)
    t0 = sampled[0].t
    t = sampled[-1].t - t0
    weights = rule.weights(nodes, t / nodes)

    with logger.timed("duhamel residual", k=k, nodes=nodes, rule=rule.value):
        terms: List[SeparableKernel] = [
            factorized(sampled[-1], k),
            -free_propagate(factorized(sampled[0], k), t),
        ]
        if b0 != 0:
            for weight, phi in zip(weights, sampled):
                higher = factorized(phi, k + 2)
                for j in range(1, k + 1):
                    source = free_propagate(contract(higher, j), t - (phi.t - t0))
                    terms.append(source.scaled(1j * b0 * weight))
        residual = kernel_norm(SeparableKernel.concatenate(terms), 0.0)
    logger.debug("duhamel residual", residual=residual, b0=b0)
    return residual


def _check_picks(
    gamma0: SeparableKernel, picks: Sequence[int], times: Sequence[float], r: int
) -> None:
    n = len(picks)
    violations = []
    if r < 1 or n < 1:
        violations.append(f"need r >= 1 and at least one pick, got r={r}, n={n}")
    if gamma0.order != r + 2 * n:
        violations.append(f"kernel order {gamma0.order} differs from r + 2n = {r + 2 * n}")
    if len(times) != n + 1:
        violations.append(f"expected {n + 1} times, got {len(times)}")
    for column, pick in enumerate(picks, start=1):
        if not 1 <= pick <= r + 2 * column - 2:
            violations.append(f"pick {pick} of column {column} outside 1..{r + 2 * column - 2}")
    if violations:
        raise ValidationError("Cannot build Duhamel integrand.", violations=violations)


def duhamel_integrand(
    gamma0: SeparableKernel,
    picks: Sequence[int],
    times: Sequence[float],
    r: int,
    *,
    plus_only: bool = False,
) -> SeparableKernel:
    """The iterated Duhamel integrand for the free family gamma^(r+2n)(t) = U(t) gamma0,

        U(t_r - t_(r+2)) B_(picks[1]) U(t_(r+2) - t_(r+4)) ... B_(picks[n]) U(t_(r+2n)) gamma0,

    where `times` lists t_r, t_(r+2), ..., t_(r+2n) and column c contracts its last two slots.
    """
    _check_picks(gamma0, picks, times, r)
    n = len(picks)
    current = free_propagate(gamma0, times[n])
    for column in range(n, 0, -1):
        current = contract(current, picks[column - 1], plus_only=plus_only)
        current = free_propagate(current, times[column - 1] - times[column])
    return current


def slot_pair_swap(order: int, r: int, j: int) -> List[int]:
    """The slot permutation exchanging (r+2j-1, r+2j) with (r+2j+1, r+2j+2)."""
    permutation = list(range(1, order + 1))
    a, b = r + 2 * j - 1, r + 2 * j + 1
    if not (1 <= a and b + 1 <= order):
        raise ValidationError(f"No slot pairs to swap at column {j} for order {order}, r={r}.")
    permutation[a - 1 : a + 1], permutation[b - 1 : b + 1] = [b, b + 1], [a, a + 1]
    return permutation


def time_swap(times: Sequence[float], j: int) -> List[float]:
    """`times` with t_(r+2j) and t_(r+2j+2) exchanged."""
    swapped = list(times)
    swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
    return swapped


def integrand_distance(
    gamma0: SeparableKernel,
    picks: Sequence[int],
    moved_picks: Sequence[int],
    times: Sequence[float],
    r: int,
    j: int,
) -> float:
    """Distance between J(t; picks)[gamma0] and J(t swapped at j; moved_picks)[pi_j gamma0]."""
    before = duhamel_integrand(gamma0, picks, times, r)
    permuted = gamma0.permute_slots(slot_pair_swap(gamma0.order, r, j))
    after = duhamel_integrand(permuted, moved_picks, time_swap(times, j), r)
    scale = max(1.0, kernel_norm(before, 0.0))
    return kernel_norm(before - after, 0.0) / scale


