from typing import Sequence

from quintlab.exceptions import ValidationError
from quintlab.hierarchy.kernel import SeparableKernel, contract, free_propagate, kernel_norm


def commutation_check(
    gamma: SeparableKernel,
    times: Sequence[float],
    i: int,
    l: int,
    j: int,
    *,
    r: int,
    plus_only: bool = False,
) -> float:
    """Discrepancy of the acceptable-move commutation identity at column boundary `j`.

    With k = r + 2j and `times` = (t_a, t_b, t_c, t_e), `gamma` of order k + 2 is pushed through

        U(t_a - t_b) B_(l; k-1, k) U(t_b - t_c) B_(i; k+1, k+2) U(t_c - t_e)

    and through the exchanged chain, in which the contraction of the pair (k-1, k) runs first
    and the pair (k+1, k+2) propagates with the later time,

        U(t_a - t_c) B_(i; k-1, k) U(t_c - t_b) B_(l; k-1, k) U(t_b - t_e).

    Returns the L2 norm of the difference; it vanishes for any kernel when i != l.
    """
    k = r + 2 * j
    violations = []
    if len(times) != 4:
        violations.append(f"expected 4 times (t_a, t_b, t_c, t_e), got {len(times)}")
    if gamma.order != k + 2:
        violations.append(f"kernel order {gamma.order} differs from r + 2j + 2 = {k + 2}")
    if not 1 <= i < l <= k - 2:
        violations.append(f"picks must satisfy 1 <= i < l <= {k - 2}, got i={i}, l={l}")
    if violations:
        raise ValidationError("Cannot check commutation identity.", violations=violations)
    t_a, t_b, t_c, t_e = times

    lhs = free_propagate(gamma, t_c - t_e)
    lhs = contract(lhs, i, (k + 1, k + 2), plus_only=plus_only)
    lhs = free_propagate(lhs, t_b - t_c)
    lhs = contract(lhs, l, (k - 1, k), plus_only=plus_only)
    lhs = free_propagate(lhs, t_a - t_b)

    rhs = free_propagate(gamma, t_b - t_e)
    rhs = contract(rhs, l, (k - 1, k), plus_only=plus_only)
    rhs = free_propagate(rhs, t_c - t_b)
    rhs = contract(rhs, i, (k - 1, k), plus_only=plus_only)
    rhs = free_propagate(rhs, t_a - t_c)

    return kernel_norm(lhs - rhs, 0.0)
