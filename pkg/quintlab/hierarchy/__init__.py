from quintlab.hierarchy.commutation import commutation_check
from quintlab.hierarchy.duhamel import (
    QuadratureRule,
    duhamel_integrand,
    duhamel_residual,
    integrand_distance,
    slot_pair_swap,
    time_swap,
)
from quintlab.hierarchy.kernel import (
    SeparableKernel,
    contract,
    contract_minus,
    contract_plus,
    factorized,
    free_propagate,
    kernel_inner,
    kernel_norm,
)

__all__ = [
    "SeparableKernel",
    "factorized",
    "free_propagate",
    "contract_plus",
    "contract_minus",
    "contract",
    "kernel_inner",
    "kernel_norm",
    "QuadratureRule",
    "duhamel_residual",
    "duhamel_integrand",
    "slot_pair_swap",
    "time_swap",
    "integrand_distance",
    "commutation_check",
]
