from quintlab.nbody.convergence import ConvergenceRow, convergence_experiment, convergence_row
from quintlab.nbody.dynamics import (
    NBodyStepper,
    choose_dt,
    choose_points,
    energy_per_particle,
    energy_trace_diag,
    evolve_nbody,
    marginal,
    potential_energy_field,
    step_strang_nbody,
    trace_distance,
)
from quintlab.nbody.potentials import (
    BasePotential,
    ConstantPotential,
    GaussianPotential,
    PotentialSpec,
    ZeroPotential,
)
from quintlab.nbody.state import MarginalDensity, NBodyState

__all__ = [
    "BasePotential",
    "GaussianPotential",
    "ConstantPotential",
    "ZeroPotential",
    "PotentialSpec",
    "NBodyState",
    "MarginalDensity",
    "NBodyStepper",
    "potential_energy_field",
    "step_strang_nbody",
    "evolve_nbody",
    "marginal",
    "trace_distance",
    "energy_per_particle",
    "energy_trace_diag",
    "choose_points",
    "choose_dt",
    "ConvergenceRow",
    "convergence_row",
    "convergence_experiment",
]
