from quintlab.nls.solver import (
    StrangStepper,
    TrajectoryRecord,
    energy,
    evolve,
    mass,
    plane_wave_solution,
    self_convergence,
    step_strang,
    trajectory_records,
)
from quintlab.nls.wave_function import NlsModel, NlsParams, WaveFunction

__all__ = [
    "NlsModel",
    "NlsParams",
    "WaveFunction",
    "StrangStepper",
    "TrajectoryRecord",
    "step_strang",
    "mass",
    "energy",
    "evolve",
    "trajectory_records",
    "plane_wave_solution",
    "self_convergence",
]
