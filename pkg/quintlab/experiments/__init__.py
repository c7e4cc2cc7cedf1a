from typing import Dict, Type

from quintlab.experiments.base_experiment import BaseExperiment, ExperimentResult
from quintlab.experiments.boardgame_experiment import BoardGameExperiment
from quintlab.experiments.bounds_experiment import BoundsExperiment
from quintlab.experiments.commutation_experiment import CommutationExperiment
from quintlab.experiments.duhamel_experiment import DuhamelResidualExperiment
from quintlab.experiments.nbody_experiment import NBodyConvergenceExperiment
from quintlab.experiments.nls_experiment import NlsExperiment

EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    experiment.NAME: experiment
    for experiment in (
        NlsExperiment,
        NBodyConvergenceExperiment,
        DuhamelResidualExperiment,
        BoardGameExperiment,
        BoundsExperiment,
        CommutationExperiment,
    )
}

__all__ = [
    "BaseExperiment",
    "ExperimentResult",
    "EXPERIMENTS",
    "NlsExperiment",
    "NBodyConvergenceExperiment",
    "DuhamelResidualExperiment",
    "BoardGameExperiment",
    "BoundsExperiment",
    "CommutationExperiment",
]
