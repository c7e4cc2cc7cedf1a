"""Numerical laboratory for the quintic NLS, its N-body derivation and the GP hierarchy."""

from quintlab.configuration import Configuration
from quintlab.exceptions import (
    CanonicalizationError,
    LabException,
    NumericalError,
    ResourceCapError,
    ValidationError,
)
from quintlab.experiments import ExperimentResult
from quintlab.lab import Lab
from quintlab.logging.logger import LoggingLevel
from quintlab.version import __version__

__all__ = [
    "__version__",
    "Lab",
    "Configuration",
    "ExperimentResult",
    "LoggingLevel",
    "LabException",
    "ValidationError",
    "ResourceCapError",
    "NumericalError",
    "CanonicalizationError",
]
