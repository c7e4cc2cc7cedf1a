from pathlib import Path
from typing import Any, List, Optional, Union

from quintlab.configuration import Configuration
from quintlab.exceptions import ValidationError
from quintlab.experiments import EXPERIMENTS, BaseExperiment, ExperimentResult
from quintlab.logging.logger import LoggingLevel


class Lab:
    """Entry point tying a configuration to the named experiments.

    :param config: The configuration every run starts from, defaults to :code:`Configuration()`.
    :type config: Configuration
    :param logging_level: Overrides the logging level of `config` when given.
    :type logging_level: LoggingLevel
    """

    @property
    def config(self) -> Configuration:
        return self._config

    @property
    def experiments(self) -> List[str]:
        """Names of all experiments, in the order the CLI lists them."""
        return list(EXPERIMENTS)

    def __init__(
        self,
        config: Optional[Configuration] = None,
        *,
        logging_level: Optional[LoggingLevel] = None,
    ):
        config = config if config is not None else Configuration()
        if logging_level is not None:
            config = config.with_overrides(logging_level=logging_level.name.lower())
        self._config = config

    def experiment(
        self, name: str, out_dir: Union[str, Path], **overrides: Any
    ) -> BaseExperiment:
        """Builds the experiment `name`, applying `overrides` to the lab configuration."""
        if name not in EXPERIMENTS:
            raise ValidationError(
                f"Unknown experiment `{name}`.",
                code="unknown_experiment",
                details="HINT: use one of " + ", ".join(EXPERIMENTS) + ".",
            )
        config = self._config.with_overrides(**overrides) if overrides else self._config
        return EXPERIMENTS[name](config=config, out_dir=Path(out_dir))

    def run(self, name: str, out_dir: Union[str, Path], **overrides: Any) -> ExperimentResult:
        """Validates the configuration, runs experiment `name` and writes its artifacts.

        :raises quintlab.exceptions.LabException: Validation, resource-cap or numerical error.
        """
        return self.experiment(name, out_dir, **overrides).run()
