from pathlib import Path
from typing import Any, ClassVar, Dict, Iterable, List, NamedTuple, Sequence

import numpy as np

from quintlab.configuration import Configuration
from quintlab.constants import EXPERIMENT_ANCHORS
from quintlab.hierarchy import SeparableKernel
from quintlab.io import ArtifactHeader, write_field, write_json_file, write_kernel, write_table_file
from quintlab.logging import Logger
from quintlab.nls import WaveFunction


class ExperimentResult(NamedTuple):
    experiment: str
    artifacts: List[Path]
    summary: Dict[str, Any]


class BaseExperiment:
    """Validates its configuration, runs one experiment and writes its artifacts to `out_dir`.

    Subclasses set :attr:`NAME` and implement :meth:`execute`, which returns the summary that
    ends up in ``summary.json``.

    :param config: The configuration of this run.
    :param out_dir: Directory owned by this run; created when missing.
    """

    NAME: ClassVar[str] = ""
    DESCRIPTION: ClassVar[str] = ""

    @property
    def config(self) -> Configuration:
        return self._config

    @property
    def out_dir(self) -> Path:
        return self._out_dir

    @property
    def logger(self) -> Logger:
        return self._config.logger

    @property
    def rng(self) -> np.random.Generator:
        return self._rng

    @property
    def header(self) -> ArtifactHeader:
        return ArtifactHeader(
            experiment=self.NAME,
            config_hash=self._config.config_hash,
            seed=self._config.seed,
            anchor=EXPERIMENT_ANCHORS[self.NAME],
        )

    def __init__(self, *, config: Configuration, out_dir: Path):
        self._config = config
        self._out_dir = Path(out_dir)
        self._rng = np.random.default_rng(config.seed)
        self._artifacts: List[Path] = []

    def execute(self) -> Dict[str, Any]:
        raise NotImplementedError("Experiment subclasses must implement `execute`.")

    def run(self) -> ExperimentResult:
        self._config.validate(self.NAME)
        self._out_dir.mkdir(parents=True, exist_ok=True)
        self._artifacts = []
        self._rng = np.random.default_rng(self._config.seed)
        with self.logger.timed(f"experiment {self.NAME}", out=str(self._out_dir)):
            summary = self.execute()
            self.write_json("summary.json", summary)
        return ExperimentResult(
            experiment=self.NAME, artifacts=list(self._artifacts), summary=summary
        )

    def _register(self, path: Path) -> Path:
        self._artifacts.append(path)
        self.logger.debug("artifact written", path=str(path))
        return path

    def write_table(
        self, filename: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        return self._register(
            write_table_file(self._out_dir / filename, self.header, columns, rows)
        )

    def write_json(self, filename: str, payload: Any) -> Path:
        return self._register(write_json_file(self._out_dir / filename, self.header, payload))

    def write_field(self, filename: str, phi: WaveFunction) -> Path:
        path = self._out_dir / filename
        with open(path, "wb") as stream:
            write_field(stream, phi)
        return self._register(path)

    def write_kernel(self, filename: str, gamma: SeparableKernel) -> Path:
        path = self._out_dir / filename
        with open(path, "wb") as stream:
            write_kernel(stream, gamma)
        return self._register(path)
