import time
from contextlib import contextmanager
from enum import Enum
from typing import Any, Iterator


class LoggingLevel(Enum):
    DEBUG = 0
    INFO = 1
    WARNING = 2
    ERROR = 3

    @property
    def level(self) -> int:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "LoggingLevel":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(
                f"Unknown logging level `{name}`. HINT: use one of "
                + ", ".join(member.name.lower() for member in cls)
                + "."
            ) from None


class Logger:
    @property
    def name(self) -> str:
        return self._name

    @property
    def logging_level(self) -> LoggingLevel:
        return self._logging_level

    @logging_level.setter
    def logging_level(self, logging_level: LoggingLevel) -> None:
        self._logging_level = logging_level

    def __init__(self, name: str, logging_level: LoggingLevel = LoggingLevel.WARNING):
        self._name = name
        self._logging_level = logging_level

    def is_enabled_for(self, level: LoggingLevel) -> bool:
        return level.level >= self._logging_level.level

    def log(self, msg: str, *, level: LoggingLevel, **extra: Any) -> None:
        raise NotImplementedError("Logger subclasses must implement `log`.")

    def debug(self, msg: str, **extra: Any) -> None:
        self.log(msg, level=LoggingLevel.DEBUG, **extra)

    def info(self, msg: str, **extra: Any) -> None:
        self.log(msg, level=LoggingLevel.INFO, **extra)

    def warning(self, msg: str, **extra: Any) -> None:
        self.log(msg, level=LoggingLevel.WARNING, **extra)

    def error(self, msg: str, **extra: Any) -> None:
        self.log(msg, level=LoggingLevel.ERROR, **extra)

    @contextmanager
    def timed(self, stage: str, **extra: Any) -> Iterator[None]:
        """Logs the start and the wall-clock duration of `stage`."""
        self.debug(f"{stage} started", **extra)
        started = time.perf_counter()
        yield
        self.info(f"{stage} finished", seconds=time.perf_counter() - started, **extra)
