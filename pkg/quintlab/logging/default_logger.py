from sys import stderr
from typing import Any, Optional, TextIO

from quintlab.logging.logger import Logger, LoggingLevel


class DefaultLogger(Logger):
    def __init__(
        self,
        name: str,
        logging_level: LoggingLevel = LoggingLevel.WARNING,
        *,
        stream: Optional[TextIO] = None,
    ):
        super().__init__(name, logging_level)
        self._stream = stream

    @staticmethod
    def format_value(value: Any) -> str:
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)

    def log(self, msg: str, *, level: LoggingLevel, **extra: Any) -> None:
        msg = f"{level.name}[{self.name}]: {msg}"
        extra_str = [f"{key}={self.format_value(value)}" for key, value in extra.items()]
        if len(extra_str) > 0:
            msg += " (" + ", ".join(extra_str) + ")"

        if self.is_enabled_for(level):
            print(msg, file=self._stream if self._stream is not None else stderr)
