from quintlab.logging.default_logger import DefaultLogger
from quintlab.logging.logger import Logger, LoggingLevel

__all__ = ["Logger", "LoggingLevel", "DefaultLogger"]
