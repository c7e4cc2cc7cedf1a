import hashlib
import json
import math
from typing import Any, Dict

import numpy as np
import numpy.typing as npt

from quintlab.constants import CHECKSUM_LENGTH


class Helpers:
    @staticmethod
    def is_power_of_two(value: int) -> bool:
        return value > 0 and (value & (value - 1)) == 0

    @staticmethod
    def canonical_json(obj: Dict[str, Any]) -> str:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)

    @staticmethod
    def config_hash(obj: Dict[str, Any]) -> str:
        return hashlib.sha256(Helpers.canonical_json(obj).encode("utf-8")).hexdigest()

    @staticmethod
    def field_checksum(values: npt.NDArray[Any]) -> str:
        # little-endian complex128 bytes so the checksum is platform independent
        raw = np.ascontiguousarray(values, dtype="<c16").tobytes()
        return hashlib.sha256(raw).hexdigest()[:CHECKSUM_LENGTH]

    @staticmethod
    def relative_change(previous: float, current: float) -> float:
        scale = max(abs(previous), abs(current))
        if scale == 0.0:
            return 0.0
        return abs(current - previous) / scale

    @staticmethod
    def step_count(interval: float, dt: float, *, tolerance: float = 1e-9) -> int:
        """Number of dt steps in `interval`; raises if dt does not divide it."""
        steps = interval / dt
        rounded = int(round(steps))
        if rounded < 1 or abs(steps - rounded) > tolerance * max(1.0, steps):
            raise ValueError(f"Time step {dt} does not divide the interval {interval}.")
        return rounded

    @staticmethod
    def log_grid(maximum: float, count: int) -> npt.NDArray[np.float64]:
        """`count` points 0, then log-spaced from 1 up to `maximum`."""
        if count < 2:
            return np.zeros(1)
        return np.concatenate(([0.0], np.logspace(0.0, math.log10(maximum), count - 1)))

