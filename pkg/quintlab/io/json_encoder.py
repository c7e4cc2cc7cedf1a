from enum import Enum
from json import JSONEncoder
from typing import Any

import numpy as np


class NumpyJsonEncoder(JSONEncoder):
    """Encodes numpy scalars and arrays, complex numbers, enums and `to_dict` objects."""

    def default(self, o: Any) -> Any:
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, Enum):
            return o.value
        if hasattr(o, "to_dict"):
            return o.to_dict()
        return JSONEncoder.default(self, o)
