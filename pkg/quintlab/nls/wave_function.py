from enum import Enum
from typing import Any, List, Optional

import numpy as np
import numpy.typing as npt

from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec
from quintlab.grid.grid_spec import ComplexArray


class NlsModel(Enum):
    QUINTIC = "quintic"
    MIXED = "mixed"


class NlsParams:
    """Couplings and time step of the defocusing NLS

    i d_t phi + Laplacian phi - lambda2 |phi|^2 phi - q |phi|^4 phi = 0,

    where q is `b0` for the quintic model and `lambda3` for the mixed model. The quintic model
    ignores `lambda2`.
    """

    @property
    def b0(self) -> float:
        return self._b0

    @property
    def lambda2(self) -> float:
        return self._lambda2

    @property
    def lambda3(self) -> float:
        return self._lambda3

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def model(self) -> NlsModel:
        return self._model

    @property
    def cubic_coupling(self) -> float:
        return self._lambda2 if self._model is NlsModel.MIXED else 0.0

    @property
    def quintic_coupling(self) -> float:
        return self._lambda3 if self._model is NlsModel.MIXED else self._b0

    def __init__(
        self,
        *,
        dt: float,
        b0: float = 0.0,
        lambda2: float = 0.0,
        lambda3: float = 0.0,
        model: NlsModel = NlsModel.QUINTIC,
    ):
        violations: List[str] = []
        if not dt > 0:
            violations.append(f"dt must be positive, got {dt}")
        for name, value in (("b0", b0), ("lambda2", lambda2), ("lambda3", lambda3)):
            if not value >= 0:
                violations.append(f"{name} must be >= 0 (defocusing), got {value}")
        if violations:
            raise ValidationError("Cannot build NLS parameters.", violations=violations)

        self._dt = float(dt)
        self._b0 = float(b0)
        self._lambda2 = float(lambda2)
        self._lambda3 = float(lambda3)
        self._model = model

    def __repr__(self) -> str:
        return (
            f"NlsParams(model={self._model.value}, b0={self._b0}, lambda2={self._lambda2}, "
            f"lambda3={self._lambda3}, dt={self._dt})"
        )

    def with_dt(self, dt: float) -> "NlsParams":
        return NlsParams(
            dt=dt, b0=self._b0, lambda2=self._lambda2, lambda3=self._lambda3, model=self._model
        )

    def with_b0(self, b0: float) -> "NlsParams":
        return NlsParams(
            dt=self._dt, b0=b0, lambda2=self._lambda2, lambda3=self._lambda3, model=self._model
        )


class WaveFunction:
    """A single-particle field `values` on `grid` at time `t`."""

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def values(self) -> ComplexArray:
        return self._values

    @property
    def t(self) -> float:
        return self._t

    def __init__(self, *, grid: GridSpec, values: npt.NDArray[Any], t: float = 0.0):
        grid.check_field(values)
        self._grid = grid
        self._values = np.asarray(values, dtype=np.complex128)
        self._t = float(t)

    def __repr__(self) -> str:
        return f"WaveFunction(grid={self._grid!r}, t={self._t})"

    def evolved(self, values: npt.NDArray[Any], t: Optional[float] = None) -> "WaveFunction":
        return WaveFunction(grid=self._grid, values=values, t=self._t if t is None else t)

    def mass(self) -> float:
        return self._grid.l2_norm(self._values) ** 2

    def normalized(self) -> "WaveFunction":
        norm = self._grid.l2_norm(self._values)
        if norm == 0.0:
            raise ValidationError("Cannot normalize the zero wave function.", code="zero_field")
        return self.evolved(self._values / norm)
