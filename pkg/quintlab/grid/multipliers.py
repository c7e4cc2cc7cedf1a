from enum import Enum
from typing import Any, Optional

import numpy as np
import numpy.typing as npt

from quintlab.exceptions import ValidationError
from quintlab.grid.grid_spec import ComplexArray, GridSpec
from quintlab.grid.transforms import transform_forward, transform_inverse


class MultiplierKind(Enum):
    LAPLACIAN = "laplacian"
    SOBOLEV = "sobolev"
    FREE_FLOW = "free-flow"

    @property
    def is_unitary(self) -> bool:
        return self is MultiplierKind.FREE_FLOW


class SpectralMultiplier:
    """A diagonal operator in Fourier space.

    - ``laplacian``: -|k|^2
    - ``sobolev(alpha)``: (1+|k|^2)^(alpha/2)
    - ``free-flow(t)``: exp(-i t |k|^2), i.e. exp(i t Laplacian)
    """

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def kind(self) -> MultiplierKind:
        return self._kind

    @property
    def parameter(self) -> Optional[float]:
        """alpha for sobolev, t for free-flow, None for the laplacian."""
        return self._parameter

    @property
    def values(self) -> npt.NDArray[Any]:
        return self._values

    def __init__(
        self,
        *,
        grid: GridSpec,
        kind: MultiplierKind,
        values: npt.NDArray[Any],
        parameter: Optional[float] = None,
    ):
        grid.check_field(values)
        values.setflags(write=False)
        self._grid = grid
        self._kind = kind
        self._values = values
        self._parameter = parameter

    def __repr__(self) -> str:
        return f"SpectralMultiplier(kind={self._kind.value}, parameter={self._parameter})"

    @classmethod
    def laplacian(cls, grid: GridSpec) -> "SpectralMultiplier":
        return cls(grid=grid, kind=MultiplierKind.LAPLACIAN, values=-np.array(grid.k_squared))

    @classmethod
    def sobolev(cls, grid: GridSpec, alpha: float) -> "SpectralMultiplier":
        values = (1.0 + grid.k_squared) ** (alpha / 2)
        return cls(grid=grid, kind=MultiplierKind.SOBOLEV, values=values, parameter=alpha)

    @classmethod
    def free_flow(cls, grid: GridSpec, t: float) -> "SpectralMultiplier":
        values = np.exp(-1j * t * grid.k_squared)
        return cls(grid=grid, kind=MultiplierKind.FREE_FLOW, values=values, parameter=t)

    def compose(self, other: "SpectralMultiplier") -> "SpectralMultiplier":
        """Product of two multipliers of the same kind, as a multiplier of that kind."""
        if other.grid != self._grid or other.kind != self._kind:
            raise ValidationError(
                f"Cannot compose {self!r} with {other!r}.",
                code="multiplier_mismatch",
                details="HINT: both multipliers must share kind and grid.",
            )
        if self._kind is MultiplierKind.SOBOLEV:
            return SpectralMultiplier.sobolev(self._grid, self._param() + other._param())
        if self._kind is MultiplierKind.FREE_FLOW:
            return SpectralMultiplier.free_flow(self._grid, self._param() + other._param())
        return SpectralMultiplier(
            grid=self._grid, kind=self._kind, values=self._values * other.values
        )

    def _param(self) -> float:
        return 0.0 if self._parameter is None else self._parameter


def apply_multiplier(
    field: npt.NDArray[Any],
    mult: SpectralMultiplier,
    *,
    batched: bool = False,
    workers: Optional[int] = None,
) -> ComplexArray:
    spectrum = transform_forward(field, mult.grid, batched=batched, workers=workers)
    return transform_inverse(mult.values * spectrum, mult.grid, batched=batched, workers=workers)


def sobolev_norm(field: npt.NDArray[Any], alpha: float, grid: GridSpec) -> float:
    """The H^alpha norm ||(1-Laplacian)^(alpha/2) field||_2, evaluated in Fourier space."""
    spectrum = transform_forward(field, grid)
    weight = (1.0 + grid.k_squared) ** alpha
    return float(np.sqrt(grid.cell_volume * np.sum(weight * np.abs(spectrum) ** 2)))
