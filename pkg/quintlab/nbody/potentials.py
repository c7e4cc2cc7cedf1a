from typing import Any, ClassVar, Dict, List

import numpy as np
import numpy.typing as npt
from typing_extensions import TypeAlias

from quintlab.constants import POTENTIAL_DECAY_TOLERANCE
from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec

FloatArray: TypeAlias = npt.NDArray[np.float64]


class BasePotential:
    """A three-body potential V(a, b) evaluated on displacement arrays.

    Displacements carry their d components on the leading axis: `a.shape == (d, ...)`.
    Implementations must be symmetric, V(a, b) == V(b, a), and nonnegative.
    """

    is_localized: ClassVar[bool] = True
    name: ClassVar[str] = "base"

    def __call__(self, a: FloatArray, b: FloatArray) -> FloatArray:
        raise NotImplementedError("Potential subclasses must implement `__call__`.")

    def gradient_norm(self, a: FloatArray, b: FloatArray) -> FloatArray:
        """|grad V| over both arguments, i.e. the gradient norm on R^{2d}."""
        raise NotImplementedError(f"{type(self).__name__} has no closed-form gradient.")

    def peak(self) -> float:
        raise NotImplementedError("Potential subclasses must implement `peak`.")

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name}


class GaussianPotential(BasePotential):
    """V(a, b) = strength * exp(-(|a|^2 + |b|^2) / (2 width^2))."""

    name: ClassVar[str] = "gaussian"

    @property
    def strength(self) -> float:
        return self._strength

    @property
    def width(self) -> float:
        return self._width

    def __init__(self, *, strength: float = 1.0, width: float = 0.5):
        violations: List[str] = []
        if not strength >= 0:
            violations.append(f"strength must be >= 0, got {strength}")
        if not width > 0:
            violations.append(f"width must be positive, got {width}")
        if violations:
            raise ValidationError("Cannot build Gaussian potential.", violations=violations)
        self._strength = float(strength)
        self._width = float(width)

    @classmethod
    def with_integral(cls, b0: float, *, width: float, d: int) -> "GaussianPotential":
        """The Gaussian of the given width whose integral over R^{2d} is `b0`."""
        return cls(strength=b0 / (2 * np.pi * width**2) ** d, width=width)

    def integral(self, d: int) -> float:
        return float(self._strength * (2 * np.pi * self._width**2) ** d)

    def _r2(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return np.sum(a**2, axis=0) + np.sum(b**2, axis=0)

    def __call__(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return self._strength * np.exp(-self._r2(a, b) / (2 * self._width**2))

    def gradient_norm(self, a: FloatArray, b: FloatArray) -> FloatArray:
        r2 = self._r2(a, b)
        return np.sqrt(r2) / self._width**2 * self._strength * np.exp(-r2 / (2 * self._width**2))

    def peak(self) -> float:
        return self._strength

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "strength": self._strength, "width": self._width}


class ConstantPotential(BasePotential):
    name: ClassVar[str] = "constant"
    is_localized: ClassVar[bool] = False

    @property
    def value(self) -> float:
        return self._value

    def __init__(self, value: float):
        if not value >= 0:
            raise ValidationError(f"Constant potential must be >= 0, got {value}.")
        self._value = float(value)

    def __call__(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return np.full(np.broadcast_shapes(a.shape[1:], b.shape[1:]), self._value)

    def gradient_norm(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return np.zeros(np.broadcast_shapes(a.shape[1:], b.shape[1:]))

    def peak(self) -> float:
        return self._value

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "value": self._value}


class ZeroPotential(ConstantPotential):
    name: ClassVar[str] = "zero"
    is_localized: ClassVar[bool] = True

    def __init__(self) -> None:
        super().__init__(0.0)


def minimal_image(grid: GridSpec, index_difference: npt.NDArray[Any]) -> FloatArray:
    """Periodic displacement for integer node differences, wrapped into [-L/2, L/2)."""
    half = grid.M // 2
    return ((index_difference + half) % grid.M - half) * grid.h


class PotentialSpec:
    """The scaled three-body interaction of an N-particle system.

    V_N(a, b) = N^{2 d beta} V(N^beta a, N^beta b) with 0 < beta < 1/(4(d+1)).
    """

    @property
    def potential(self) -> BasePotential:
        return self._potential

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def N(self) -> int:
        return self._N

    @property
    def d(self) -> int:
        return self._d

    @property
    def prefactor(self) -> float:
        return float(self._N ** (2 * self._d * self._beta))

    @property
    def dilation(self) -> float:
        return float(self._N**self._beta)

    @staticmethod
    def beta_limit(d: int) -> float:
        return 1.0 / (4 * (d + 1))

    def __init__(self, *, potential: BasePotential, beta: float, N: int, d: int):
        violations: List[str] = []
        limit = self.beta_limit(d)
        if not 0 < beta < limit:
            violations.append(f"beta must lie in (0, 1/(4(d+1))) = (0, {limit:g}), got {beta}")
        if N < 1:
            violations.append(f"N must be >= 1, got {N}")
        if violations:
            raise ValidationError("Cannot build potential spec.", violations=violations)

        self._potential = potential
        self._beta = float(beta)
        self._N = N
        self._d = d

    def scaled(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return self.prefactor * self._potential(self.dilation * a, self.dilation * b)

    def pair_displacements(self, grid: GridSpec) -> npt.NDArray[np.float64]:
        """Minimal-image displacements of all grid nodes from node 0, shape (d, *grid.shape)."""
        index = np.indices(grid.shape)
        return minimal_image(grid, index)

    def b0(self, grid: GridSpec) -> float:
        """int V over R^{2d} by grid quadrature over all pairs of displacements."""
        a = self.pair_displacements(grid)
        a_axes = a.reshape((grid.d,) + grid.shape + (1,) * grid.d)
        b_axes = a.reshape((grid.d,) + (1,) * grid.d + grid.shape)
        return float(grid.cell_volume**2 * np.sum(self._potential(a_axes, b_axes)))

    def validate_on(self, grid: GridSpec) -> None:
        """Checks symmetry and nonnegativity on all grid pairs, and decay at distance L/2."""
        if grid.d != self._d:
            raise ValidationError(f"Potential is for d={self._d}, grid has d={grid.d}.")
        a = self.pair_displacements(grid)
        a_axes = a.reshape((grid.d,) + grid.shape + (1,) * grid.d)
        b_axes = a.reshape((grid.d,) + (1,) * grid.d + grid.shape)
        values = self._potential(a_axes, b_axes)
        swapped = self._potential(b_axes, a_axes)

        violations: List[str] = []
        if not np.array_equal(values, swapped):
            violations.append("V(x, x') != V(x', x) on sampled grid pairs")
        if np.any(values < 0):
            violations.append("V < 0 on sampled grid pairs")
        if self._potential.is_localized and self._potential.peak() > 0:
            edge = np.zeros((grid.d, 1))
            edge[0, 0] = grid.L / 2
            origin = np.zeros((grid.d, 1))
            tail = float(self._potential(edge, origin)[0])
            if tail >= POTENTIAL_DECAY_TOLERANCE * self._potential.peak():
                violations.append(
                    f"V at distance L/2 is {tail:g}, not below "
                    f"{POTENTIAL_DECAY_TOLERANCE:g} * max V; HINT: enlarge L or narrow V"
                )
        if violations:
            raise ValidationError("Potential is not admissible.", violations=violations)
