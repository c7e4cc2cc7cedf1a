from typing import Any, List, Optional

import numpy as np
import numpy.typing as npt

from quintlab.exceptions import NumericalError, ValidationError
from quintlab.grid import GridSpec
from quintlab.grid.grid_spec import ComplexArray
from quintlab.nls import WaveFunction


class NBodyState:
    """An N-boson wave function on the N-fold product grid.

    `values` has shape (M,) * (d * N); particle p occupies the axes [p*d, (p+1)*d).
    """

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def N(self) -> int:
        return self._N

    @property
    def values(self) -> ComplexArray:
        return self._values

    @property
    def t(self) -> float:
        return self._t

    @property
    def cell_volume(self) -> float:
        """Quadrature weight h^{dN} of one node of the product grid."""
        return float(self._grid.cell_volume**self._N)

    def __init__(self, *, grid: GridSpec, N: int, values: npt.NDArray[Any], t: float = 0.0):
        expected = (grid.M,) * (grid.d * N)
        if values.shape != expected:
            raise ValidationError(
                f"N-body tensor of shape {values.shape} does not match {expected}.",
                code="dimension_mismatch",
            )
        self._grid = grid
        self._N = N
        self._values = np.asarray(values, dtype=np.complex128)
        self._t = float(t)

    def __repr__(self) -> str:
        return f"NBodyState(grid={self._grid!r}, N={self._N}, t={self._t})"

    @classmethod
    def product(cls, phi: WaveFunction, N: int) -> "NBodyState":
        values = np.asarray(phi.values)
        for _ in range(N - 1):
            values = np.multiply.outer(values, phi.values)
        return cls(grid=phi.grid, N=N, values=values, t=phi.t)

    def evolved(self, values: npt.NDArray[Any], t: float) -> "NBodyState":
        return NBodyState(grid=self._grid, N=self._N, values=values, t=t)

    def norm(self) -> float:
        return float(np.sqrt(self.cell_volume * np.sum(np.abs(self._values) ** 2)))

    def particle_axes(self, p: int) -> List[int]:
        d = self._grid.d
        return list(range(p * d, (p + 1) * d))

    def transposed(self, p: int, q: int) -> ComplexArray:
        """The tensor with particles `p` and `q` (0-based) exchanged."""
        axes = list(range(self._values.ndim))
        for a, b in zip(self.particle_axes(p), self.particle_axes(q)):
            axes[a], axes[b] = axes[b], axes[a]
        return np.transpose(self._values, axes)

    def symmetry_defect(self, rng: Optional[np.random.Generator] = None, samples: int = 0) -> float:
        """max ||Psi - Psi o tau||_2 over transpositions tau.

        With `samples` > 0 that many random transpositions are drawn from `rng`, otherwise all
        transpositions are checked.
        """
        if self._N < 2:
            return 0.0
        if samples > 0:
            generator = rng if rng is not None else np.random.default_rng(0)
            pairs = [
                tuple(generator.choice(self._N, size=2, replace=False)) for _ in range(samples)
            ]
        else:
            pairs = [(p, q) for p in range(self._N) for q in range(p + 1, self._N)]
        defect = 0.0
        for p, q in pairs:
            diff = self._values - self.transposed(int(p), int(q))
            defect = max(defect, float(np.sqrt(self.cell_volume * np.sum(np.abs(diff) ** 2))))
        return defect


class MarginalDensity:
    """A k-particle density matrix in the orthonormal grid basis.

    `matrix` has shape (M^{dk}, M^{dk}); row and column indices enumerate the k-particle
    product grid in C order. The integral kernel gamma(x; x') is `matrix / h^{dk}`.
    """

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def k(self) -> int:
        return self._k

    @property
    def matrix(self) -> ComplexArray:
        return self._matrix

    def __init__(self, *, grid: GridSpec, k: int, matrix: npt.NDArray[Any]):
        dim = grid.size**k
        if matrix.shape != (dim, dim):
            raise ValidationError(
                f"Density matrix of shape {matrix.shape} does not match order {k} on {grid!r}.",
                code="dimension_mismatch",
            )
        self._grid = grid
        self._k = k
        self._matrix = np.asarray(matrix, dtype=np.complex128)

    def __repr__(self) -> str:
        return f"MarginalDensity(grid={self._grid!r}, k={self._k})"

    @classmethod
    def from_product(cls, phi: WaveFunction, k: int) -> "MarginalDensity":
        """|phi><phi|^{(x)k} for a wave function, without normalizing it."""
        vector = phi.values.reshape(-1) * np.sqrt(phi.grid.cell_volume)
        tensor = vector
        for _ in range(k - 1):
            tensor = np.kron(tensor, vector)
        return cls(grid=phi.grid, k=k, matrix=np.outer(tensor, tensor.conj()))

    def kernel(self) -> ComplexArray:
        return self._matrix / self._grid.cell_volume**self._k

    def trace(self) -> complex:
        return complex(np.trace(self._matrix))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self._matrix - self._matrix.conj().T), initial=0.0))

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        hermitian = (self._matrix + self._matrix.conj().T) / 2
        try:
            return np.linalg.eigvalsh(hermitian)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                "Eigenvalue solver failed on a marginal density.", code="eigensolver_failed"
            ) from exc

    def min_eigenvalue(self) -> float:
        return float(np.min(self.eigenvalues()))

    def partial_trace(self) -> "MarginalDensity":
        """Traces out the last particle slot, giving the order k-1 marginal."""
        if self._k < 2:
            raise ValidationError("Cannot partial-trace a first order marginal.")
        outer = self._grid.size ** (self._k - 1)
        inner = self._grid.size
        blocks = self._matrix.reshape(outer, inner, outer, inner)
        return MarginalDensity(
            grid=self._grid, k=self._k - 1, matrix=np.einsum("aibi->ab", blocks)
        )
