"""Dense multi-index reference implementations of the kernel algebra, d = 1 only.

A dense kernel of order n has axes (x_1..x_n, x'_1..x'_n), each of length M.
"""

import string
from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt
import scipy.fft

from quintlab.grid import GridSpec

UNPRIMED = string.ascii_lowercase
PRIMED = string.ascii_uppercase


def contract(
    dense: npt.NDArray[Any], j: int, a: int, b: int, *, plus: bool
) -> npt.NDArray[Any]:
    """Pins x_a, x'_a, x_b, x'_b to x_j (plus) or x'_j (minus) through repeated einsum labels."""
    n = dense.ndim // 2
    pinned = UNPRIMED[j - 1] if plus else PRIMED[j - 1]
    inputs = [pinned if s in (a, b) else UNPRIMED[s - 1] for s in range(1, n + 1)]
    inputs += [pinned if s in (a, b) else PRIMED[s - 1] for s in range(1, n + 1)]
    kept = [s for s in range(1, n + 1) if s not in (a, b)]
    output = [UNPRIMED[s - 1] for s in kept] + [PRIMED[s - 1] for s in kept]
    return np.einsum("".join(inputs) + "->" + "".join(output), dense)


def free_propagate(
    dense: npt.NDArray[Any], grid: GridSpec, t: float, slots: Optional[Sequence[int]] = None
) -> npt.NDArray[Any]:
    """exp(i t Laplacian) on the unprimed axes of `slots`, its conjugate on the primed axes."""
    n = dense.ndim // 2
    chosen = range(1, n + 1) if slots is None else slots
    k2 = grid.axis_wavenumbers() ** 2
    result = np.asarray(dense, dtype=np.complex128)
    for s in chosen:
        for axis, sign in ((s - 1, -1.0), (n + s - 1, 1.0)):
            shape = [1] * result.ndim
            shape[axis] = grid.M
            spectrum = scipy.fft.fft(result, axis=axis, norm="ortho")
            spectrum = spectrum * np.exp(sign * 1j * t * k2).reshape(shape)
            result = scipy.fft.ifft(spectrum, axis=axis, norm="ortho")
    return result


def sobolev_inner(
    first: npt.NDArray[Any], second: npt.NDArray[Any], grid: GridSpec, alpha: float
) -> complex:
    """h^{2n} sum conj(S first) S second with S = (1 - Laplacian)^(alpha/2) on every axis."""
    weight_1d = (1.0 + grid.axis_wavenumbers() ** 2) ** (alpha / 2)
    weight = np.ones(())
    for _ in range(first.ndim):
        weight = np.multiply.outer(weight, weight_1d)
    spectra = [weight * scipy.fft.fftn(dense, norm="ortho") for dense in (first, second)]
    return complex(grid.h**first.ndim * np.vdot(spectra[0], spectra[1]))


def adjoint(dense: npt.NDArray[Any]) -> npt.NDArray[Any]:
    n = dense.ndim // 2
    axes = list(range(n, 2 * n)) + list(range(n))
    return np.transpose(dense, axes).conj()
