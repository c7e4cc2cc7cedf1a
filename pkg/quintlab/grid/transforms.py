from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt
import scipy.fft

from quintlab.grid.grid_spec import ComplexArray, GridSpec

DEFAULT_WORKERS = 1


def _axes(field: npt.NDArray[Any], spec: GridSpec, batched: bool) -> Sequence[int]:
    spec.check_field(field, batched=batched)
    return tuple(range(field.ndim - spec.d, field.ndim))


def transform_forward(
    field: npt.NDArray[Any],
    spec: GridSpec,
    *,
    batched: bool = False,
    workers: Optional[int] = None,
) -> ComplexArray:
    """Unitary forward transform over the spatial axes of `field`.

    With `batched` the trailing `spec.d` axes are transformed and leading axes are batch axes.
    """
    axes = _axes(field, spec, batched)
    return scipy.fft.fftn(
        np.asarray(field, dtype=np.complex128),
        axes=axes,
        norm="ortho",
        workers=workers or DEFAULT_WORKERS,
    )


def transform_inverse(
    field: npt.NDArray[Any],
    spec: GridSpec,
    *,
    batched: bool = False,
    workers: Optional[int] = None,
) -> ComplexArray:
    axes = _axes(field, spec, batched)
    return scipy.fft.ifftn(
        np.asarray(field, dtype=np.complex128),
        axes=axes,
        norm="ortho",
        workers=workers or DEFAULT_WORKERS,
    )


def transform_tensor(
    values: npt.NDArray[Any],
    *,
    inverse: bool = False,
    workers: Optional[int] = None,
) -> ComplexArray:
    """Unitary transform over every axis of a product-grid tensor."""
    fft = scipy.fft.ifftn if inverse else scipy.fft.fftn
    return fft(
        np.asarray(values, dtype=np.complex128), norm="ortho", workers=workers or DEFAULT_WORKERS
    )
