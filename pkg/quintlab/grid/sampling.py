from typing import Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.fft

from quintlab.exceptions import ValidationError
from quintlab.grid.grid_spec import ComplexArray, GridSpec
from quintlab.grid.transforms import transform_forward, transform_inverse


def band_mask(grid: GridSpec) -> npt.NDArray[np.bool_]:
    """True on the lower two thirds of the frequency grid (|j| <= M/3 on every axis)."""
    j = np.abs(scipy.fft.fftfreq(grid.M, d=1.0 / grid.M))
    axis_mask = j <= grid.M / 3
    mask = np.ones(grid.shape, dtype=bool)
    for axis in range(grid.d):
        shape = [1] * grid.d
        shape[axis] = grid.M
        mask = mask & axis_mask.reshape(shape)
    return mask


def random_smooth_field(
    grid: GridSpec,
    rng: np.random.Generator,
    *,
    batch_shape: Tuple[int, ...] = (),
    roughness: float = 0.0,
) -> ComplexArray:
    """Band-limited random fields of unit L2 norm.

    The spectrum is complex Gaussian noise weighted by <k>^(roughness - 1) with the top third of
    frequencies zeroed; `roughness` > 1 gives fields whose energy sits at high frequencies.
    """
    shape = batch_shape + grid.shape
    noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    weight = (1.0 + grid.k_squared) ** ((roughness - 1.0) / 2) * band_mask(grid)
    fields = transform_inverse(noise * weight, grid, batched=True)
    axes = tuple(range(len(batch_shape), len(shape)))
    norms = np.sqrt(grid.cell_volume * np.sum(np.abs(fields) ** 2, axis=axes, keepdims=True))
    return fields / norms


def gaussian_field(grid: GridSpec, width: float, center: float = 0.0) -> ComplexArray:
    """A normalized Gaussian exp(-|x - center|^2 / (2 width^2))."""
    r2 = sum((x - center) ** 2 for x in grid.coordinates())
    field = np.exp(-r2 / (2 * width**2)).astype(np.complex128)
    return field / grid.l2_norm(field)


def plane_wave(
    grid: GridSpec, mode: Union[int, Tuple[int, ...]] = 1, amplitude: float = 1.0
) -> ComplexArray:
    """amplitude * exp(i k.x) with k = 2*pi*mode/L."""
    modes = (mode,) * grid.d if isinstance(mode, int) else mode
    phase = sum(2 * np.pi * m / grid.L * x for m, x in zip(modes, grid.coordinates()))
    return amplitude * np.exp(1j * phase)


def resample_field(field: ComplexArray, source: GridSpec, target: GridSpec) -> ComplexArray:
    """Spectral interpolation of `field` from `source` onto `target` (same d and L).

    Modes |j| < min(M_source, M_target)/2 are carried over; the rest are dropped or zero.
    """
    if source.d != target.d or source.L != target.L:
        raise ValidationError(
            f"Cannot resample from {source!r} to {target!r}.",
            code="grid_mismatch",
            details="HINT: only the number of points per axis may differ.",
        )
    if source == target:
        return np.array(field, dtype=np.complex128)
    spectrum = transform_forward(field, source)
    m = min(source.M, target.M)
    modes = np.arange(-m // 2 + 1, m // 2)
    source_index = np.ix_(*([modes % source.M] * source.d))
    target_index = np.ix_(*([modes % target.M] * target.d))
    resampled = np.zeros(target.shape, dtype=np.complex128)
    resampled[target_index] = spectrum[source_index] * (target.M / source.M) ** (source.d / 2)
    return transform_inverse(resampled, target)
