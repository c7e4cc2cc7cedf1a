"""Binary field and kernel dumps.

A field dump is the little-endian header `int32 d, int32 M, float64 L, float64 t` followed by
the M^d values in C order as (re, im) float64 pairs. A kernel dump is the header
`int32 order, int32 rank, int32 d, int32 M, float64 L`, the rank coefficients as (re, im) pairs,
then for every term and slot the f field followed by the g field.
"""

import struct
from typing import BinaryIO

import numpy as np

from quintlab.exceptions import ValidationError
from quintlab.grid import GridSpec
from quintlab.hierarchy import SeparableKernel
from quintlab.nls import WaveFunction

FIELD_HEADER = struct.Struct("<iidd")
KERNEL_HEADER = struct.Struct("<iiiid")
VALUE_DTYPE = np.dtype("<c16")


def _read_exact(stream: BinaryIO, size: int) -> bytes:
    data = stream.read(size)
    if len(data) != size:
        raise ValidationError(
            "Cannot read dump.",
            code="truncated_dump",
            details=f"HINT: expected {size} bytes, found {len(data)}.",
        )
    return data


def _read_values(stream: BinaryIO, count: int) -> np.ndarray:  # type: ignore[type-arg]
    raw = _read_exact(stream, count * VALUE_DTYPE.itemsize)
    return np.frombuffer(raw, dtype=VALUE_DTYPE).astype(np.complex128)


def write_field(stream: BinaryIO, phi: WaveFunction) -> None:
    grid = phi.grid
    stream.write(FIELD_HEADER.pack(grid.d, grid.M, grid.L, phi.t))
    stream.write(np.ascontiguousarray(phi.values, dtype=VALUE_DTYPE).tobytes())


def read_field(stream: BinaryIO) -> WaveFunction:
    d, M, L, t = FIELD_HEADER.unpack(_read_exact(stream, FIELD_HEADER.size))
    grid = GridSpec(d=d, M=M, L=L)
    values = _read_values(stream, grid.size).reshape(grid.shape)
    return WaveFunction(grid=grid, values=values, t=t)


def write_kernel(stream: BinaryIO, gamma: SeparableKernel) -> None:
    grid = gamma.grid
    stream.write(KERNEL_HEADER.pack(gamma.order, gamma.rank, grid.d, grid.M, grid.L))
    stream.write(np.ascontiguousarray(gamma.coefficients, dtype=VALUE_DTYPE).tobytes())
    # interleave f and g per (term, slot)
    factors = np.stack([gamma.f, gamma.g], axis=2)
    stream.write(np.ascontiguousarray(factors, dtype=VALUE_DTYPE).tobytes())


def read_kernel(stream: BinaryIO) -> SeparableKernel:
    order, rank, d, M, L = KERNEL_HEADER.unpack(_read_exact(stream, KERNEL_HEADER.size))
    grid = GridSpec(d=d, M=M, L=L)
    coefficients = _read_values(stream, rank)
    factors = _read_values(stream, rank * order * 2 * grid.size)
    factors = factors.reshape((rank, order, 2) + grid.shape)
    return SeparableKernel(
        grid=grid, coefficients=coefficients, f=factors[:, :, 0], g=factors[:, :, 1]
    )
