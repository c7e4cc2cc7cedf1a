from quintlab.grid.grid_spec import GridSpec
from quintlab.grid.multipliers import (
    MultiplierKind,
    SpectralMultiplier,
    apply_multiplier,
    sobolev_norm,
)
from quintlab.grid.sampling import (
    gaussian_field,
    plane_wave,
    random_smooth_field,
    resample_field,
)
from quintlab.grid.transforms import transform_forward, transform_inverse, transform_tensor

__all__ = [
    "GridSpec",
    "MultiplierKind",
    "SpectralMultiplier",
    "apply_multiplier",
    "sobolev_norm",
    "transform_forward",
    "transform_inverse",
    "transform_tensor",
    "random_smooth_field",
    "gaussian_field",
    "plane_wave",
    "resample_field",
]
