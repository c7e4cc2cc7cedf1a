from quintlab.bounds.duhamel_bound import DuhamelBound, iterated_duhamel_bound, map_count_bound
from quintlab.bounds.integrals import (
    DEFAULT_RADII,
    CAlpha,
    CrucialTable,
    TruncationLadder,
    bracket,
    c_alpha,
    crucialint,
    crucialint_scan,
    momentum_grid,
    tail_converges,
    truncated_crucialint,
    truncation_ladder,
)
from quintlab.bounds.poincare import (
    DEFAULT_A_LADDER,
    PoincareCheck,
    mollifier,
    observable_norm,
    poincare_check,
    poincare_ladder,
)
from quintlab.bounds.probes import (
    KmCheck,
    highreg_probe,
    highreg_ratio,
    km_bound_check,
    km_probe,
    random_kernel,
    random_positive_kernel,
    sobolev_trilinear_ratio,
    trace_term,
    trilinear_probe,
)
from quintlab.bounds.report import BoundReport, Verdict
from quintlab.bounds.scaling import (
    ScalingReport,
    ScalingRow,
    expected_exponent,
    potential_scaling_check,
)
from quintlab.bounds.spacetime import SpacetimeProbe, spacetime_bound_probe

__all__ = [
    "BoundReport",
    "Verdict",
    "bracket",
    "tail_converges",
    "DEFAULT_RADII",
    "crucialint",
    "crucialint_scan",
    "truncated_crucialint",
    "TruncationLadder",
    "truncation_ladder",
    "momentum_grid",
    "CrucialTable",
    "CAlpha",
    "c_alpha",
    "random_kernel",
    "random_positive_kernel",
    "sobolev_trilinear_ratio",
    "trilinear_probe",
    "highreg_ratio",
    "highreg_probe",
    "KmCheck",
    "trace_term",
    "km_bound_check",
    "km_probe",
    "DEFAULT_A_LADDER",
    "PoincareCheck",
    "mollifier",
    "observable_norm",
    "poincare_check",
    "poincare_ladder",
    "ScalingRow",
    "ScalingReport",
    "expected_exponent",
    "potential_scaling_check",
    "SpacetimeProbe",
    "spacetime_bound_probe",
    "DuhamelBound",
    "map_count_bound",
    "iterated_duhamel_bound",
]
