"""Weighted convolution integrals over R^d, d in {1, 2}.

    crucialint(alpha, d, P) = int dy <P - y>^{-(2 - 2 alpha)} <y>^{-2},   <x> = sqrt(1 + |x|^2)

In d = 1 the tails beyond the truncation radius R are integrated by `quad` on the infinite
intervals. In d = 2 the integral is taken in polar coordinates (the angular integral of a
smooth periodic function by the trapezoid rule) and the region |y| > R is replaced by its far
field 2 pi R^{-(2 - 2 alpha)} / (2 - 2 alpha), exact up to O(<P>^2 / R^2). The integrand decays
like |y|^{-(4 - 2 alpha)}, so the integral is finite iff 4 - 2 alpha > d.
Otherwise it is measured on |y| <= R for a ladder of radii R, and a relative change above the
stability threshold between the last two rungs marks it unbounded.
"""

import math
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from typing_extensions import TypeAlias

from quintlab.bounds.report import BoundReport, Verdict
from quintlab.exceptions import NumericalError, ValidationError
from quintlab.helpers import Helpers

QUAD_LIMIT = 500
QUAD_TOLERANCE = 1e-6
RADIUS_FACTOR = 1e3
DEFAULT_P_MAX = 1e3
DEFAULT_P_POINTS = 9
DEFAULT_TABLE_POINTS = 48
DEFAULT_RADII = (1e1, 1e2, 1e3, 1e4)
MAX_ANGULAR_POINTS = 2**20

Momentum: TypeAlias = Union[float, Sequence[float]]
Profile: TypeAlias = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def bracket(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.sqrt(1.0 + np.asarray(x, dtype=np.float64) ** 2)


def tail_converges(alpha: float, d: int) -> bool:
    return 4.0 - 2.0 * alpha > d


def check_range(alpha: float, d: int) -> None:
    violations = []
    if not 0 < alpha <= 1:
        violations.append(f"alpha must lie in (0, 1], got {alpha}")
    if d not in (1, 2):
        violations.append(f"d must be 1 or 2, got {d}")
    if violations:
        raise ValidationError("Cannot evaluate weighted integral.", violations=violations)


def _quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    points: Optional[Sequence[float]] = None,
) -> float:
    inner = None
    if points is not None:
        inner = sorted({p for p in points if lower < p < upper}) or None
    result = quad(
        func,
        lower,
        upper,
        points=inner,
        limit=QUAD_LIMIT,
        epsabs=1e-13,
        epsrel=1e-11,
        full_output=1,
    )
    value, error = float(result[0]), float(result[1])
    if len(result) > 3 and error > QUAD_TOLERANCE * max(1.0, abs(value)):
        raise NumericalError(
            f"Quadrature did not converge on [{lower}, {upper}].",
            code="quadrature_failure",
            details=str(result[3]),
            context={"value": value, "error": error},
        )
    return value


def _magnitude(P: Momentum) -> float:
    return float(np.linalg.norm(np.atleast_1d(np.asarray(P, dtype=np.float64))))


def angular_points(rho: float, P: float) -> int:
    """Trapezoid nodes for an angular profile whose complex singularity sits at distance eta."""
    if rho == 0 or P == 0:
        return 64
    eta = math.acosh(max((1.0 + rho**2 + P**2) / (2 * rho * P), 1.0))
    if eta == 0:
        return MAX_ANGULAR_POINTS
    return min(64 + 2 * math.ceil(15 / eta), MAX_ANGULAR_POINTS)


def _angular_mean(profile: Profile, rho: float, P: float) -> float:
    """Mean over theta of profile(|P e_1 - rho e_theta|)."""
    theta = np.linspace(0.0, 2 * np.pi, angular_points(rho, P), endpoint=False)
    distance = np.sqrt(np.maximum(rho**2 + P**2 - 2 * rho * P * np.cos(theta), 0.0))
    return float(np.mean(profile(distance)))


def _disk_integral(profile: Profile, P: float, radius: float) -> float:
    """int_{|y| <= radius} profile(|P - y|) <y>^{-2} dy in d = 2."""

    def radial(rho: float) -> float:
        return rho / (1.0 + rho**2) * _angular_mean(profile, rho, P)

    return 2 * np.pi * _quad(radial, 0.0, radius, points=[P])


def _radial_integral(
    profile: Profile,
    P: float,
    radius: float,
    decay: float,
    amplitude: float,
) -> float:
    """int_{R^2} profile(|P - y|) <y>^{-2} dy with profile(q) ~ amplitude q^{-decay} far out."""
    tail = 2 * np.pi * amplitude * radius ** (-decay) / decay
    return _disk_integral(profile, P, radius) + tail


def _crucial_profile(s: float) -> Profile:
    def profile(q: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return (1.0 + q**2) ** (-s / 2)

    return profile


def _crucial_integrand(p: float, s: float) -> Callable[[float], float]:
    def integrand(y: float) -> float:
        return float((1.0 + (p - y) ** 2) ** (-s / 2) / (1.0 + y**2))

    return integrand


def truncated_crucialint(alpha: float, d: int, P: Momentum, radius: float) -> float:
    """The weighted integral restricted to |y| <= radius; finite for every alpha."""
    check_range(alpha, d)
    if not radius > 0:
        raise ValidationError(
            "Cannot evaluate weighted integral.",
            violations=[f"radius must be positive, got {radius}"],
        )
    p = _magnitude(P)
    s = 2.0 - 2.0 * alpha
    if d == 1:
        return _quad(_crucial_integrand(p, s), -radius, radius, points=[0.0, p])
    return _disk_integral(_crucial_profile(s), p, radius)


class TruncationLadder(NamedTuple):
    radii: Tuple[float, ...]
    values: Tuple[float, ...]
    verdict: Verdict

    @property
    def refinement(self) -> float:
        return Helpers.relative_change(self.values[-2], self.values[-1])


def truncation_ladder(
    alpha: float,
    d: int,
    P: Momentum = 0.0,
    *,
    radii: Sequence[float] = DEFAULT_RADII,
) -> TruncationLadder:
    """The truncated integral on growing radii; the verdict follows the last relative change."""
    if len(radii) < 2 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValidationError(
            "Cannot build truncation ladder.",
            violations=[f"need at least two increasing radii, got {list(radii)}"],
        )
    values = tuple(truncated_crucialint(alpha, d, P, R) for R in radii)
    return TruncationLadder(
        radii=tuple(float(R) for R in radii),
        values=values,
        verdict=Verdict.from_refinement(Helpers.relative_change(values[-2], values[-1])),
    )


def crucialint(alpha: float, d: int, P: Momentum, *, radius: Optional[float] = None) -> float:
    """The weighted integral at momentum P.

    When the tail does not converge the integral is measured on a ladder of truncation radii;
    the result is inf when the ladder keeps growing and its last value otherwise.
    """
    check_range(alpha, d)
    if not tail_converges(alpha, d):
        ladder = truncation_ladder(alpha, d, P)
        return ladder.values[-1] if ladder.verdict.is_bounded else math.inf
    p = _magnitude(P)
    s = 2.0 - 2.0 * alpha
    R = radius if radius is not None else RADIUS_FACTOR * float(bracket(p))
    if d == 1:
        integrand = _crucial_integrand(p, s)
        return (
            _quad(integrand, -R, R, points=[0.0, p])
            + _quad(integrand, R, math.inf)
            + _quad(integrand, -math.inf, -R)
        )
    return _radial_integral(_crucial_profile(s), p, R, s, 1.0)


def momentum_grid(P_max: float = DEFAULT_P_MAX, points: int = DEFAULT_P_POINTS) -> List[float]:
    return [float(p) for p in Helpers.log_grid(P_max, points)]


def _scan_sup(
    alpha: float, d: int, grid: Sequence[float], radius_factor: float
) -> Tuple[float, float]:
    s = 2.0 - 2.0 * alpha
    ratios = [
        crucialint(alpha, d, P, radius=radius_factor * float(bracket(P))) * float(bracket(P)) ** s
        for P in grid
    ]
    best = int(np.argmax(ratios))
    return ratios[best], grid[best]


def crucialint_scan(
    alpha: float,
    d: int,
    *,
    P_max: float = DEFAULT_P_MAX,
    points: int = DEFAULT_P_POINTS,
) -> BoundReport:
    """sup_P crucialint(alpha, d, P) <P>^{2 - 2 alpha} over a log-spaced momentum grid.

    The refinement reruns with the truncation radius and the grid density doubled.
    """
    check_range(alpha, d)
    parameters = {"alpha": alpha, "d": d, "P_max": P_max, "points": points}
    if not tail_converges(alpha, d):
        ladder = truncation_ladder(alpha, d)
        parameters["radii"] = list(ladder.radii)
        parameters["truncated"] = list(ladder.values)
        return BoundReport(
            name="crucialint",
            parameters=parameters,
            observed_sup=ladder.values[-1],
            sample_size=len(ladder.radii),
            refinement=ladder.refinement,
            verdict=ladder.verdict,
        )
    coarse, _ = _scan_sup(alpha, d, momentum_grid(P_max, points), RADIUS_FACTOR)
    fine, at = _scan_sup(alpha, d, momentum_grid(P_max, 2 * points - 1), 2 * RADIUS_FACTOR)
    parameters["P_at_sup"] = at
    return BoundReport(
        name="crucialint",
        parameters=parameters,
        observed_sup=fine,
        sample_size=2 * points - 1,
        refinement=Helpers.relative_change(coarse, fine),
    )


class CrucialTable:
    """crucialint(alpha, d, Q) splined in log <Q>, extended by its power-law far field."""

    def __init__(
        self, alpha: float, d: int, *, Q_max: float = 1e4, points: int = DEFAULT_TABLE_POINTS
    ):
        self._decay = 2.0 - 2.0 * alpha
        u = np.linspace(0.0, math.log(float(bracket(Q_max))), points)
        q = np.sqrt(np.expm1(2 * u))
        values = np.array([crucialint(alpha, d, float(x)) for x in q])
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise NumericalError(
                "Cannot tabulate weighted integral.", context={"alpha": alpha, "d": d}
            )
        self._u_max = float(u[-1])
        self._log_max = float(np.log(values[-1]))
        self._spline = CubicSpline(u, np.log(values))

    @property
    def decay(self) -> float:
        return self._decay

    @property
    def amplitude(self) -> float:
        """A with crucialint(Q) ~ A <Q>^{-decay} beyond the table."""
        return float(np.exp(self._log_max + self._decay * self._u_max))

    def __call__(self, q: npt.ArrayLike) -> npt.NDArray[np.float64]:
        u = np.log(bracket(q))
        inside = self._spline(np.minimum(u, self._u_max))
        outside = self._log_max - self._decay * (u - self._u_max)
        return np.exp(np.where(u <= self._u_max, inside, outside))


def _nested(table: CrucialTable, d: int, P: float, radius: float) -> float:
    """int dy crucialint(P - y) <y>^{-2}."""
    if d == 1:

        def integrand(y: float) -> float:
            return float(table(P - y)) / (1.0 + y**2)

        return (
            _quad(integrand, -radius, radius, points=[0.0, P])
            + _quad(integrand, radius, math.inf)
            + _quad(integrand, -math.inf, -radius)
        )
    return _radial_integral(table, P, radius, table.decay, table.amplitude)


class CAlpha(NamedTuple):
    value: float
    error_bar: float
    P_at_sup: float
    verdict: Verdict


def c_alpha(
    alpha: float,
    d: int,
    *,
    P_max: float = DEFAULT_P_MAX,
    points: int = DEFAULT_P_POINTS,
    table_points: int = DEFAULT_TABLE_POINTS,
) -> CAlpha:
    """sup_P int int dy dz <P - y - z>^{-(2 - 2 alpha)} <y>^{-2} <z>^{-2}.

    The z integral is crucialint(alpha, d, P - y); the remaining y integral is evaluated on a
    tabulated crucialint. The error bar is the change under doubling the table density, the
    truncation radius and the momentum grid.
    When the inner integral diverges, its truncation ladder at P = 0 decides the verdict.
    """
    check_range(alpha, d)
    if not tail_converges(alpha, d):
        ladder = truncation_ladder(alpha, d)
        return CAlpha(
            value=ladder.values[-1] if ladder.verdict.is_bounded else math.inf,
            error_bar=abs(ladder.values[-1] - ladder.values[-2]),
            P_at_sup=0.0,
            verdict=ladder.verdict,
        )

    def sup(table: CrucialTable, grid: Sequence[float], factor: float) -> Tuple[float, float]:
        values = [_nested(table, d, P, factor * float(bracket(P))) for P in grid]
        best = int(np.argmax(values))
        return values[best], grid[best]

    coarse, _ = sup(
        CrucialTable(alpha, d, points=table_points), momentum_grid(P_max, points), RADIUS_FACTOR
    )
    fine, at = sup(
        CrucialTable(alpha, d, points=2 * table_points),
        momentum_grid(P_max, 2 * points - 1),
        2 * RADIUS_FACTOR,
    )
    return CAlpha(
        value=fine,
        error_bar=abs(fine - coarse),
        P_at_sup=at,
        verdict=Verdict.from_refinement(Helpers.relative_change(coarse, fine)),
    )
