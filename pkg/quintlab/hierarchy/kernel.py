"""Low-rank separable kernels

    gamma(x_1..x_k; x'_1..x'_k) = sum_m c_m prod_i f_{m,i}(x_i) conj(g_{m,i}(x'_i))

and the operator algebra of the GP hierarchy acting on them. Slots are 1-based in the public
API. Delta contractions act on densities, so contracted factors are multiplied pointwise with
no quadrature weights.
"""

from typing import Any, ClassVar, List, Optional, Sequence, Set, Tuple

import numpy as np
import numpy.typing as npt

from quintlab.constants import DEFAULT_RANK_CAP, DENSE_ENTRY_CAP, PAIRING_TOLERANCE
from quintlab.exceptions import ResourceCapError, ValidationError
from quintlab.grid import GridSpec, SpectralMultiplier, transform_forward, transform_inverse
from quintlab.grid.grid_spec import ComplexArray
from quintlab.nls import WaveFunction


class SeparableKernel:
    """An immutable rank-R separable kernel of order k on `grid`.

    :param grid: The grid shared by every factor.
    :param coefficients: Complex coefficients, shape (R,).
    :param f: Unprimed factors, shape (R, k, *grid.shape).
    :param g: Primed factors, shape (R, k, *grid.shape).
    :param rank_cap: Largest rank any kernel derived from this one may reach.
    """

    DEFAULT_RANK_CAP: ClassVar[int] = DEFAULT_RANK_CAP

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def coefficients(self) -> ComplexArray:
        return self._coefficients

    @property
    def f(self) -> ComplexArray:
        return self._f

    @property
    def g(self) -> ComplexArray:
        return self._g

    @property
    def order(self) -> int:
        return int(self._f.shape[1])

    @property
    def rank(self) -> int:
        return int(self._coefficients.shape[0])

    @property
    def rank_cap(self) -> int:
        return self._rank_cap

    def __init__(
        self,
        *,
        grid: GridSpec,
        coefficients: npt.NDArray[Any],
        f: npt.NDArray[Any],
        g: npt.NDArray[Any],
        rank_cap: int = DEFAULT_RANK_CAP,
    ):
        coefficients = np.array(coefficients, dtype=np.complex128).reshape(-1)
        f = np.array(f, dtype=np.complex128)
        g = np.array(g, dtype=np.complex128)
        rank = coefficients.shape[0]
        if f.ndim != 2 + grid.d or f.shape != g.shape or f.shape[0] != rank:
            raise ValidationError(
                f"Factor shapes {f.shape} / {g.shape} do not match rank {rank} on {grid!r}.",
                code="dimension_mismatch",
            )
        grid.check_field(f, batched=True)
        if f.shape[1] < 1:
            raise ValidationError("Kernel order must be >= 1.")
        if rank > rank_cap:
            raise ResourceCapError(
                "Cannot build separable kernel.",
                required=rank,
                allowed=rank_cap,
                code="rank_cap_exceeded",
                details="HINT: raise the rank cap or use fewer quadrature nodes.",
            )
        for array in (coefficients, f, g):
            array.setflags(write=False)

        self._grid = grid
        self._coefficients = coefficients
        self._f = f
        self._g = g
        self._rank_cap = rank_cap

    def __repr__(self) -> str:
        return f"SeparableKernel(order={self.order}, rank={self.rank}, grid={self._grid!r})"

    def _derived(
        self, coefficients: npt.NDArray[Any], f: npt.NDArray[Any], g: npt.NDArray[Any]
    ) -> "SeparableKernel":
        return SeparableKernel(
            grid=self._grid, coefficients=coefficients, f=f, g=g, rank_cap=self._rank_cap
        )

    def with_rank_cap(self, rank_cap: int) -> "SeparableKernel":
        return SeparableKernel(
            grid=self._grid,
            coefficients=self._coefficients,
            f=self._f,
            g=self._g,
            rank_cap=rank_cap,
        )

    @classmethod
    def zero(cls, grid: GridSpec, k: int, *, rank_cap: int = DEFAULT_RANK_CAP) -> "SeparableKernel":
        empty = np.zeros((0, k) + grid.shape, dtype=np.complex128)
        return cls(grid=grid, coefficients=np.zeros(0), f=empty, g=empty, rank_cap=rank_cap)

    @classmethod
    def concatenate(cls, kernels: Sequence["SeparableKernel"]) -> "SeparableKernel":
        """The sum of `kernels` as one term list, built in a single pass."""
        if not kernels:
            raise ValidationError("Cannot sum an empty list of kernels.")
        first = kernels[0]
        for other in kernels[1:]:
            first._check_compatible(other)
        return first._derived(
            np.concatenate([k.coefficients for k in kernels]),
            np.concatenate([k.f for k in kernels]),
            np.concatenate([k.g for k in kernels]),
        )

    def _check_compatible(self, other: "SeparableKernel") -> None:
        if other.grid != self._grid or other.order != self.order:
            raise ValidationError(
                f"Cannot combine {self!r} with {other!r}.",
                code="kernel_mismatch",
                details="HINT: kernels must share order and grid.",
            )

    def __add__(self, other: "SeparableKernel") -> "SeparableKernel":
        self._check_compatible(other)
        return self._derived(
            np.concatenate([self._coefficients, other.coefficients]),
            np.concatenate([self._f, other.f]),
            np.concatenate([self._g, other.g]),
        )

    def __neg__(self) -> "SeparableKernel":
        return self.scaled(-1.0)

    def __sub__(self, other: "SeparableKernel") -> "SeparableKernel":
        return self + (-other)

    def scaled(self, factor: complex) -> "SeparableKernel":
        return self._derived(factor * self._coefficients, self._f, self._g)

    def adjoint(self) -> "SeparableKernel":
        """The kernel of the hermitian adjoint, conj(gamma(x'; x))."""
        return self._derived(self._coefficients.conj(), self._g, self._f)

    def permute_slots(self, permutation: Sequence[int]) -> "SeparableKernel":
        """Slot i of the result is slot permutation[i-1] of this kernel (1-based labels)."""
        if sorted(permutation) != list(range(1, self.order + 1)):
            raise ValidationError(
                f"{list(permutation)} is not a permutation of the slots 1..{self.order}."
            )
        index = [p - 1 for p in permutation]
        return self._derived(self._coefficients, self._f[:, index], self._g[:, index])

    def trace(self) -> complex:
        """int gamma(x; x) dx."""
        overlaps = self._grid.cell_volume * np.sum(
            self._f * self._g.conj(), axis=tuple(range(2, self._f.ndim))
        )
        return complex(np.sum(self._coefficients * np.prod(overlaps, axis=1)))

    def is_hermitian(self, tolerance: float = 1e-10) -> bool:
        scale = max(1.0, kernel_norm(self, 0.0))
        return kernel_norm(self - self.adjoint(), 0.0) <= tolerance * scale

    def evaluate(
        self, x_index: Sequence[Tuple[int, ...]], x_prime_index: Sequence[Tuple[int, ...]]
    ) -> complex:
        """gamma at one point of the product grid, given one grid index tuple per slot."""
        if len(x_index) != self.order or len(x_prime_index) != self.order:
            raise ValidationError(f"Expected {self.order} grid indices per side.")
        terms = np.array(self._coefficients)
        for i, (x, x_prime) in enumerate(zip(x_index, x_prime_index)):
            terms = terms * self._f[(slice(None), i) + tuple(x)]
            terms = terms * self._g[(slice(None), i) + tuple(x_prime)].conj()
        return complex(np.sum(terms))

    def to_dense(self) -> ComplexArray:
        """The kernel on the product grid, axes (x_1..x_k, x'_1..x'_k)."""
        entries = self._grid.size ** (2 * self.order)
        if entries > DENSE_ENTRY_CAP:
            raise ResourceCapError(
                "Cannot materialize dense kernel.", required=entries, allowed=DENSE_ENTRY_CAP
            )
        dense = np.zeros(self._grid.shape * (2 * self.order), dtype=np.complex128)
        for c, f_m, g_m in zip(self._coefficients, self._f, self._g):
            term = np.asarray(c)
            for factor in f_m:
                term = np.multiply.outer(term, factor)
            for factor in g_m:
                term = np.multiply.outer(term, factor.conj())
            dense += term
        return dense


def factorized(phi: WaveFunction, k: int) -> SeparableKernel:
    """The rank one kernel |phi><phi|^{(x)k}."""
    if k < 1:
        raise ValidationError(f"Order must be >= 1, got {k}.")
    factors = np.broadcast_to(phi.values, (1, k) + phi.grid.shape)
    return SeparableKernel(grid=phi.grid, coefficients=np.ones(1), f=factors, g=factors)


def _slot_index(gamma: SeparableKernel, slots: Optional[Sequence[int]]) -> Sequence[int]:
    if slots is None:
        return list(range(gamma.order))
    if any(not 1 <= s <= gamma.order for s in slots):
        raise ValidationError(f"Slots {list(slots)} out of range 1..{gamma.order}.")
    return [s - 1 for s in slots]


def free_propagate(
    gamma: SeparableKernel, t: float, slots: Optional[Sequence[int]] = None
) -> SeparableKernel:
    """U(t) gamma = exp(i t Laplacian_x) gamma exp(-i t Laplacian_x'), on `slots` only if given."""
    if t == 0 or gamma.rank == 0:
        return gamma
    index = _slot_index(gamma, slots)
    grid = gamma.grid
    flow = SpectralMultiplier.free_flow(grid, t).values

    def propagate(factors: ComplexArray) -> ComplexArray:
        selected = factors[:, index]
        spectra = flow * transform_forward(selected, grid, batched=True)
        evolved = transform_inverse(spectra, grid, batched=True)
        result = np.array(factors)
        result[:, index] = evolved
        return result

    return gamma._derived(gamma.coefficients, propagate(gamma.f), propagate(gamma.g))


def _contraction_slots(
    gamma: SeparableKernel, j: int, slots: Optional[Tuple[int, int]]
) -> Tuple[int, int]:
    if gamma.order < 3:
        raise ValidationError(f"Contractions need order >= 3, got {gamma.order}.")
    a, b = slots if slots is not None else (gamma.order - 1, gamma.order)
    violations = []
    if not (1 <= a < b <= gamma.order):
        violations.append(f"contracted slots ({a}, {b}) must satisfy 1 <= a < b <= {gamma.order}")
    if not 1 <= j <= gamma.order or j in (a, b):
        violations.append(f"j={j} must be a slot in 1..{gamma.order} other than {a} and {b}")
    if violations:
        raise ValidationError("Cannot contract kernel.", violations=violations)
    return a, b


def _remove_slots(factors: ComplexArray, a: int, b: int) -> ComplexArray:
    keep = [i for i in range(factors.shape[1]) if i not in (a - 1, b - 1)]
    return factors[:, keep]


def contract_plus(
    gamma: SeparableKernel, j: int, slots: Optional[Tuple[int, int]] = None
) -> SeparableKernel:
    """B+_{j;a,b}: pins x_a, x'_a, x_b, x'_b to x_j. Defaults to the last two slots."""
    a, b = _contraction_slots(gamma, j, slots)
    f, g = gamma.f, gamma.g
    f_j = f[:, j - 1] * f[:, a - 1] * g[:, a - 1].conj() * f[:, b - 1] * g[:, b - 1].conj()
    new_f = np.array(f)
    new_f[:, j - 1] = f_j
    return gamma._derived(gamma.coefficients, _remove_slots(new_f, a, b), _remove_slots(g, a, b))


def contract_minus(
    gamma: SeparableKernel, j: int, slots: Optional[Tuple[int, int]] = None
) -> SeparableKernel:
    """B-_{j;a,b}: pins x_a, x'_a, x_b, x'_b to x'_j. Defaults to the last two slots."""
    a, b = _contraction_slots(gamma, j, slots)
    f, g = gamma.f, gamma.g
    g_j = g[:, j - 1] * g[:, a - 1] * f[:, a - 1].conj() * g[:, b - 1] * f[:, b - 1].conj()
    new_g = np.array(g)
    new_g[:, j - 1] = g_j
    return gamma._derived(gamma.coefficients, _remove_slots(f, a, b), _remove_slots(new_g, a, b))


def contract(
    gamma: SeparableKernel,
    j: int,
    slots: Optional[Tuple[int, int]] = None,
    *,
    plus_only: bool = False,
) -> SeparableKernel:
    """B_{j;a,b} = B+ - B-; with `plus_only` the minus part is dropped."""
    plus = contract_plus(gamma, j, slots)
    if plus_only:
        return plus
    return plus - contract_minus(gamma, j, slots)


def _weighted_spectra(factors: ComplexArray, grid: GridSpec, alpha: float) -> ComplexArray:
    spectra = transform_forward(factors, grid, batched=True)
    if alpha != 0:
        spectra = spectra * (1.0 + grid.k_squared) ** (alpha / 2)
    return spectra.reshape(factors.shape[0], factors.shape[1], -1)


def kernel_inner(gamma1: SeparableKernel, gamma2: SeparableKernel, alpha: float = 0.0) -> complex:
    """<S gamma1, S gamma2> with S the Sobolev weight (1-Laplacian)^(alpha/2) in every variable.

    Evaluated through per-slot Gram matrices, O(R1 R2 k) inner products.
    """
    if gamma1.grid != gamma2.grid or gamma1.order != gamma2.order:
        raise ValidationError(
            f"Cannot take the inner product of {gamma1!r} and {gamma2!r}.", code="kernel_mismatch"
        )
    if gamma1.rank == 0 or gamma2.rank == 0:
        return 0j
    grid = gamma1.grid
    f1 = _weighted_spectra(gamma1.f, grid, alpha)
    f2 = _weighted_spectra(gamma2.f, grid, alpha)
    g1 = _weighted_spectra(gamma1.g, grid, alpha)
    g2 = _weighted_spectra(gamma2.g, grid, alpha)
    gram = np.ones((gamma1.rank, gamma2.rank), dtype=np.complex128)
    for i in range(gamma1.order):
        gram_f = grid.cell_volume * (f1[:, i].conj() @ f2[:, i].T)
        gram_g = grid.cell_volume * (g1[:, i] @ g2[:, i].conj().T)
        gram = gram * gram_f * gram_g
    return complex(gamma1.coefficients.conj() @ gram @ gamma2.coefficients)


def _cancelling_pairs(gamma: SeparableKernel) -> List[Tuple[int, int]]:
    """Pairs (m, n) of terms with c_n ~ -c_m and factors equal up to PAIRING_TOLERANCE."""
    c = gamma.coefficients
    scale = np.maximum(np.abs(c)[:, None], np.abs(c)[None, :])
    candidates = np.abs(c[:, None] + c[None, :]) <= PAIRING_TOLERANCE * scale
    np.fill_diagonal(candidates, False)
    if not candidates.any():
        return []
    grid = gamma.grid
    for factors in (gamma.f, gamma.g):
        flat = factors.reshape(gamma.rank, gamma.order, -1)
        for i in range(gamma.order):
            gram = grid.cell_volume * (flat[:, i].conj() @ flat[:, i].T)
            sizes = np.real(np.diag(gram))
            distance = sizes[:, None] + sizes[None, :] - 2 * gram.real
            limit = PAIRING_TOLERANCE**2 * np.maximum(sizes[:, None], sizes[None, :])
            candidates &= distance <= limit
    pairs: List[Tuple[int, int]] = []
    used: Set[int] = set()
    for m, n in zip(*np.nonzero(candidates)):
        if m < n and m not in used and n not in used:
            pairs.append((int(m), int(n)))
            used.update((int(m), int(n)))
    return pairs


def _telescoped(gamma: SeparableKernel) -> SeparableKernel:
    """The same kernel with every cancelling pair rewritten as a sum of small terms.

    For terms c T and c' T' with c' = -c - dc,

        c T + c' T' = c (T - T') - dc T',

    and T - T' telescopes into 2k rank one terms, each holding a single factor difference.
    """
    pairs = _cancelling_pairs(gamma)
    if not pairs:
        return gamma
    paired = {m for pair in pairs for m in pair}
    keep = [m for m in range(gamma.rank) if m not in paired]
    c, f, g = gamma.coefficients, gamma.f, gamma.g
    coefficients = [c[keep]]
    fs, gs = [f[keep]], [g[keep]]
    for m, n in pairs:
        for i in range(gamma.order):
            f_term = np.concatenate([f[n, :i], (f[m, i] - f[n, i])[None], f[m, i + 1 :]])
            fs.append(f_term[None])
            gs.append(g[m][None])
        for i in range(gamma.order):
            g_term = np.concatenate([g[n, :i], (g[m, i] - g[n, i])[None], g[m, i + 1 :]])
            fs.append(f[n][None])
            gs.append(g_term[None])
        coefficients.append(np.full(2 * gamma.order, c[m]))
        fs.append(f[n][None])
        gs.append(g[n][None])
        coefficients.append(np.array([c[m] + c[n]]))
    merged = np.concatenate(coefficients)
    return SeparableKernel(
        grid=gamma.grid,
        coefficients=merged,
        f=np.concatenate(fs),
        g=np.concatenate(gs),
        rank_cap=max(gamma.rank_cap, merged.shape[0]),
    )


def kernel_norm(gamma: SeparableKernel, alpha: float = 0.0) -> float:
    """sqrt(kernel_inner(gamma, gamma, alpha)), with cancelling term pairs telescoped first so
    that differences of nearly equal kernels keep their relative accuracy."""
    gamma = _telescoped(gamma)
    return float(np.sqrt(max(kernel_inner(gamma, gamma, alpha).real, 0.0)))
