import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from quintlab.boardgame.collapse_map import (
    CollapseMap,
    check_enumeration,
    enumerate_maps,
    is_echelon,
    iter_maps,
    map_count,
)
from quintlab.boardgame.moves import EchelonForm, to_echelon
from quintlab.constants import DEFAULT_ENUMERATION_CAP
from quintlab.exceptions import ValidationError
from quintlab.logging import DefaultLogger, Logger

DEFAULT_LOGGER: Logger = DefaultLogger("boardgame[shared]")

BATCH_SIZE = 4096


class DomainDescriptor:
    """A union of time simplices, one ordering chain per class member.

    The chain (c_1, ..., c_n) stands for t_r >= s_(c_1) >= ... >= s_(c_n) >= 0, where s_c is
    the time integrated by column c of the canonical map.
    """

    @property
    def r(self) -> int:
        return self._r

    @property
    def n(self) -> int:
        return self._n

    @property
    def chains(self) -> List[Tuple[int, ...]]:
        return list(self._chains)

    def __init__(self, *, r: int, n: int, chains: Sequence[Sequence[int]]):
        self._r = r
        self._n = n
        self._chains = [tuple(chain) for chain in chains]

    def __repr__(self) -> str:
        return f"DomainDescriptor(r={self._r}, n={self._n}, simplices={len(self._chains)})"

    def overlaps(self) -> bool:
        """Two simplices share interior points iff they come from the same ordering."""
        return len(set(self._chains)) != len(self._chains)

    def volume(self, t_r: float) -> float:
        return len(self._chains) * t_r**self._n / math.factorial(self._n)

    def contains(self, times: Sequence[float], t_r: float) -> bool:
        """`times` lists the column times s_1, ..., s_n of the canonical map."""
        if len(times) != self._n:
            raise ValidationError(f"Expected {self._n} times, got {len(times)}.")
        for chain in self._chains:
            ordered = [t_r] + [times[c - 1] for c in chain] + [0.0]
            if all(a >= b for a, b in zip(ordered, ordered[1:])):
                return True
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"r": self._r, "n": self._n, "chains": [list(c) for c in self._chains]}


def time_chain(sigma: Sequence[int]) -> Tuple[int, ...]:
    """Columns ordered by the time label they carry, the inverse of `sigma`.

    A member reaches the canonical map with column c holding t_(r+2 sigma[c-1]); its starting
    order t_(r+2) >= ... >= t_(r+2n) visits the columns in this order.
    """
    chain = [0] * len(sigma)
    for column, label in enumerate(sigma, start=1):
        chain[label - 1] = column
    return tuple(chain)


class EchelonClassReport:
    """The collapse maps that acceptable moves bring to one echelon form."""

    @property
    def canonical(self) -> CollapseMap:
        return self._canonical

    @property
    def members(self) -> List[Tuple[CollapseMap, Tuple[int, ...]]]:
        return list(self._members)

    @property
    def size(self) -> int:
        return len(self._members)

    @property
    def sigmas(self) -> List[Tuple[int, ...]]:
        return [sigma for _, sigma in self._members]

    @property
    def domain(self) -> DomainDescriptor:
        return DomainDescriptor(
            r=self._canonical.r,
            n=self._canonical.n,
            chains=[time_chain(sigma) for sigma in self.sigmas],
        )

    def __init__(
        self,
        *,
        canonical: CollapseMap,
        members: Sequence[Tuple[CollapseMap, Tuple[int, ...]]],
    ):
        self._canonical = canonical
        self._members = list(members)

    def __repr__(self) -> str:
        return f"EchelonClassReport(canonical={self._canonical!r}, size={self.size})"

    def sigmas_distinct(self) -> bool:
        return len(set(self.sigmas)) == len(self._members)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "canonical": list(self._canonical.picks),
            "members": [
                {"picks": list(m.picks), "sigma": list(sigma), "chain": list(time_chain(sigma))}
                for m, sigma in self._members
            ],
        }


def _canonicalize(batch: Sequence[CollapseMap], move_budget: Optional[int]) -> List[EchelonForm]:
    return [to_echelon(m, move_budget=move_budget) for m in batch]


def equivalence_classes(
    r: int,
    n: int,
    *,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    move_budget: Optional[int] = None,
    threads: int = 1,
    logger: Logger = DEFAULT_LOGGER,
) -> List[EchelonClassReport]:
    """Partitions every collapse map of (r, n) by its echelon form.

    Classes are ordered by canonical map and members by map; the result does not depend on
    `threads`.
    """
    maps = enumerate_maps(r, n, enumeration_cap=enumeration_cap)
    batches = [maps[i : i + BATCH_SIZE] for i in range(0, len(maps), BATCH_SIZE)]
    with logger.timed("canonicalize", r=r, n=n, maps=len(maps)):
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            forms = [
                form
                for batch_forms in pool.map(lambda b: _canonicalize(b, move_budget), batches)
                for form in batch_forms
            ]

    grouped: Dict[CollapseMap, List[Tuple[CollapseMap, Tuple[int, ...]]]] = {}
    for member, form in zip(maps, forms):
        grouped.setdefault(form.canonical, []).append((member, form.sigma))
    reports = [
        EchelonClassReport(canonical=canonical, members=grouped[canonical])
        for canonical in sorted(grouped)
    ]
    logger.debug("equivalence classes", r=r, n=n, classes=len(reports))
    return reports


def confluence_defects(
    collapse_map: CollapseMap,
    rng: np.random.Generator,
    *,
    orders: int = 10,
    move_budget: Optional[int] = None,
) -> List[EchelonForm]:
    """Random-order canonicalizations of `collapse_map` that disagree with the leftmost strategy."""
    reference = to_echelon(collapse_map, move_budget=move_budget)
    defects = []
    for _ in range(orders):
        form = to_echelon(collapse_map, move_budget=move_budget, rng=rng)
        if (form.canonical, form.sigma) != (reference.canonical, reference.sigma):
            defects.append(form)
    return defects


def count_echelon(r: int, n: int, *, enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    check_enumeration(r, n, enumeration_cap)
    return sum(1 for m in iter_maps(r, n) if is_echelon(m))


def echelon_bound(r: int, n: int) -> int:
    return 2 ** (r + 3 * n - 2)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """P_1 = 1 and P_n = 1 + P_1 + ... + P_(n-1)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}.")
    return 1 + sum(partition_count(m) for m in range(1, n))


def binomial_bound(r: int, n: int) -> int:
    """P_n * sum_{i=1..n} C(r+2n-2, i), an upper bound on the echelon count."""
    return partition_count(n) * sum(math.comb(r + 2 * n - 2, i) for i in range(1, n + 1))


def gamma_form(r: int, n: int) -> float:
    """2^n Gamma(r/2 + n) / Gamma(r/2), which equals the collapse map count."""
    return 2.0**n * math.exp(math.lgamma(r / 2 + n) - math.lgamma(r / 2))


class EchelonSummary(NamedTuple):
    r: int
    n: int
    maps: int
    classes: int
    echelon_count: int
    bound: int
    binomial_bound: int
    within_bound: bool


def echelon_summary(
    r: int, n: int, reports: Sequence[EchelonClassReport]
) -> EchelonSummary:
    count = sum(1 for report in reports for m, _ in report.members if is_echelon(m))
    bound = echelon_bound(r, n)
    return EchelonSummary(
        r=r,
        n=n,
        maps=map_count(r, n),
        classes=len(reports),
        echelon_count=count,
        bound=bound,
        binomial_bound=binomial_bound(r, n),
        within_bound=count <= bound,
    )
