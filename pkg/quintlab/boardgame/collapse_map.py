"""Collapse maps of the iterated Duhamel expansion.

Column c (1-based) of the board contracts the two newest particles r+2c-1, r+2c onto particle
picks[c-1], which must be one of the rows 1..r+2c-2 already present at that column.
"""

import itertools
import math
from typing import Any, Dict, Iterator, List, Sequence, Tuple

from quintlab.constants import DEFAULT_ENUMERATION_CAP
from quintlab.exceptions import ResourceCapError, ValidationError


def map_count(r: int, n: int) -> int:
    """prod_{j=1..n} (r + 2j - 2)."""
    return math.prod(r + 2 * j - 2 for j in range(1, n + 1))


class CollapseMap:
    @property
    def r(self) -> int:
        return self._r

    @property
    def n(self) -> int:
        return self._n

    @property
    def picks(self) -> Tuple[int, ...]:
        return self._picks

    def __init__(self, *, r: int, n: int, picks: Sequence[int]):
        violations = []
        if r < 1:
            violations.append(f"r must be >= 1, got {r}")
        if n < 1:
            violations.append(f"n must be >= 1, got {n}")
        if len(picks) != n:
            violations.append(f"expected {n} picks, got {len(picks)}")
        for column, pick in enumerate(picks, start=1):
            if not 1 <= pick <= r + 2 * column - 2:
                violations.append(
                    f"pick {pick} of column {column} outside rows 1..{r + 2 * column - 2}"
                )
        if violations:
            raise ValidationError("Cannot build collapse map.", violations=violations)

        self._r = r
        self._n = n
        self._picks = tuple(int(p) for p in picks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CollapseMap):
            return NotImplemented
        return (self._r, self._n, self._picks) == (other.r, other.n, other.picks)

    def __hash__(self) -> int:
        return hash((self._r, self._n, self._picks))

    def __lt__(self, other: "CollapseMap") -> bool:
        return (self._r, self._n, self._picks) < (other.r, other.n, other.picks)

    def __repr__(self) -> str:
        return f"CollapseMap(r={self._r}, n={self._n}, picks={list(self._picks)})"

    def pick(self, column: int) -> int:
        """The row contracted by `column` (1-based)."""
        return self._picks[column - 1]

    def with_picks(self, picks: Sequence[int]) -> "CollapseMap":
        return CollapseMap(r=self._r, n=self._n, picks=picks)

    def to_dict(self) -> Dict[str, Any]:
        return {"r": self._r, "n": self._n, "picks": list(self._picks)}


def is_echelon(collapse_map: CollapseMap) -> bool:
    """No later column picks a row strictly above an earlier column's row."""
    picks = collapse_map.picks
    return all(a <= b for a, b in zip(picks, picks[1:]))


def check_enumeration(r: int, n: int, enumeration_cap: int) -> int:
    count = map_count(r, n)
    if count > enumeration_cap:
        raise ResourceCapError(
            f"Cannot enumerate collapse maps for r={r}, n={n}.",
            required=count,
            allowed=enumeration_cap,
            code="enumeration_cap_exceeded",
            details="HINT: lower n or raise the enumeration cap.",
        )
    return count


def iter_maps(r: int, n: int) -> Iterator[CollapseMap]:
    ranges = [range(1, r + 2 * j - 1) for j in range(1, n + 1)]
    for picks in itertools.product(*ranges):
        yield CollapseMap(r=r, n=n, picks=picks)


def enumerate_maps(
    r: int, n: int, *, enumeration_cap: int = DEFAULT_ENUMERATION_CAP
) -> List[CollapseMap]:
    """Every collapse map for (r, n), in lexicographic order of picks."""
    if r < 1 or n < 1:
        raise ValidationError(f"Cannot enumerate collapse maps for r={r}, n={n}.")
    check_enumeration(r, n, enumeration_cap)
    return list(iter_maps(r, n))
