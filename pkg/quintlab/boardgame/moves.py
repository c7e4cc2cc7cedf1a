from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from quintlab.boardgame.collapse_map import CollapseMap, is_echelon
from quintlab.exceptions import CanonicalizationError, ValidationError


class BoardState:
    """A collapse map together with the time label of each column.

    `sigma[c-1]` = m means column c integrates the time t_(r+2m); the identity assignment
    (1, 2, ..., n) is the starting board.
    """

    @property
    def map(self) -> CollapseMap:
        return self._map

    @property
    def sigma(self) -> Tuple[int, ...]:
        return self._sigma

    def __init__(self, *, map: CollapseMap, sigma: Optional[Sequence[int]] = None):
        if sigma is None:
            sigma = range(1, map.n + 1)
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(1, map.n + 1)):
            raise ValidationError(f"{list(sigma)} is not a permutation of 1..{map.n}.")
        self._map = map
        self._sigma = sigma

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoardState):
            return NotImplemented
        return self._map == other.map and self._sigma == other.sigma

    def __hash__(self) -> int:
        return hash((self._map, self._sigma))

    def __repr__(self) -> str:
        return f"BoardState(picks={list(self._map.picks)}, sigma={list(self._sigma)})"

    def to_dict(self) -> Dict[str, Any]:
        return {**self._map.to_dict(), "sigma": list(self._sigma)}


def is_enabled(state: BoardState, j: int) -> bool:
    m = state.map
    return 1 <= j < m.n and m.pick(j + 1) < m.pick(j)


def enabled_moves(state: BoardState) -> List[int]:
    return [j for j in range(1, state.map.n) if is_enabled(state, j)]


def moved_picks(collapse_map: CollapseMap, j: int) -> List[int]:
    """Picks after exchanging columns j, j+1 and relabeling the rows they introduce."""
    r = collapse_map.r
    picks = list(collapse_map.picks)
    picks[j - 1], picks[j] = picks[j], picks[j - 1]
    relabel = {
        r + 2 * j - 1: r + 2 * j + 1,
        r + 2 * j + 1: r + 2 * j - 1,
        r + 2 * j: r + 2 * j + 2,
        r + 2 * j + 2: r + 2 * j,
    }
    for column in range(j + 2, collapse_map.n + 1):
        picks[column - 1] = relabel.get(picks[column - 1], picks[column - 1])
    return picks


def acceptable_move(state: BoardState, j: int) -> BoardState:
    """Applies the acceptable move at column boundary (j, j+1).

    Raises ValidationError unless column j+1 picks a row strictly above column j.
    """
    if not is_enabled(state, j):
        raise ValidationError(
            f"Cannot apply move at j={j} to {state!r}.",
            code="move_not_enabled",
            details="HINT: a move needs 1 <= j < n and picks[j+1] < picks[j].",
        )
    sigma = list(state.sigma)
    sigma[j - 1], sigma[j] = sigma[j], sigma[j - 1]
    return BoardState(map=state.map.with_picks(moved_picks(state.map, j)), sigma=sigma)


def default_move_budget(r: int, n: int) -> int:
    return n * n * (r + 2 * n)


class EchelonForm(NamedTuple):
    canonical: CollapseMap
    sigma: Tuple[int, ...]
    moves: int


def to_echelon(
    collapse_map: CollapseMap,
    *,
    move_budget: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> EchelonForm:
    """Brings `collapse_map` into upper echelon form by acceptable moves.

    Without `rng` the leftmost enabled move is applied each time; with `rng` a uniformly random
    enabled move is.
    """
    budget = move_budget
    if budget is None:
        budget = default_move_budget(collapse_map.r, collapse_map.n)
    state = BoardState(map=collapse_map)
    moves = 0
    while True:
        enabled = enabled_moves(state)
        if not enabled:
            break
        if moves >= budget:
            raise CanonicalizationError(
                f"Move budget {budget} exhausted before reaching echelon form.",
                context={"start": collapse_map.to_dict(), "reached": state.to_dict()},
            )
        j = enabled[0] if rng is None else enabled[int(rng.integers(len(enabled)))]
        state = acceptable_move(state, j)
        moves += 1
    assert is_echelon(state.map)
    return EchelonForm(canonical=state.map, sigma=state.sigma, moves=moves)
