from typing import NamedTuple, Optional, Sequence

from quintlab.boardgame.collapse_map import CollapseMap, enumerate_maps
from quintlab.boardgame.moves import BoardState, enabled_moves, moved_picks
from quintlab.hierarchy import SeparableKernel, integrand_distance
from quintlab.logging import DefaultLogger, Logger

DEFAULT_LOGGER: Logger = DefaultLogger("boardgame[shared]")


class IntegrandCheck(NamedTuple):
    moves: int
    max_distance: float


def move_integrand_check(
    r: int,
    n: int,
    gamma0: SeparableKernel,
    times: Sequence[float],
    *,
    maps: Optional[Sequence[CollapseMap]] = None,
    logger: Logger = DEFAULT_LOGGER,
) -> IntegrandCheck:
    """Checks that every acceptable move preserves the Duhamel integrand.

    For each map and each enabled move j, J(times; picks)[gamma0] is compared with
    J(times with entries j, j+1 exchanged; moved picks)[gamma0 with slot pairs swapped].
    Returns the number of moves checked and the largest relative distance.
    """
    maps = enumerate_maps(r, n) if maps is None else maps
    checked = 0
    worst = 0.0
    with logger.timed("integrand check", r=r, n=n, maps=len(maps)):
        for collapse_map in maps:
            for j in enabled_moves(BoardState(map=collapse_map)):
                distance = integrand_distance(
                    gamma0, collapse_map.picks, moved_picks(collapse_map, j), times, r, j
                )
                worst = max(worst, distance)
                checked += 1
    logger.debug("integrand check", moves=checked, max_distance=worst)
    return IntegrandCheck(moves=checked, max_distance=worst)
