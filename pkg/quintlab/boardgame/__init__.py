from quintlab.boardgame.classes import (
    DomainDescriptor,
    EchelonClassReport,
    EchelonSummary,
    binomial_bound,
    confluence_defects,
    count_echelon,
    echelon_bound,
    echelon_summary,
    equivalence_classes,
    gamma_form,
    partition_count,
    time_chain,
)
from quintlab.boardgame.collapse_map import CollapseMap, enumerate_maps, is_echelon, map_count
from quintlab.boardgame.integrand import IntegrandCheck, move_integrand_check
from quintlab.boardgame.moves import (
    BoardState,
    EchelonForm,
    acceptable_move,
    default_move_budget,
    enabled_moves,
    moved_picks,
    to_echelon,
)

__all__ = [
    "CollapseMap",
    "enumerate_maps",
    "is_echelon",
    "map_count",
    "BoardState",
    "EchelonForm",
    "acceptable_move",
    "enabled_moves",
    "moved_picks",
    "default_move_budget",
    "to_echelon",
    "DomainDescriptor",
    "EchelonClassReport",
    "EchelonSummary",
    "equivalence_classes",
    "time_chain",
    "echelon_summary",
    "confluence_defects",
    "count_echelon",
    "echelon_bound",
    "partition_count",
    "binomial_bound",
    "gamma_form",
    "IntegrandCheck",
    "move_integrand_check",
]
