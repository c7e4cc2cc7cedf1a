from typing import Any, ClassVar, Dict, Sequence

from quintlab.boardgame import (
    confluence_defects,
    echelon_summary,
    equivalence_classes,
    gamma_form,
    map_count,
    partition_count,
)
from quintlab.experiments.base_experiment import BaseExperiment

CLASS_COLUMNS = (
    "canonical_id",
    "class_size",
    "sigma_list",
    "echelon_count",
    "bound",
    "within_bound",
)

# full class dumps and randomized confluence runs are limited to this many maps
DETAIL_LIMIT = 10**4


def map_id(picks: Sequence[int]) -> str:
    return "-".join(str(p) for p in picks)


class BoardGameExperiment(BaseExperiment):
    """Partitions the collapse maps of (r, n) into echelon classes and checks the count bound.

    Artifacts: ``classes.csv`` with one row per class; for small (r, n) also ``classes.json``
    with the full class structure and a randomized confluence check in the summary.
    """

    NAME: ClassVar[str] = "boardgame"
    DESCRIPTION: ClassVar[str] = "collapse-map echelon classes and the echelon count bound"

    def execute(self) -> Dict[str, Any]:
        config = self.config
        r, n = config.r, config.n
        reports = equivalence_classes(
            r,
            n,
            enumeration_cap=config.enumeration_cap,
            move_budget=config.move_budget,
            threads=config.threads,
            logger=self.logger,
        )
        summary = echelon_summary(r, n, reports)
        self.write_table(
            "classes.csv",
            CLASS_COLUMNS,
            [
                (
                    map_id(report.canonical.picks),
                    report.size,
                    ";".join(map_id(sigma) for sigma in report.sigmas),
                    summary.echelon_count,
                    summary.bound,
                    summary.within_bound,
                )
                for report in reports
            ],
        )

        members = sum(report.size for report in reports)
        result: Dict[str, Any] = {
            **summary._asdict(),
            "partitions_map_set": members == map_count(r, n),
            "sigmas_distinct": all(report.sigmas_distinct() for report in reports),
            "partition_count": partition_count(n),
            "gamma_form": gamma_form(r, n),
        }
        if members <= DETAIL_LIMIT:
            self.write_json("classes.json", [report.to_dict() for report in reports])
            defects = sum(
                len(confluence_defects(m, self.rng, move_budget=config.move_budget))
                for report in reports
                for m, _ in report.members
            )
            result["confluence_defects"] = defects
        self.logger.info(
            "boardgame finished", r=r, n=n, classes=summary.classes, within=summary.within_bound
        )
        return result
