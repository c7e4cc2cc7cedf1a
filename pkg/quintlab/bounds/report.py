from enum import Enum
from typing import Any, Dict, Optional, Sequence

import numpy as np

from quintlab.constants import STABILITY_THRESHOLD
from quintlab.helpers import Helpers


class Verdict(Enum):
    BOUNDED = "bounded"
    UNBOUNDED_TREND = "unbounded_trend"

    @property
    def is_bounded(self) -> bool:
        return self is Verdict.BOUNDED

    @classmethod
    def from_refinement(cls, refinement: float) -> "Verdict":
        return cls.BOUNDED if refinement < STABILITY_THRESHOLD else cls.UNBOUNDED_TREND


class BoundReport:
    """Worst observed LHS/RHS ratio of one inequality over a sample.

    :param name: Identifier of the inequality.
    :param parameters: The parameter set the ratio was measured at.
    :param observed_sup: Largest observed ratio.
    :param sample_size: Number of samples (or grid points) behind `observed_sup`.
    :param refinement: Relative change of `observed_sup` under doubling.
    :param verdict: Explicit verdict; derived from `refinement` when omitted.
    """

    @property
    def name(self) -> str:
        return self._name

    @property
    def parameters(self) -> Dict[str, Any]:
        return dict(self._parameters)

    @property
    def observed_sup(self) -> float:
        return self._observed_sup

    @property
    def sample_size(self) -> int:
        return self._sample_size

    @property
    def refinement(self) -> float:
        return self._refinement

    @property
    def verdict(self) -> Verdict:
        return self._verdict

    def __init__(
        self,
        *,
        name: str,
        parameters: Dict[str, Any],
        observed_sup: float,
        sample_size: int,
        refinement: float,
        verdict: Optional[Verdict] = None,
    ):
        self._name = name
        self._parameters = dict(parameters)
        self._observed_sup = float(observed_sup)
        self._sample_size = int(sample_size)
        self._refinement = float(refinement)
        self._verdict = verdict if verdict is not None else Verdict.from_refinement(refinement)

    def __repr__(self) -> str:
        return (
            f"BoundReport(name={self._name}, sup={self._observed_sup:.6g}, "
            f"verdict={self._verdict.value})"
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self._name,
            "parameters": self._parameters,
            "observed_sup": self._observed_sup,
            "sample_size": self._sample_size,
            "refinement": self._refinement,
            "verdict": self._verdict.value,
        }

    @classmethod
    def from_samples(
        cls, *, name: str, parameters: Dict[str, Any], ratios: Sequence[Optional[float]]
    ) -> "BoundReport":
        """Sup over the finite ratios; refinement compares the first half with the whole."""
        finite = [r for r in ratios if r is not None and np.isfinite(r)]
        if not finite:
            return cls(
                name=name,
                parameters=parameters,
                observed_sup=0.0,
                sample_size=0,
                refinement=0.0,
            )
        half = max(finite[: max(1, len(finite) // 2)])
        full = max(finite)
        return cls(
            name=name,
            parameters=parameters,
            observed_sup=full,
            sample_size=len(finite),
            refinement=Helpers.relative_change(half, full),
        )
