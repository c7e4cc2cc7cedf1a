import json
import math
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Union

from quintlab.constants import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_MEMORY_CAP,
    DEFAULT_RANK_CAP,
    EXPERIMENT_ANCHORS,
)
from quintlab.exceptions import ValidationError
from quintlab.helpers import Helpers
from quintlab.hierarchy import QuadratureRule
from quintlab.logging.default_logger import DefaultLogger
from quintlab.logging.logger import Logger, LoggingLevel
from quintlab.nbody import BasePotential, ConstantPotential, GaussianPotential, ZeroPotential
from quintlab.nls import NlsModel, NlsParams

POTENTIALS = ("gaussian", "constant", "zero")

SEED_LIMIT = 2**64


class Configuration:
    """Settings of one experiment run.

    Every setting has a default, so ``Configuration()`` is a valid (if small) run. Settings an
    experiment does not use are ignored by it but still enter :attr:`config_hash`.
    """

    KEYS: ClassVar[Tuple[str, ...]] = (
        "d",
        "M",
        "L",
        "beta",
        "potential",
        "potential_width",
        "b0_override",
        "lambda2",
        "lambda3",
        "model",
        "coupling_scale",
        "dt",
        "T",
        "record_every",
        "nodes",
        "quadrature",
        "samples",
        "alpha",
        "kappa",
        "p",
        "k",
        "r",
        "n",
        "N_list",
        "memory_cap",
        "enumeration_cap",
        "move_budget",
        "rank_cap",
        "seed",
        "threads",
        "logging_level",
    )

    @property
    def d(self) -> int:
        return self._d

    @property
    def M(self) -> int:
        return self._M

    @property
    def L(self) -> float:
        return self._L

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def potential(self) -> str:
        return self._potential

    @property
    def potential_width(self) -> float:
        return self._potential_width

    @property
    def b0_override(self) -> Optional[float]:
        return self._b0_override

    @property
    def lambda2(self) -> float:
        return self._lambda2

    @property
    def lambda3(self) -> float:
        return self._lambda3

    @property
    def model(self) -> NlsModel:
        return self._model

    @property
    def coupling_scale(self) -> float:
        return self._coupling_scale

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def T(self) -> float:
        return self._T

    @property
    def record_every(self) -> int:
        return self._record_every

    @property
    def nodes(self) -> int:
        return self._nodes

    @property
    def quadrature(self) -> QuadratureRule:
        return self._quadrature

    @property
    def samples(self) -> int:
        return self._samples

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def kappa(self) -> float:
        return self._kappa

    @property
    def p(self) -> float:
        return self._p

    @property
    def k(self) -> int:
        return self._k

    @property
    def r(self) -> int:
        return self._r

    @property
    def n(self) -> int:
        return self._n

    @property
    def N_list(self) -> List[int]:
        return list(self._N_list)

    @property
    def memory_cap(self) -> int:
        return self._memory_cap

    @property
    def enumeration_cap(self) -> int:
        return self._enumeration_cap

    @property
    def move_budget(self) -> Optional[int]:
        return self._move_budget

    @property
    def rank_cap(self) -> int:
        return self._rank_cap

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def threads(self) -> int:
        return self._threads

    @property
    def logging_level(self) -> LoggingLevel:
        return self._logging_level

    @property
    def logger(self) -> Logger:
        return self._logger

    def __init__(
        self,
        *,
        d: int = 1,
        M: int = 64,
        L: float = 2 * math.pi,
        beta: float = 0.1,
        potential: str = "gaussian",
        potential_width: float = 0.5,
        b0_override: Optional[float] = None,
        lambda2: float = 0.0,
        lambda3: float = 0.0,
        model: Union[NlsModel, str] = NlsModel.QUINTIC,
        coupling_scale: float = 1.0,
        dt: float = 1e-4,
        T: float = 0.1,
        record_every: int = 100,
        nodes: int = 256,
        quadrature: Union[QuadratureRule, str] = QuadratureRule.SIMPSON,
        samples: int = 100,
        alpha: float = 0.75,
        kappa: float = 0.5,
        p: float = 2.0,
        k: int = 1,
        r: int = 2,
        n: int = 3,
        N_list: Sequence[int] = (3, 4, 5),
        memory_cap: int = DEFAULT_MEMORY_CAP,
        enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
        move_budget: Optional[int] = None,
        rank_cap: int = DEFAULT_RANK_CAP,
        seed: int = 0,
        threads: int = 1,
        logging_level: Union[LoggingLevel, str] = LoggingLevel.WARNING,
    ):
        self._d = int(d)
        self._M = int(M)
        self._L = float(L)
        self._beta = float(beta)
        self._potential = str(potential)
        self._potential_width = float(potential_width)
        self._b0_override = None if b0_override is None else float(b0_override)
        self._lambda2 = float(lambda2)
        self._lambda3 = float(lambda3)
        self._model = model if isinstance(model, NlsModel) else NlsModel(model)
        self._coupling_scale = float(coupling_scale)
        self._dt = float(dt)
        self._T = float(T)
        self._record_every = int(record_every)
        self._nodes = int(nodes)
        self._quadrature = (
            quadrature if isinstance(quadrature, QuadratureRule) else QuadratureRule(quadrature)
        )
        self._samples = int(samples)
        self._alpha = float(alpha)
        self._kappa = float(kappa)
        self._p = float(p)
        self._k = int(k)
        self._r = int(r)
        self._n = int(n)
        self._N_list = tuple(int(N) for N in N_list)
        self._memory_cap = int(memory_cap)
        self._enumeration_cap = int(enumeration_cap)
        self._move_budget = None if move_budget is None else int(move_budget)
        self._rank_cap = int(rank_cap)
        self._seed = int(seed)
        self._threads = int(threads)
        self._logging_level = (
            logging_level
            if isinstance(logging_level, LoggingLevel)
            else LoggingLevel.from_name(logging_level)
        )

        self._logger = DefaultLogger("quintlab", self._logging_level)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **overrides: Any) -> "Configuration":
        """Builds a configuration from one flat JSON object; `overrides` win over `data`.

        Unknown keys and values of the wrong type are reported together.
        """
        if not isinstance(data, dict):
            raise ValidationError(
                "Cannot read configuration.",
                code="invalid_config",
                details="HINT: the configuration must be one flat JSON object.",
            )
        merged = {**data, **{key: value for key, value in overrides.items() if value is not None}}
        unknown = sorted(set(merged) - set(cls.KEYS))
        if unknown:
            raise ValidationError(
                "Cannot read configuration.",
                code="invalid_config",
                violations=[f"unknown key `{key}`" for key in unknown],
                details="HINT: see the configuration key schema in the experiments guide.",
            )
        try:
            return cls(**merged)
        except (TypeError, ValueError) as exc:
            raise ValidationError(
                "Cannot read configuration.", code="invalid_config", violations=[str(exc)]
            ) from None

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides: Any) -> "Configuration":
        try:
            with open(path, encoding="utf-8") as stream:
                data = json.load(stream)
        except OSError as exc:
            raise ValidationError(
                f"Cannot open configuration file `{path}`.",
                code="invalid_config",
                details=f"HINT: {exc.strerror}.",
            ) from None
        except json.JSONDecodeError as exc:
            raise ValidationError(
                f"Cannot parse configuration file `{path}`.",
                code="invalid_config",
                details=f"HINT: {exc.msg} at line {exc.lineno}.",
            ) from None
        return cls.from_dict(data, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        settings = {key: getattr(self, key) for key in self.KEYS}
        settings["model"] = self._model.value
        settings["quadrature"] = self._quadrature.value
        settings["logging_level"] = self._logging_level.name.lower()
        return settings

    @property
    def config_hash(self) -> str:
        return Helpers.config_hash(self.to_dict())

    def with_overrides(self, **overrides: Any) -> "Configuration":
        return Configuration.from_dict(self.to_dict(), **overrides)

    def build_potential(self) -> BasePotential:
        if self._potential == "gaussian":
            return GaussianPotential(width=self._potential_width)
        if self._potential == "constant":
            return ConstantPotential(1.0)
        return ZeroPotential()

    def nls_params(self, b0: Optional[float] = None) -> NlsParams:
        """NLS couplings; the quintic coupling defaults to `b0_override`, else `coupling_scale`."""
        if b0 is None:
            b0 = self._b0_override if self._b0_override is not None else self._coupling_scale
        return NlsParams(
            dt=self._dt,
            b0=b0,
            lambda2=self._lambda2,
            lambda3=self._lambda3,
            model=self._model,
        )

    def _common_violations(self) -> List[str]:
        violations: List[str] = []
        if self._d not in (1, 2):
            violations.append(f"d must be 1 or 2, got {self._d}")
        if not Helpers.is_power_of_two(self._M) or self._M < 4:
            violations.append(f"M must be a power of two >= 4, got {self._M}")
        for name in ("L", "dt", "T", "potential_width"):
            if not getattr(self, name) > 0:
                violations.append(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("lambda2", "lambda3", "coupling_scale"):
            if not getattr(self, name) >= 0:
                violations.append(f"{name} must be >= 0, got {getattr(self, name)}")
        if self._b0_override is not None and not self._b0_override >= 0:
            violations.append(f"b0_override must be >= 0, got {self._b0_override}")
        if self._potential not in POTENTIALS:
            violations.append(f"potential must be one of {', '.join(POTENTIALS)}")
        for name in ("record_every", "nodes", "k", "r", "n", "threads"):
            if getattr(self, name) < 1:
                violations.append(f"{name} must be >= 1, got {getattr(self, name)}")
        if self._samples < 2:
            violations.append(f"samples must be >= 2, got {self._samples}")
        for name in ("memory_cap", "enumeration_cap", "rank_cap"):
            if getattr(self, name) < 1:
                violations.append(f"{name} must be positive, got {getattr(self, name)}")
        if self._move_budget is not None and self._move_budget < 1:
            violations.append(f"move_budget must be positive, got {self._move_budget}")
        if not 0 <= self._seed < SEED_LIMIT:
            violations.append(f"seed must be an unsigned 64-bit integer, got {self._seed}")
        return violations

    def _nbody_violations(self) -> List[str]:
        violations: List[str] = []
        limit = 1.0 / (4 * (self._d + 1))
        if not 0 < self._beta < limit:
            violations.append(
                f"beta must lie in (0, 1/(4(d+1))) = (0, {limit:g}) for d={self._d}, "
                f"got {self._beta}"
            )
        if not self._N_list:
            violations.append("N_list must not be empty")
        violations.extend(f"N={N} is smaller than k={self._k}" for N in self._N_list if N < self._k)
        return violations

    def _step_violations(self) -> List[str]:
        try:
            Helpers.step_count(self._T, self._dt)
        except ValueError as exc:
            return [str(exc)]
        return []

    def _duhamel_violations(self) -> List[str]:
        violations = self._step_violations()
        if violations:
            return violations
        steps = Helpers.step_count(self._T, self._dt)
        if steps % self._nodes != 0:
            violations.append(f"nodes={self._nodes} must divide the step count {steps}")
        if self._quadrature is QuadratureRule.SIMPSON and self._nodes % 2 != 0:
            violations.append(f"Simpson's rule needs an even node count, got {self._nodes}")
        return violations

    def _bounds_violations(self) -> List[str]:
        violations: List[str] = []
        if self._d == 1 and not 0 < self._alpha <= 1:
            violations.append(f"alpha must lie in (0, 1] for d=1, got {self._alpha}")
        if self._d == 2 and not 0 < self._alpha < 1:
            violations.append(f"alpha must lie in (0, 1) for d=2, got {self._alpha}")
        if not 0 <= self._kappa < 1:
            violations.append(f"kappa must lie in [0, 1), got {self._kappa}")
        if self._d == 1 and not self._p > 1:
            violations.append(f"p must exceed 1 for d=1, got {self._p}")
        if self._d == 2 and not self._p >= 4:
            violations.append(f"p must be >= 2d = 4 for d=2, got {self._p}")
        limit = 1.0 / (4 * (self._d + 1))
        if not 0 <= self._beta < limit:
            violations.append(f"beta must lie in [0, {limit:g}) for d={self._d}, got {self._beta}")
        return violations

    def _commutation_violations(self) -> List[str]:
        # the largest column boundary j = n - 1 has picks 1 <= i < l <= r + 2j - 2
        if self._n < 2 or self._r + 2 * (self._n - 1) < 4:
            return [f"r={self._r}, n={self._n} has no pair of distinct picks to commute"]
        return []

    def validate(self, experiment: str) -> None:
        """Raises one :class:`ValidationError` listing every constraint `experiment` violates."""
        if experiment not in EXPERIMENT_ANCHORS:
            raise ValidationError(
                f"Unknown experiment `{experiment}`.",
                code="unknown_experiment",
                details="HINT: use one of " + ", ".join(EXPERIMENT_ANCHORS) + ".",
            )
        violations = self._common_violations()
        if experiment == "nls":
            violations.extend(self._step_violations())
        elif experiment == "nbody-converge":
            violations.extend(self._nbody_violations())
        elif experiment == "duhamel-residual":
            violations.extend(self._duhamel_violations())
        elif experiment == "bounds":
            violations.extend(self._bounds_violations())
        elif experiment == "commutation":
            violations.extend(self._commutation_violations())
        if violations:
            raise ValidationError(
                f"Cannot run `{experiment}` with this configuration.",
                code="invalid_config",
                violations=violations,
                context={"experiment": experiment},
            )
        self._logger.debug("configuration valid", experiment=experiment, hash=self.config_hash)
