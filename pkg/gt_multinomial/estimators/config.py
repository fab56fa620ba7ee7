# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from gt_multinomial import settings
from gt_multinomial.model.types import ReducedPrevalence, TraitPrevalence
from gt_multinomial.utils import throw


class EstimatePath(Enum):
    """How an estimate was reached"""
    CLOSED_FORM = "closed_form"
    EM_BOUNDARY = "em_boundary"
    # RMM and Burrows outside the closure region
    TRUNCATED = "truncated"


class EstimatorKind(Enum):
    """Estimators"""
    MLE = "mle"
    RMM = "rmm"
    BURROWS = "burrows"

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(kind.value for kind in cls)
            throw(f"Unknown estimator {name!r}; choose one of {valid}")


@dataclass(frozen=True)
class EmConfig:
    """
    Stopping rule and starting point of the EM iteration
    """

    epsilon: float = settings.em_epsilon
    max_iterations: int = settings.em_max_iterations
    initial_pstar: ReducedPrevalence = field(default_factory=lambda: ReducedPrevalence(*settings.em_initial_pstar))

    def __post_init__(self):
        if not self.epsilon > 0:
            throw(f"EM epsilon must be positive, got {self.epsilon}")
        if isinstance(self.max_iterations, bool) or int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            throw(f"EM max_iterations must be a positive integer, got {self.max_iterations}")
        self.initial_pstar.validate(strict=True)

    @classmethod
    def default(cls):
        return cls()

    def with_start(self, pstar):
        """Same rule from another start"""
        return EmConfig(epsilon=self.epsilon, max_iterations=self.max_iterations, initial_pstar=pstar)


@dataclass(frozen=True)
class EstimateResult:
    """
    An estimate of p with its provenance.

    final_log_likelihood is the kernel; full_log_likelihood adds the
    multinomial coefficient.
    """

    estimate: TraitPrevalence
    path: EstimatePath
    iterations: int
    final_log_likelihood: float
    on_boundary: bool
    estimator: EstimatorKind = EstimatorKind.MLE
    full_log_likelihood: Optional[float] = None

    def as_dict(self):
        return {
            "estimator": self.estimator.value,
            "p10": self.estimate.p10,
            "p01": self.estimate.p01,
            "p11": self.estimate.p11,
            "p00": self.estimate.p00,
            "path": self.path.value,
            "iterations": self.iterations,
            "on_boundary": self.on_boundary,
            "log_likelihood": self.final_log_likelihood,
            "full_log_likelihood": self.full_log_likelihood,
        }
