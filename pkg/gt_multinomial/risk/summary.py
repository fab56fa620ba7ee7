# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from gt_multinomial import settings
from gt_multinomial.estimators.config import EstimatorKind
from gt_multinomial.model.types import PoolDesign, TraitPrevalence

COMPONENTS = ("10", "01", "11")


class RiskMethod(Enum):
    """How expectations were obtained"""
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class RiskSummary:
    """
    Expectation, bias, relative bias and MSE of an estimator at a true p.

    mse is the diagonal of second_moment, the matrix E[(estimate - p)(estimate - p)^T];
    covariance subtracts the bias outer product. standard_errors is only
    filled for Monte Carlo runs.
    """

    prevalence: TraitPrevalence
    design: PoolDesign
    estimator: EstimatorKind
    method: RiskMethod
    expectation: np.ndarray
    second_moment: np.ndarray
    boundary_probability: float
    total_mass: float = 1.0
    pruned_mass_bound: float = 0.0
    samples: Optional[int] = None
    seed: Optional[int] = None
    standard_errors: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def truth(self):
        return self.prevalence.as_array()

    @property
    def bias(self):
        return self.expectation - self.truth

    @property
    def mse(self):
        return np.diag(self.second_moment).copy()

    @property
    def covariance(self):
        bias = self.bias
        return self.second_moment - np.outer(bias, bias)

    @property
    def relative_bias_percent(self):
        """100 (E - p)/p per component; nan where p is below the floor"""
        truth = self.truth
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(truth >= settings.relative_bias_floor, 100.0 * self.bias / truth, np.nan)

    @property
    def avg_abs_relative_bias(self):
        return float(np.mean(np.abs(self.relative_bias_percent)))

    @property
    def avg_mse(self):
        return float(np.mean(self.mse))

    def as_row(self):
        """Flat record for tabular output"""
        row = {
            "estimator": self.estimator.value,
            "method": self.method.value,
            "n": self.design.n,
            "k": self.design.k,
            "p10": self.prevalence.p10,
            "p01": self.prevalence.p01,
            "p11": self.prevalence.p11,
        }
        for index, name in enumerate(COMPONENTS):
            row[f"expectation{name}"] = float(self.expectation[index])
            row[f"bias{name}"] = float(self.bias[index])
            row[f"relative_bias{name}"] = float(self.relative_bias_percent[index])
            row[f"mse{name}"] = float(self.mse[index])
        row["avg_abs_relative_bias"] = self.avg_abs_relative_bias
        row["avg_mse"] = self.avg_mse
        row["boundary_probability"] = self.boundary_probability
        for key, values in self.standard_errors.items():
            values = np.atleast_1d(values)
            if values.size == 1:
                row[f"se_{key}"] = float(values[0])
            else:
                for index, name in enumerate(COMPONENTS):
                    row[f"se_{key}{name}"] = float(values[index])
        return row
