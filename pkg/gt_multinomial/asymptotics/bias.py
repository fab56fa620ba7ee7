# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass

import numpy as np

from gt_multinomial.asymptotics.covariance import _interior, power
from gt_multinomial.estimators.config import EstimatorKind
from gt_multinomial.model.types import PoolDesign


@dataclass(frozen=True)
class FirstOrderBias:
    """
    Coefficients c with E(estimate) = p + c/n + O(1/n^2)
    """

    bias10: float
    bias01: float
    bias11: float

    def as_array(self):
        return np.array([self.bias10, self.bias01, self.bias11])

    def at(self, n):
        """Approximate bias vector at n pools"""
        PoolDesign(k=1, n=n)
        return self.as_array() / n


def first_order_bias(p, k, estimator=EstimatorKind.MLE):
    """
    First-order bias coefficients. MLE and RMM share them; the Burrows shift
    removes the 1/n term.
    """
    p = _interior(p, k)
    estimator = estimator if isinstance(estimator, EstimatorKind) else EstimatorKind.parse(estimator)
    if estimator is EstimatorKind.BURROWS or k == 1:
        return FirstOrderBias(0.0, 0.0, 0.0)

    factor = (k - 1) / (2.0 * k ** 2)
    inv_p00 = 1.0 / power(p.p00, k - 1)
    inv_l10 = 1.0 / power(p.p00 + p.p10, k - 1)
    inv_l01 = 1.0 / power(p.p00 + p.p01, k - 1)
    return FirstOrderBias(
        bias10=factor * (p.p10 + inv_p00 - inv_l10),
        bias01=factor * (p.p01 + inv_p00 - inv_l01),
        bias11=factor * (p.p11 + inv_l01 + inv_l10 - inv_p00 - 1.0),
    )
