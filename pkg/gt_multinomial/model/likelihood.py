# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import numpy as np
from scipy.special import gammaln, xlogy

from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import ReducedPrevalence, TraitPrevalence
from gt_multinomial.utils import throw


class Likelihood:
    """
    Multinomial log-likelihood of pool counts, kept in log space throughout
    """

    @staticmethod
    def kernel(counts, theta):
        """
        sum_s x_s log theta_s with 0 log 0 = 0.

        counts has shape (..., 4) in the order (00, 10, 01, 11); theta is a
        length-4 cell vector or broadcasts against counts. A positive count on
        a zero cell gives -inf.
        """
        counts = np.asarray(counts, dtype=float)
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore"):
            terms = xlogy(counts, theta)
        return terms.sum(axis=-1)

    @staticmethod
    def log_multinomial_coefficient(counts):
        """
        log n!/(x00! x10! x01! x11!) via log-gamma, over the last axis
        """
        counts = np.asarray(counts, dtype=float)
        n = counts.sum(axis=-1)
        return gammaln(n + 1.0) - gammaln(counts + 1.0).sum(axis=-1)

    @staticmethod
    def log_likelihood(p, x, design, include_coefficient=False):
        """
        Kernel log-likelihood of p given x, optionally with the multinomial
        coefficient added
        """
        if not isinstance(p, TraitPrevalence):
            throw(f"Expected TraitPrevalence, got {type(p).__name__}")
        x.validate_design(design)
        theta = PoolingMap.theta_from_p(p, design.k)
        counts = x.as_array()
        value = float(Likelihood.kernel(counts, theta.cells()))
        if include_coefficient:
            value += float(Likelihood.log_multinomial_coefficient(counts))
        return value

    @staticmethod
    def reduced_log_likelihood(pstar, x, design):
        """
        Kernel log-likelihood on the face p11 = 0
        """
        if not isinstance(pstar, ReducedPrevalence):
            throw(f"Expected ReducedPrevalence, got {type(pstar).__name__}")
        pstar.validate(strict=False)
        return Likelihood.log_likelihood(pstar.to_prevalence(), x, design)

    @staticmethod
    def reduced_kernel_batch(p10, p01, counts, k):
        """
        Reduced kernel for arrays of states and matching rows of counts (no
        validation). Used by the batched EM.
        """
        p10 = np.asarray(p10, dtype=float)
        p01 = np.asarray(p01, dtype=float)
        theta = np.stack(PoolingMap.theta_cells(1.0 - p10 - p01, p10, p01, k), axis=-1)
        return Likelihood.kernel(counts, theta)


def full_log_likelihood(p, x, design):
    """Kernel plus log multinomial coefficient"""
    return Likelihood.log_likelihood(p, x, design, include_coefficient=True)


__all__ = ["Likelihood", "full_log_likelihood"]
