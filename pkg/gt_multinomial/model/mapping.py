# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import numpy as np

from gt_multinomial import settings
from gt_multinomial.model.types import PoolCounts, PoolDesign, ThetaVector, TraitPrevalence
from gt_multinomial.utils import throw


def _check_group_size(k):
    # PoolDesign carries the integer checks
    return PoolDesign(k=k, n=1).k


class PoolingMap:
    """
    The forward map p -> theta, its inverse h, and the closure region of
    the pool-level sample space
    """

    @staticmethod
    def theta_cells(p00, p10, p01, k):
        """
        Pool cell probabilities (theta00, theta10, theta01, theta11) for unit
        cells given as floats or arrays. No validation.
        """
        p00 = np.asarray(p00, dtype=float)
        lambda10_k = np.power(p00 + p10, k)
        lambda01_k = np.power(p00 + p01, k)
        theta00 = np.power(p00, k)
        theta10 = lambda10_k - theta00
        theta01 = lambda01_k - theta00
        theta11 = 1.0 - lambda10_k - lambda01_k + theta00
        return theta00, theta10, theta01, theta11

    @staticmethod
    def theta_from_p(p, k, extended=False):
        """
        Map a unit prevalence to the pool-level multinomial parameter.

        With extended=True the algebraic map is evaluated for any p, including
        points outside the parameter space, and nothing is clamped.
        """
        k = _check_group_size(k)
        if not extended:
            p.validate(strict=False)

        if k == 1:
            cells = list(p.cells())
        else:
            cells = [float(cell) for cell in PoolingMap.theta_cells(p.p00, p.p10, p.p01, k)]
        if not extended:
            # cancellation noise on empty cells
            cells = [0.0 if -settings.clamp_tolerance < cell < 0.0 else cell for cell in cells]

        theta00, theta10, theta01, theta11 = cells
        return ThetaVector(theta10, theta01, theta11, exact_theta00=theta00)

    @staticmethod
    def p_from_theta(theta, k):
        """
        Inverse map h. The result is not checked against the parameter space;
        p11 comes out negative for theta the pooling model cannot produce.
        """
        k = _check_group_size(k)
        theta.validate()
        if k == 1:
            return TraitPrevalence(theta.theta10, theta.theta01, theta.theta11)

        theta00 = max(theta.theta00, 0.0)
        root = 1.0 / k
        p00 = theta00 ** root
        p10 = (theta00 + theta.theta10) ** root - p00
        p01 = (theta00 + theta.theta01) ** root - p00
        p11 = 1.0 - p00 - p10 - p01
        return TraitPrevalence(p10, p01, p11)

    @staticmethod
    def root_terms(x00, x10, x01, n, k, shift=0.0):
        """
        ((x00 + shift)/(n + shift))^(1/k), ((x00 + x10 + shift)/(n + shift))^(1/k)
        and ((x00 + x01 + shift)/(n + shift))^(1/k), elementwise.

        Every estimator and the membership test go through this function, so
        their branches agree bit for bit.
        """
        x00 = np.asarray(x00, dtype=float)
        x10 = np.asarray(x10, dtype=float)
        x01 = np.asarray(x01, dtype=float)
        denominator = float(n) + shift
        root = 1.0 / k
        s00 = np.power((x00 + shift) / denominator, root)
        s10 = np.power((x00 + x10 + shift) / denominator, root)
        s01 = np.power((x00 + x01 + shift) / denominator, root)
        return s00, s10, s01

    @staticmethod
    def closure_statistic(x00, x10, x01, n, k):
        """
        Left-hand side of the closure-region inequality, vectorized over counts
        """
        s00, s10, s01 = PoolingMap.root_terms(x00, x10, x01, n, k)
        return s10 + s01 - s00

    @staticmethod
    def closure_mask(x00, x10, x01, n, k):
        return PoolingMap.closure_statistic(x00, x10, x01, n, k) <= 1.0 + settings.membership_tolerance

    @staticmethod
    def in_closure_region(x, design):
        """
        True when x lies in the closure region, where the closed-form MLE is
        admissible
        """
        if not isinstance(x, PoolCounts):
            throw(f"Expected PoolCounts, got {type(x).__name__}")
        x.validate_design(design)
        return bool(PoolingMap.closure_mask(x.x00, x.x10, x.x01, design.n, design.k))
