# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass
import math

import numpy as np

from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import PoolDesign, ThetaVector, TraitPrevalence
from gt_multinomial.utils import throw

# component order of every vector and matrix in this module
COMPONENTS = ("p10", "p01", "p11")


def power(base, exponent):
    """base**exponent in log space; base must be positive"""
    if not base > 0.0:
        throw(f"Power of a non-positive base {base!r}")
    return math.exp(exponent * math.log(base))


def _interior(p, k):
    if not isinstance(p, TraitPrevalence):
        throw(f"Expected TraitPrevalence, got {type(p).__name__}")
    PoolDesign(k=k, n=1)
    if not p.is_interior():
        throw(f"Asymptotic formulas need p strictly inside the parameter space, got {p.as_tuple()}")
    return p


@dataclass(frozen=True)
class AsymptoticCovariance:
    """
    Sigma for (p10, p01, p11). The covariance of any of the three estimators
    is approximately sigma / (n k^2).
    """

    sigma: np.ndarray
    k: int

    def scaled(self, n):
        """Approximate covariance matrix at n pools"""
        PoolDesign(k=self.k, n=n)
        return self.sigma / (n * self.k ** 2)

    def standard_errors(self, n):
        return np.sqrt(np.diag(self.scaled(n)))

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.sigma)

    def entries(self):
        """The six distinct entries, lower triangle"""
        s = self.sigma
        return {
            "sigma11": float(s[0, 0]),
            "sigma22": float(s[1, 1]),
            "sigma33": float(s[2, 2]),
            "sigma21": float(s[1, 0]),
            "sigma31": float(s[2, 0]),
            "sigma32": float(s[2, 1]),
        }


def covariance_matrix(p, k):
    """
    Closed-form Sigma at an interior p
    """
    p = _interior(p, k)
    p00, p10, p01 = p.p00, p.p10, p.p01
    inv_l10 = 1.0 / power(p00 + p10, k)
    inv_l01 = 1.0 / power(p00 + p01, k)
    inv_p00 = 1.0 / power(p00, k)
    ratio = power(p00, k) * inv_l10 * inv_l01

    sigma11 = p10 ** 2 * (inv_l10 - 1.0) + p00 ** 2 * (inv_p00 - inv_l10)
    sigma22 = p01 ** 2 * (inv_l01 - 1.0) + p00 ** 2 * (inv_p00 - inv_l01)
    sigma21 = (
        p10 * p01 * (ratio - 1.0)
        + p00 * p10 * (ratio - inv_l10)
        + p00 * p01 * (ratio - inv_l01)
        + p00 ** 2 * (ratio - inv_l10 - inv_l01 + inv_p00)
    )
    sigma31 = (
        p10 ** 2 * (1.0 - inv_l10)
        + (p10 * p01 + p00 * p10) * (1.0 - ratio)
        + p00 * p01 * (inv_l01 - ratio)
        + p00 ** 2 * (inv_l10 + inv_l01 - ratio - inv_p00)
    )
    sigma32 = (
        p01 ** 2 * (1.0 - inv_l01)
        + (p10 * p01 + p00 * p01) * (1.0 - ratio)
        + p00 * p10 * (inv_l10 - ratio)
        + p00 ** 2 * (inv_l10 + inv_l01 - ratio - inv_p00)
    )
    sigma33 = (
        p10 ** 2 * (inv_l10 - 1.0)
        + p01 ** 2 * (inv_l01 - 1.0)
        + 2.0 * (p10 * p01 + p00 * p10 + p00 * p01) * (ratio - 1.0)
        + p00 ** 2 * (2.0 * ratio + inv_p00 - inv_l10 - inv_l01 - 1.0)
    )

    # lower triangle mirrored
    sigma = np.array(
        [
            [sigma11, sigma21, sigma31],
            [sigma21, sigma22, sigma32],
            [sigma31, sigma32, sigma33],
        ]
    )
    return AsymptoticCovariance(sigma=sigma, k=int(k))


class DeltaMethod:
    """
    Numerical delta-method construction of Sigma, independent of the
    closed form: k^2 J Cov(theta) J^T with J the finite-difference Jacobian
    of the inverse map h at theta(p)
    """

    # central-difference step as a fraction of the smallest theta cell
    relative_step = 1e-4

    @staticmethod
    def jacobian(p, k):
        """
        d(p10, p01, p11) / d(theta10, theta01, theta11) by central differences
        """
        theta = PoolingMap.theta_from_p(_interior(p, k), k)
        base = np.array([theta.theta10, theta.theta01, theta.theta11])
        step = DeltaMethod.relative_step * min(theta.cells())
        columns = []
        for axis in range(3):
            offset = np.zeros(3)
            offset[axis] = step
            upper = PoolingMap.p_from_theta(ThetaVector(*(base + offset)), k).as_array()
            lower = PoolingMap.p_from_theta(ThetaVector(*(base - offset)), k).as_array()
            columns.append((upper - lower) / (2.0 * step))
        return np.column_stack(columns)

    @staticmethod
    def covariance(p, k):
        """Sigma from the numerical Jacobian"""
        theta = PoolingMap.theta_from_p(_interior(p, k), k)
        cells = np.array([theta.theta10, theta.theta01, theta.theta11])
        pool_covariance = np.diag(cells) - np.outer(cells, cells)
        jacobian = DeltaMethod.jacobian(p, k)
        return k ** 2 * jacobian @ pool_covariance @ jacobian.T

    @staticmethod
    def total_prevalence_variance(p, k):
        """
        k^2 n Var((x00/n)^(1/k)) to first order, which equals the variance
        of p10 + p01 + p11 implied by Sigma
        """
        p = _interior(p, k)
        return power(p.p00, 2 - k) - p.p00 ** 2
