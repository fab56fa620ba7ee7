# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import numpy as np

from gt_multinomial import settings
from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import TraitPrevalence
from gt_multinomial.utils import ContractError, throw


def _counts_matrix(counts):
    counts = np.asarray(counts)
    if counts.ndim != 2 or counts.shape[1] != 4:
        throw(f"Counts must have shape (N, 4), got {counts.shape}")
    return counts


def _clamp(values):
    return np.where((values < 0.0) & (values > -settings.clamp_tolerance), 0.0, values)


def _from_root_terms(s00, s10, s01, p11):
    """
    (p10, p01, p11) from the root terms and a chosen p11. With the untruncated
    p11 = 1 - s10 - s01 + s00 this is h evaluated at the sample proportions.
    """
    p10 = 1.0 - s01 - p11
    p01 = 1.0 - s10 - p11
    return np.stack([_clamp(p10), _clamp(p01), _clamp(p11)], axis=-1)


def _to_prevalence(row):
    return TraitPrevalence(float(row[0]), float(row[1]), float(row[2]))


class ClosedFormEstimators:
    """
    Closed-form MLE on the closure region, restricted method of moments and
    the Burrows-type shrinkage estimator.

    Batch forms take an (N, 4) array of counts in the order (00, 10, 01, 11)
    and return an (N, 3) array of (p10, p01, p11). Scalar forms run the batch
    code on a single row.
    """

    @staticmethod
    def rmm_batch(counts, n, k):
        counts = _counts_matrix(counts)
        s00, s10, s01 = PoolingMap.root_terms(counts[:, 0], counts[:, 1], counts[:, 2], n, k)
        p11 = np.maximum(0.0, 1.0 - s10 - s01 + s00)
        return _from_root_terms(s00, s10, s01, p11)

    @staticmethod
    def burrows_shift(k):
        """eta = (k - 1)/(2k)"""
        return (k - 1) / (2.0 * k)

    @staticmethod
    def burrows_batch(counts, n, k):
        counts = _counts_matrix(counts)
        x00, x10, x01 = counts[:, 0], counts[:, 1], counts[:, 2]
        in_region = PoolingMap.closure_mask(x00, x10, x01, n, k)
        b00, b10, b01 = PoolingMap.root_terms(x00, x10, x01, n, k, shift=ClosedFormEstimators.burrows_shift(k))
        # a negative shrunk p11 inside the region is truncated like RMM
        p11 = np.where(in_region, np.maximum(0.0, 1.0 - b10 - b01 + b00), 0.0)
        return _from_root_terms(b00, b10, b01, p11)

    @staticmethod
    def mle_closed_form_batch(counts, n, k):
        """
        Closed-form MLE for rows inside the closure region; raises
        ContractError if any row lies outside it
        """
        counts = _counts_matrix(counts)
        in_region = PoolingMap.closure_mask(counts[:, 0], counts[:, 1], counts[:, 2], n, k)
        if not np.all(in_region):
            outside = tuple(int(c) for c in counts[np.argmin(in_region)])
            throw(f"Counts {outside} lie outside the closure region; the closed-form MLE does not apply", ContractError)
        # inside the region the truncation only removes cancellation noise
        return ClosedFormEstimators.rmm_batch(counts, n, k)

    @staticmethod
    def rmm(x, design):
        """
        Restricted method of moments estimate
        """
        x.validate_design(design)
        return _to_prevalence(ClosedFormEstimators.rmm_batch(x.as_array()[None, :], design.n, design.k)[0])

    @staticmethod
    def burrows(x, design):
        """
        Burrows-type shrinkage estimate with eta = (k - 1)/(2k)
        """
        x.validate_design(design)
        return _to_prevalence(ClosedFormEstimators.burrows_batch(x.as_array()[None, :], design.n, design.k)[0])

    @staticmethod
    def mle_closed_form(x, design):
        """
        h at the sample proportions; only valid inside the closure region
        """
        x.validate_design(design)
        if not PoolingMap.in_closure_region(x, design):
            throw(f"Counts {x.as_tuple()} lie outside the closure region; use the EM branch", ContractError)
        return _to_prevalence(ClosedFormEstimators.rmm_batch(x.as_array()[None, :], design.n, design.k)[0])


__all__ = ["ClosedFormEstimators"]
