# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from functools import partial

import numpy as np
from scipy.special import gammaln, xlogy

from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import PoolCounts


def counts_with_x00(n, x00):
    """
    Every outcome with the given x00, as an (N, 4) array ordered by x10 then x01
    """
    rest = n - x00
    x10, x01 = np.meshgrid(np.arange(rest + 1), np.arange(rest + 1), indexing="ij")
    keep = x10 + x01 <= rest
    x10 = x10[keep]
    x01 = x01[keep]
    x11 = rest - x10 - x01
    return np.column_stack([np.full(x10.shape, x00), x10, x01, x11]).astype(np.int64)


def chunks(design):
    """
    The sample space split by x00, in increasing x00. Chunk order is the
    merge order of every accumulation over the sample space.
    """
    for x00 in range(design.n + 1):
        yield counts_with_x00(design.n, x00)


def log_pmf(counts, theta_cells):
    """
    Multinomial log pmf of count rows under pool cells (theta00, theta10,
    theta01, theta11); zero counts contribute 0 even on zero cells
    """
    counts = np.asarray(counts, dtype=float)
    n = counts.sum(axis=-1)
    with np.errstate(divide="ignore"):
        kernel = xlogy(counts, np.asarray(theta_cells, dtype=float)).sum(axis=-1)
    return gammaln(n + 1.0) - gammaln(counts + 1.0).sum(axis=-1) + kernel


def _log_weight(row, k, p):
    theta = PoolingMap.theta_from_p(p, k)
    return float(log_pmf(row, theta.cells()))


def enumerate_sample_space(design):
    """
    Yield (PoolCounts, log_weight) for all C(n + 3, 3) outcomes, where
    log_weight(p) is the log probability of that outcome under p
    """
    for block in chunks(design):
        for row in block:
            yield PoolCounts(*(int(c) for c in row)), partial(_log_weight, row, design.k)
