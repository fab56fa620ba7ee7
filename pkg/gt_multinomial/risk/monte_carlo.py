# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import math

import numpy as np

from gt_multinomial import settings
from gt_multinomial.estimators.config import EmConfig, EstimatorKind
from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.risk.engine import _check_inputs, estimate_rows
from gt_multinomial.risk.summary import RiskMethod, RiskSummary
from gt_multinomial.utils import get_logger, throw

logger = get_logger("risk")

# draws generated and estimated per batch
BATCH_SIZE = 100_000


def make_generator(seed):
    """Counter-based generator for an unsigned 64-bit seed"""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2 ** 64:
        throw(f"seed must be an integer in [0, 2**64 - 1], got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


def _draw_batches(theta_cells, n, samples, seed):
    """
    Distinct count rows with their multiplicities, one pair per batch of draws
    """
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples < 1:
        throw(f"samples must be a positive integer, got {samples!r}")
    rng = make_generator(seed)
    # multinomial needs pvals summing to 1 in double precision
    pvals = np.clip(np.asarray(theta_cells, dtype=float), 0.0, 1.0)
    pvals = pvals / pvals.sum()
    remaining = int(samples)
    while remaining > 0:
        size = min(BATCH_SIZE, remaining)
        draws = rng.multinomial(n, pvals, size=size)
        rows, multiplicity = np.unique(draws, axis=0, return_counts=True)
        yield rows.astype(np.int64), multiplicity.astype(float)
        remaining -= size


def _standard_error(mean, mean_of_squares, samples):
    variance = np.maximum(mean_of_squares - mean ** 2, 0.0)
    return np.sqrt(variance / samples)


class MonteCarloRisk:
    """
    Seeded simulation counterpart of the exact risk engine
    """

    @staticmethod
    def boundary_probability(p, design, samples=None, seed=None):
        """
        Share of simulated count vectors outside the closure region, with its
        standard error
        """
        theta = _check_inputs(p, design)
        samples = settings.monte_carlo_samples if samples is None else samples
        seed = settings.monte_carlo_seed if seed is None else seed

        outside = []
        for rows, multiplicity in _draw_batches(theta, design.n, samples, seed):
            mask = ~PoolingMap.closure_mask(rows[:, 0], rows[:, 1], rows[:, 2], design.n, design.k)
            outside.append(math.fsum(multiplicity[mask]))
        share = math.fsum(outside) / samples
        return share, math.sqrt(share * (1.0 - share) / samples)

    @staticmethod
    def monte_carlo_risk(p, design, estimator=EstimatorKind.MLE, config=None, samples=None, seed=None):
        """
        Expectation, bias and MSE of an estimator from seeded multinomial draws.
        Repeated calls with the same seed give identical summaries.
        """
        theta = _check_inputs(p, design)
        estimator = estimator if isinstance(estimator, EstimatorKind) else EstimatorKind.parse(estimator)
        config = config or EmConfig.default()
        samples = settings.monte_carlo_samples if samples is None else samples
        seed = settings.monte_carlo_seed if seed is None else seed
        truth = p.as_array()

        first, second, fourth, outside = [], [], [], []
        for rows, multiplicity in _draw_batches(theta, design.n, samples, seed):
            mask = ~PoolingMap.closure_mask(rows[:, 0], rows[:, 1], rows[:, 2], design.n, design.k)
            outside.append(math.fsum(multiplicity[mask]))
            error = estimate_rows(rows, design.n, design.k, estimator, config) - truth
            weighted = multiplicity[:, None] * error
            first.append(weighted.sum(axis=0))
            second.append(np.einsum("ni,nj->ij", weighted, error))
            fourth.append((multiplicity[:, None] * error ** 4).sum(axis=0))

        mean_error = np.sum(first, axis=0) / samples
        second_moment = np.sum(second, axis=0) / samples
        mean_fourth = np.sum(fourth, axis=0) / samples
        share = math.fsum(outside) / samples

        squared = np.diag(second_moment)
        relative = np.where(truth >= settings.relative_bias_floor, 100.0 / np.maximum(truth, settings.relative_bias_floor), np.nan)
        bias_se = _standard_error(mean_error, squared, samples)
        standard_errors = {
            "expectation": bias_se,
            "bias": bias_se,
            "relative_bias": bias_se * relative,
            "mse": _standard_error(squared, mean_fourth, samples),
            "boundary_probability": np.array([math.sqrt(share * (1.0 - share) / samples)]),
        }
        logger.debug("monte carlo n=%d k=%d samples=%d seed=%d", design.n, design.k, samples, seed)
        return RiskSummary(
            prevalence=p,
            design=design,
            estimator=estimator,
            method=RiskMethod.MONTE_CARLO,
            expectation=truth + mean_error,
            second_moment=second_moment,
            boundary_probability=share,
            samples=int(samples),
            seed=int(seed),
            standard_errors=standard_errors,
        )

    @staticmethod
    def average_standard_errors(summary):
        """
        Standard errors of avg_abs_relative_bias and avg_mse, treating the
        components as independent
        """
        errors = summary.standard_errors
        if not errors:
            return {"avg_abs_relative_bias": 0.0, "avg_mse": 0.0}
        relative = np.nan_to_num(errors["relative_bias"])
        return {
            "avg_abs_relative_bias": float(np.sqrt(np.sum(relative ** 2)) / 3.0),
            "avg_mse": float(np.sqrt(np.sum(errors["mse"] ** 2)) / 3.0),
        }


monte_carlo_risk = MonteCarloRisk.monte_carlo_risk
