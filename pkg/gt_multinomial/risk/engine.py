# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from concurrent.futures import ThreadPoolExecutor
import math
import os

import numpy as np

from gt_multinomial import settings
from gt_multinomial.estimators.closed_form import ClosedFormEstimators
from gt_multinomial.estimators.config import EmConfig, EstimatorKind
from gt_multinomial.estimators.em import EmAlgorithm
from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import TraitPrevalence
from gt_multinomial.risk.sample_space import chunks, log_pmf
from gt_multinomial.risk.summary import RiskMethod, RiskSummary
from gt_multinomial.utils import EnumerationBudgetError, GroupTestingError, get_logger, log_error, throw

logger = get_logger("risk")

# second-moment entries kept per chunk, upper triangle
_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def estimate_rows(counts, n, k, estimator, config=None):
    """
    (N, 3) estimates for rows of counts. Off-region rows go through the
    batched EM for the MLE.
    """
    estimator = estimator if isinstance(estimator, EstimatorKind) else EstimatorKind.parse(estimator)
    if estimator is EstimatorKind.RMM:
        return ClosedFormEstimators.rmm_batch(counts, n, k)
    if estimator is EstimatorKind.BURROWS:
        return ClosedFormEstimators.burrows_batch(counts, n, k)

    inside = PoolingMap.closure_mask(counts[:, 0], counts[:, 1], counts[:, 2], n, k)
    # inside the region the MLE is the untruncated closed form, which rmm_batch reproduces
    values = ClosedFormEstimators.rmm_batch(counts, n, k)
    if not inside.all():
        p10, p01, _, _ = EmAlgorithm.run_batch(counts[~inside], k, config)
        values[~inside] = np.column_stack([p10, p01, np.zeros_like(p10)])
    return values


def _check_inputs(p, design):
    if not isinstance(p, TraitPrevalence):
        throw(f"Expected TraitPrevalence, got {type(p).__name__}")
    p.validate(strict=True)
    return PoolingMap.theta_from_p(p, design.k).cells()


def _check_budget(design, budget):
    budget = settings.enumeration_budget if budget is None else budget
    if design.outcome_count > budget:
        raise EnumerationBudgetError(design.outcome_count, budget)


def _default_threads(threads):
    return max(1, threads or os.cpu_count() or 1)


class RiskEngine:
    """
    Exact finite-sample risk by enumerating the pool-level sample space
    """

    @staticmethod
    def boundary_probability(p, design, threads=None, budget=None):
        """
        P(x outside the closure region) under p
        """
        theta = _check_inputs(p, design)
        _check_budget(design, budget)

        def chunk_mass(block):
            log_weight = log_pmf(block, theta)
            outside = ~PoolingMap.closure_mask(block[:, 0], block[:, 1], block[:, 2], design.n, design.k)
            weight = np.exp(log_weight)
            return math.fsum(weight), math.fsum(weight[outside])

        with ThreadPoolExecutor(max_workers=_default_threads(threads)) as pool:
            results = list(pool.map(chunk_mass, chunks(design)))

        total = math.fsum(mass for mass, _ in results)
        RiskEngine._check_mass(total, p, design)
        return math.fsum(outside for _, outside in results)

    @staticmethod
    def exact_risk(p, design, estimator=EstimatorKind.MLE, config=None, threads=None, budget=None):
        """
        Expectation, bias and MSE of an estimator as exact pmf-weighted sums
        """
        theta = _check_inputs(p, design)
        _check_budget(design, budget)
        estimator = estimator if isinstance(estimator, EstimatorKind) else EstimatorKind.parse(estimator)
        config = config or EmConfig.default()
        truth = p.as_array()
        threshold = settings.prune_log_weight

        def chunk_sums(block):
            log_weight = log_pmf(block, theta)
            weight = np.exp(log_weight)
            outside = ~PoolingMap.closure_mask(block[:, 0], block[:, 1], block[:, 2], design.n, design.k)
            sums = [math.fsum(weight), math.fsum(weight[outside])]

            keep = log_weight >= threshold
            if not keep.any():
                return sums + [0.0] * (3 + len(_PAIRS))
            kept_weight = weight[keep]
            error = estimate_rows(block[keep], design.n, design.k, estimator, config) - truth
            sums.extend(math.fsum(kept_weight * error[:, i]) for i in range(3))
            sums.extend(math.fsum(kept_weight * error[:, i] * error[:, j]) for i, j in _PAIRS)
            return sums

        with ThreadPoolExecutor(max_workers=_default_threads(threads)) as pool:
            results = list(pool.map(chunk_sums, chunks(design)))

        totals = [math.fsum(column) for column in zip(*results)]
        total_mass, outside_mass = totals[0], totals[1]
        RiskEngine._check_mass(total_mass, p, design)

        first = np.array(totals[2:5])
        second = np.zeros((3, 3))
        for (i, j), value in zip(_PAIRS, totals[5:]):
            second[i, j] = second[j, i] = value

        pruned_bound = design.outcome_count * math.exp(threshold)
        logger.debug("exact sweep n=%d k=%d: pruned mass at most %.3g", design.n, design.k, pruned_bound)
        return RiskSummary(
            prevalence=p,
            design=design,
            estimator=estimator,
            method=RiskMethod.EXACT,
            expectation=truth + first,
            second_moment=second,
            boundary_probability=outside_mass,
            total_mass=total_mass,
            pruned_mass_bound=pruned_bound,
        )

    @staticmethod
    def auto(p, design, estimator=EstimatorKind.MLE, config=None, threads=None, budget=None, samples=None, seed=None):
        """
        Exact risk within the enumeration budget, Monte Carlo beyond it
        """
        from gt_multinomial.risk.monte_carlo import MonteCarloRisk

        try:
            return RiskEngine.exact_risk(p, design, estimator, config, threads, budget)
        except EnumerationBudgetError as error:
            logger.warning("%s; switching to Monte Carlo", error)
            return MonteCarloRisk.monte_carlo_risk(p, design, estimator, config, samples, seed)

    @staticmethod
    def _check_mass(total, p, design):
        if abs(total - 1.0) > settings.mass_tolerance:
            message = f"Enumerated mass {total!r} for p={p.as_tuple()} n={design.n} k={design.k} is not 1"
            log_error(message, "Mass Conservation")
            throw(message, GroupTestingError)


boundary_probability = RiskEngine.boundary_probability
exact_risk = RiskEngine.exact_risk
