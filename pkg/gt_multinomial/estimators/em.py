# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import numpy as np

from gt_multinomial import settings
from gt_multinomial.estimators.closed_form import ClosedFormEstimators
from gt_multinomial.estimators.config import EmConfig, EstimatePath, EstimateResult, EstimatorKind
from gt_multinomial.model.likelihood import Likelihood
from gt_multinomial.model.mapping import PoolingMap
from gt_multinomial.model.types import ReducedPrevalence, TraitPrevalence
from gt_multinomial.utils import ContractError, ConvergenceError, DegenerateStateError, get_logger, log_error, throw

logger = get_logger("estimators")


def _unit_weights(p10, p01, k):
    """
    Expected share of unit types inside a pool, per pool outcome, on the face
    p11 = 0. Returns the four theta cells and the weights w10|10, w10|11,
    w01|01, w01|11.
    """
    p00 = 1.0 - p10 - p01
    theta00, theta10, theta01, theta11 = PoolingMap.theta_cells(p00, p10, p01, k)
    lambda10_km1 = np.power(p00 + p10, k - 1)
    lambda01_km1 = np.power(p00 + p01, k - 1)
    return (
        (theta00, theta10, theta01, theta11),
        lambda10_km1 * p10,
        (1.0 - lambda10_km1) * p10,
        lambda01_km1 * p01,
        (1.0 - lambda01_km1) * p01,
    )


def _guard(denominator, counts, label):
    floor = settings.em_denominator_floor
    bad = (counts > 0) & ~(denominator > floor)
    if np.any(bad):
        message = f"theta{label} fell below {floor:g} with a positive count; EM state is degenerate"
        log_error(message, "EM Degenerate State")
        raise DegenerateStateError(message)
    return np.where(counts > 0, denominator, 1.0)


def _update(p10, p01, counts, k):
    """
    One EM update for arrays of states and the matching rows of counts
    """
    counts = np.asarray(counts, dtype=float)
    n = counts.sum(axis=-1)
    x10, x01, x11 = counts[..., 1], counts[..., 2], counts[..., 3]
    (theta00, theta10, theta01, theta11), a10, b10, a01, b01 = _unit_weights(p10, p01, k)

    theta10 = _guard(theta10, x10, "10")
    theta01 = _guard(theta01, x01, "01")
    theta11 = _guard(theta11, x11, "11")

    # a zero count drops its term
    next_p10 = (np.where(x10 > 0, a10 / theta10 * x10, 0.0) + np.where(x11 > 0, b10 / theta11 * x11, 0.0)) / n
    next_p01 = (np.where(x01 > 0, a01 / theta01 * x01, 0.0) + np.where(x11 > 0, b01 / theta11 * x11, 0.0)) / n
    return next_p10, next_p01


class EmAlgorithm:
    """
    EM iteration for the MLE on the face p11 = 0, and the global maximizer
    that routes between the closed form and EM
    """

    @staticmethod
    def e_step_weights(pstar, k):
        """
        Expected share of unit types (00, 10, 01) in a pool, for each pool
        outcome, at the reduced state pstar
        """
        pstar.validate(strict=True)
        (_, theta10, theta01, theta11), a10, b10, a01, b01 = _unit_weights(pstar.p10, pstar.p01, k)
        w10_given_10 = float(a10 / theta10)
        w01_given_01 = float(a01 / theta01)
        # k = 1 leaves no room for a double-positive pool on this face
        w10_given_11 = float(b10 / theta11) if theta11 > 0 else 0.0
        w01_given_11 = float(b01 / theta11) if theta11 > 0 else 0.0
        return {
            "00": (1.0, 0.0, 0.0),
            "10": (1.0 - w10_given_10, w10_given_10, 0.0),
            "01": (1.0 - w01_given_01, 0.0, w01_given_01),
            "11": (1.0 - w10_given_11 - w01_given_11, w10_given_11, w01_given_11),
        }

    @staticmethod
    def em_step(pstar, x, design):
        """
        One EM update from an interior reduced state, for counts outside the
        closure region
        """
        pstar.validate(strict=True)
        x.validate_design(design)
        if PoolingMap.in_closure_region(x, design):
            throw(f"Counts {x.as_tuple()} lie in the closure region; EM is only run outside it", ContractError)
        p10, p01 = _update(np.array([pstar.p10]), np.array([pstar.p01]), x.as_array()[None, :], design.k)
        return ReducedPrevalence(float(p10[0]), float(p01[0]))

    @staticmethod
    def run_batch(counts, k, config=None):
        """
        Iterate EM jointly for rows of counts outside the closure region,
        retiring each row once its likelihood change drops below epsilon.

        Returns (p10, p01, iterations, kernel) arrays.
        """
        config = config or EmConfig.default()
        counts = np.asarray(counts, dtype=np.int64)
        rows = counts.shape[0]
        p10 = np.full(rows, config.initial_pstar.p10)
        p01 = np.full(rows, config.initial_pstar.p01)
        iterations = np.zeros(rows, dtype=np.int64)
        kernel = Likelihood.reduced_kernel_batch(p10, p01, counts, k)

        active = np.arange(rows)
        for step in range(1, config.max_iterations + 1):
            if active.size == 0:
                break
            state_p10, state_p01 = _update(p10[active], p01[active], counts[active], k)
            state_kernel = Likelihood.reduced_kernel_batch(state_p10, state_p01, counts[active], k)
            done = np.abs(state_kernel - kernel[active]) < config.epsilon

            p10[active] = state_p10
            p01[active] = state_p01
            kernel[active] = state_kernel
            iterations[active] = step
            active = active[~done]

        if active.size:
            first = active[0]
            last_iterate = ReducedPrevalence(float(p10[first]), float(p01[first]))
            offending = tuple(int(c) for c in counts[first])
            message = (
                f"EM did not converge within {config.max_iterations} iterations for counts {offending} "
                f"({active.size} of {rows} rows unconverged); last iterate ({last_iterate.p10:.6g}, {last_iterate.p01:.6g})"
            )
            log_error(message, "EM Convergence")
            raise ConvergenceError(message, last_iterate=last_iterate, iterations=config.max_iterations, counts=offending)

        return p10, p01, iterations, kernel

    @staticmethod
    def trace(x, design, config=None):
        """
        Kernel log-likelihood at the start and after every EM update, until
        the stopping rule fires or max_iterations is reached
        """
        config = config or EmConfig.default()
        state = config.initial_pstar
        values = [Likelihood.reduced_log_likelihood(state, x, design)]
        for _ in range(config.max_iterations):
            state = EmAlgorithm.em_step(state, x, design)
            values.append(Likelihood.reduced_log_likelihood(state, x, design))
            if abs(values[-1] - values[-2]) < config.epsilon:
                break
        return values

    @staticmethod
    def mle(x, design, config=None):
        """
        Global maximizer: closed form inside the closure region, EM on the
        face p11 = 0 outside it
        """
        config = config or EmConfig.default()
        x.validate_design(design)
        counts = x.as_array()
        coefficient = float(Likelihood.log_multinomial_coefficient(counts))

        if PoolingMap.in_closure_region(x, design):
            estimate = ClosedFormEstimators.mle_closed_form(x, design)
            kernel = Likelihood.log_likelihood(estimate, x, design)
            return EstimateResult(
                estimate=estimate,
                path=EstimatePath.CLOSED_FORM,
                iterations=0,
                final_log_likelihood=kernel,
                on_boundary=False,
                estimator=EstimatorKind.MLE,
                full_log_likelihood=kernel + coefficient,
            )

        p10, p01, iterations, kernel = EmAlgorithm.run_batch(counts[None, :], design.k, config)
        logger.debug("EM converged for %s after %d iterations", x.as_tuple(), int(iterations[0]))
        estimate = TraitPrevalence(float(p10[0]), float(p01[0]), 0.0)
        return EstimateResult(
            estimate=estimate,
            path=EstimatePath.EM_BOUNDARY,
            iterations=int(iterations[0]),
            final_log_likelihood=float(kernel[0]),
            on_boundary=True,
            estimator=EstimatorKind.MLE,
            full_log_likelihood=float(kernel[0]) + coefficient,
        )


def estimate(x, design, estimator=EstimatorKind.MLE, config=None):
    """
    Any estimator as an EstimateResult
    """
    estimator = estimator if isinstance(estimator, EstimatorKind) else EstimatorKind.parse(estimator)
    if estimator is EstimatorKind.MLE:
        return EmAlgorithm.mle(x, design, config)

    in_region = PoolingMap.in_closure_region(x, design)
    if estimator is EstimatorKind.RMM:
        value = ClosedFormEstimators.rmm(x, design)
    else:
        value = ClosedFormEstimators.burrows(x, design)
    kernel = Likelihood.log_likelihood(value, x, design)
    return EstimateResult(
        estimate=value,
        path=EstimatePath.CLOSED_FORM if in_region else EstimatePath.TRUNCATED,
        iterations=0,
        final_log_likelihood=kernel,
        on_boundary=value.p11 == 0.0,
        estimator=estimator,
        full_log_likelihood=kernel + float(Likelihood.log_multinomial_coefficient(x.as_array())),
    )
