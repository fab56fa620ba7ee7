# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize

from gt_multinomial import settings
from gt_multinomial.model.likelihood import Likelihood
from gt_multinomial.model.types import TraitPrevalence
from gt_multinomial.utils import get_logger

logger = get_logger("estimators")


@dataclass(frozen=True)
class SimplexResult:
    """Best point found by the reference optimizer"""

    estimate: TraitPrevalence
    log_likelihood: float
    full_log_likelihood: float
    converged: bool
    iterations: int


def _initial_simplex(start):
    values = start.as_array()
    step = settings.nelder_mead_step * float(np.max(np.abs(values)))
    vertices = [values]
    for axis in range(3):
        vertex = values.copy()
        vertex[axis] += step
        vertices.append(vertex)
    return np.array(vertices)


def nelder_mead_reference(x, design, start):
    """
    Maximize the kernel over the closed parameter space with the
    Nelder-Mead simplex method, starting from an interior point.

    Leaving the parameter space costs a flat penalty, and the search stops
    once the simplex function values agree to a tolerance relative to the
    starting value. Near the p11 = 0 face the simplex can collapse against
    the penalty before reaching the maximum, so only a local answer is
    promised.
    """
    x.validate_design(design)
    start.validate(strict=True)
    penalty = settings.nelder_mead_penalty

    def objective(values):
        p = TraitPrevalence(*values)
        if not p.in_closure(tolerance=0.0):
            return penalty
        value = Likelihood.log_likelihood(p, x, design)
        return -value if math.isfinite(value) else penalty

    reltol = settings.nelder_mead_reltol
    fatol = reltol * (abs(objective(start.as_array())) + reltol)
    outcome = minimize(
        objective,
        start.as_array(),
        method="Nelder-Mead",
        options={
            "initial_simplex": _initial_simplex(start),
            "maxiter": settings.nelder_mead_max_iterations,
            # function-value spread only
            "xatol": np.inf,
            "fatol": fatol,
            "adaptive": False,
        },
    )
    estimate = TraitPrevalence(*(float(v) for v in outcome.x))
    if not estimate.in_closure(tolerance=0.0):
        # the minimizer only returns a penalized point if every vertex was penalized
        estimate = start
    kernel = Likelihood.log_likelihood(estimate, x, design)
    if not outcome.success:
        logger.info("Nelder-Mead stopped without converging from %s: %s", start.as_tuple(), outcome.message)
    return SimplexResult(
        estimate=estimate,
        log_likelihood=kernel,
        full_log_likelihood=kernel + float(Likelihood.log_multinomial_coefficient(x.as_array())),
        converged=bool(outcome.success),
        iterations=int(outcome.nit),
    )
