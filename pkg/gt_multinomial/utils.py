# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import logging

logger = logging.getLogger("gt_multinomial")


class GroupTestingError(Exception):
    """Base class for every error raised by gt_multinomial"""


class ValidationError(GroupTestingError, ValueError):
    """Invalid prevalence, theta, counts or design"""


class ContractError(GroupTestingError):
    """An operation was called outside its precondition"""


class DegenerateStateError(GroupTestingError):
    """An EM denominator vanished while its numerator weight is positive"""


class ConvergenceError(GroupTestingError):
    """
    EM did not meet the likelihood criterion within max_iterations
    """

    def __init__(self, message, last_iterate=None, iterations=None, counts=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations
        self.counts = counts


class EnumerationBudgetError(GroupTestingError):
    """
    The sample space is larger than the configured enumeration budget
    """

    def __init__(self, outcomes, budget):
        super().__init__(
            f"Sample space has {outcomes} outcomes, above the enumeration budget of {budget}; "
            "use monte_carlo_risk (or --method mc) instead"
        )
        self.outcomes = outcomes
        self.budget = budget


def get_logger(name=None):
    """
    Child logger under the package logger
    """
    if not name:
        return logger
    return logger.getChild(name)


def log_error(message, title):
    """
    Record an error under a short title
    """
    get_logger().error("%s: %s", title, message)


def log_message(message, title):
    """
    Record an informational message under a short title
    """
    get_logger().info("%s: %s", title, message)


def throw(message, exc=ValidationError):
    """
    Raise exc with message; the message is logged at debug level first
    """
    get_logger().debug("raising %s: %s", exc.__name__, message)
    raise exc(message)
