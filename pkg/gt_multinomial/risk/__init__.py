# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from .summary import RiskMethod, RiskSummary
from .sample_space import chunks, counts_with_x00, enumerate_sample_space, log_pmf
from .engine import RiskEngine, boundary_probability, estimate_rows, exact_risk
from .monte_carlo import MonteCarloRisk, monte_carlo_risk

__all__ = ['RiskMethod', 'RiskSummary', 'chunks', 'counts_with_x00', 'enumerate_sample_space', 'log_pmf',
	'RiskEngine', 'boundary_probability', 'estimate_rows', 'exact_risk', 'MonteCarloRisk', 'monte_carlo_risk']
