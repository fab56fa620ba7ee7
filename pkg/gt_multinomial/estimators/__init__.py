# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from .config import EmConfig, EstimateResult, EstimatePath, EstimatorKind
from .closed_form import ClosedFormEstimators
from .em import EmAlgorithm, estimate
from .simplex import SimplexResult, nelder_mead_reference

__all__ = ['EmConfig', 'EstimateResult', 'EstimatePath', 'EstimatorKind', 'ClosedFormEstimators',
	'EmAlgorithm', 'estimate', 'SimplexResult', 'nelder_mead_reference']
