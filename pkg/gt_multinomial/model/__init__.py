# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from .types import TraitPrevalence, PoolDesign, ThetaVector, PoolCounts, ReducedPrevalence
from .mapping import PoolingMap
from .likelihood import Likelihood, full_log_likelihood

__all__ = ['TraitPrevalence', 'PoolDesign', 'ThetaVector', 'PoolCounts', 'ReducedPrevalence',
	'PoolingMap', 'Likelihood', 'full_log_likelihood']
