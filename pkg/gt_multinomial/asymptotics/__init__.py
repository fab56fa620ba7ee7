# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from .covariance import AsymptoticCovariance, DeltaMethod, covariance_matrix
from .bias import FirstOrderBias, first_order_bias

__all__ = ['AsymptoticCovariance', 'DeltaMethod', 'covariance_matrix', 'FirstOrderBias', 'first_order_bias']
