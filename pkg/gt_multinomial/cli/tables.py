# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

"""
Parameter grids of the reproduction targets.
"""

from gt_multinomial.model.types import PoolCounts, PoolDesign

# Boundary probability grid
# -------------------------
BOUNDARY_POINTS = [(0.045, 0.045, 0.005), (0.095, 0.045, 0.005), (0.1, 0.1, 0.1), (0.25, 0.05, 0.15)]
BOUNDARY_K = [2, 5, 10, 25]
BOUNDARY_N = [5, 10, 15, 25, 50, 100, 500, 1000]

# EM against Nelder-Mead
# ----------------------
EM_START_COUNTS = PoolCounts(3, 25, 5, 2)
EM_START_DESIGN = PoolDesign(k=10, n=35)
# printed starting values (p10, p01, p11); EM uses the first two
EM_STARTS = [
    (0.176, 0.270, 0.429),
    (0.332, 0.349, 0.244),
    (0.058, 0.192, 0.164),
    (0.164, 0.329, 0.213),
    (0.346, 0.133, 0.271),
    (0.110, 0.339, 0.065),
    (0.368, 0.013, 0.364),
    (0.149, 0.210, 0.262),
    (0.086, 0.380, 0.307),
    (0.053, 0.355, 0.202),
]

# Application points
# ------------------
APPLICATION_POINTS = {
    "table3": (0.067, 0.028, 0.019),
    # printed to three decimals as (0.144, 0.158, 0.178)
    "table4": (0.144, 0.1584, 0.1776),
}
APPLICATION_N = [25, 50, 100, 250]
APPLICATION_K = [1, 2, 5, 10, 15, 20, 25]

# Per-component grids
# -------------------
COMPONENT_POINTS = [
    (0.001, 0.001, 0.0001),
    (0.045, 0.045, 0.005),
    (0.095, 0.045, 0.005),
    (0.1, 0.1, 0.1),
    (0.15, 0.1, 0.2),
    (0.25, 0.05, 0.15),
]
COMPONENT_N = [10, 25, 50, 100]
# target -> (k, metric)
COMPONENT_TABLES = {
    "table5": (2, "relative_bias"),
    "table6": (10, "relative_bias"),
    "table7": (2, "mse"),
    "table8": (10, "mse"),
}

# Figure series
# -------------
FIGURE_COMPARISON_N = 25
FIGURE_COMPARISON_K = [2, 10]

TARGETS = ["table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8", "figures"]
