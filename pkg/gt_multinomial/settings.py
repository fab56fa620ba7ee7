app_name = "gt_multinomial"
app_title = "Two-Trait Group Testing Estimation"

# Tolerances
# ----------
# membership_tolerance is added to 1 before comparing the closure statistic,
# so knife-edge count vectors (statistic exactly 1) stay in the closed region.
membership_tolerance = 1e-12
# estimator cells in (-clamp_tolerance, 0) are floating cancellation and are set to 0
clamp_tolerance = 1e-12
# probability checks on TraitPrevalence / ThetaVector
probability_tolerance = 1e-12
relative_bias_floor = 1e-12

# EM Algorithm
# ------------
em_epsilon = 1e-10
em_max_iterations = 100000
em_initial_pstar = (0.25, 0.25)
em_denominator_floor = 1e-300

# Nelder-Mead reference optimizer
# -------------------------------
# initial simplex: start plus step * max|start| on each axis
nelder_mead_step = 0.1
nelder_mead_max_iterations = 500
# stop once the simplex function values spread less than
# reltol * (|f(start)| + reltol); sqrt of double epsilon
nelder_mead_reltol = 1.490116119384765625e-08
nelder_mead_penalty = 1e10

# Risk engine
# -----------
enumeration_budget = 50_000_000
# outcomes with log pmf below this never reach an estimator
prune_log_weight = -60.0
mass_tolerance = 1e-10

# Monte Carlo
# -----------
monte_carlo_samples = 1_000_000
monte_carlo_seed = 20190101
rng_algorithm = "numpy.random.Philox(4x64, 10 rounds) via numpy.random.Generator"

# Output
# ------
csv_precision = 4
reproduce_precision = {
	"table1": 4,
	"table2": 3,
	"table3": 3,
	"table4": 3,
	"table5": 3,
	"table6": 3,
	"table7": 3,
	"table8": 3,
	"figures": 6,
}
