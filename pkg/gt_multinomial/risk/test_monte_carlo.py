# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import os
import unittest

import numpy as np

from gt_multinomial.estimators.config import EstimatorKind
from gt_multinomial.model.types import PoolDesign, TraitPrevalence
from gt_multinomial.risk.engine import boundary_probability, exact_risk
from gt_multinomial.risk.monte_carlo import MonteCarloRisk, monte_carlo_risk
from gt_multinomial.risk.summary import RiskMethod
from gt_multinomial.utils import ValidationError

SLOW = os.environ.get("GT_MULTINOMIAL_SLOW_TESTS") == "1"


def within(test, estimate, exact, standard_error, width=4.0):
    """assert |estimate - exact| <= width standard errors, with a floor for exact zeros"""
    gap = np.abs(np.asarray(estimate) - np.asarray(exact))
    bound = width * np.asarray(standard_error) + 1e-12
    test.assertTrue(np.all(gap <= bound), f"{estimate} vs {exact} (se {standard_error})")


class TestMonteCarloRisk(unittest.TestCase):
    def test_deterministic(self):
        """Test that a fixed seed reproduces the summary exactly"""
        p = TraitPrevalence(0.067, 0.028, 0.019)
        design = PoolDesign(k=10, n=25)
        first = monte_carlo_risk(p, design, EstimatorKind.MLE, samples=20000, seed=42)
        second = monte_carlo_risk(p, design, EstimatorKind.MLE, samples=20000, seed=42)
        self.assertEqual(first.as_row(), second.as_row())
        self.assertEqual(first.method, RiskMethod.MONTE_CARLO)
        self.assertEqual((first.samples, first.seed), (20000, 42))

    def test_seed_changes_draws(self):
        """Test that different seeds give different estimates"""
        p = TraitPrevalence(0.1, 0.1, 0.1)
        design = PoolDesign(k=2, n=10)
        first = monte_carlo_risk(p, design, samples=5000, seed=1)
        second = monte_carlo_risk(p, design, samples=5000, seed=2)
        self.assertNotEqual(first.expectation.tolist(), second.expectation.tolist())

    def test_batches(self):
        """Test that a sample count spanning several batches is honoured"""
        summary = monte_carlo_risk(TraitPrevalence(0.1, 0.1, 0.1), PoolDesign(k=2, n=5), samples=250001, seed=5)
        self.assertEqual(summary.samples, 250001)
        self.assertEqual(summary.standard_errors["mse"].shape, (3,))

    def test_agrees_with_exact(self):
        """Test agreement with exact enumeration within four standard errors"""
        cases = [
            (TraitPrevalence(0.067, 0.028, 0.019), PoolDesign(k=10, n=25), EstimatorKind.MLE),
            (TraitPrevalence(0.144, 0.158, 0.178), PoolDesign(k=2, n=15), EstimatorKind.RMM),
            (TraitPrevalence(0.045, 0.045, 0.005), PoolDesign(k=5, n=10), EstimatorKind.BURROWS),
        ]
        for p, design, estimator in cases:
            with self.subTest(p=p.as_tuple(), k=design.k, n=design.n, estimator=estimator.value):
                exact = exact_risk(p, design, estimator)
                simulated = monte_carlo_risk(p, design, estimator, samples=200000, seed=11)
                errors = simulated.standard_errors
                within(self, simulated.bias, exact.bias, errors["bias"])
                within(self, simulated.mse, exact.mse, errors["mse"])
                within(self, simulated.boundary_probability, exact.boundary_probability, errors["boundary_probability"][0])
                averages = MonteCarloRisk.average_standard_errors(simulated)
                within(self, simulated.avg_mse, exact.avg_mse, averages["avg_mse"])

    @unittest.skipUnless(SLOW, "set GT_MULTINOMIAL_SLOW_TESTS=1 to run")
    def test_agrees_with_exact_random(self):
        """Test agreement on random configurations with a million draws"""
        rng = np.random.default_rng(2019)
        for index in range(20):
            p = TraitPrevalence(*rng.uniform(0.01, 0.2, size=3))
            design = PoolDesign(k=int(rng.choice([1, 2, 5, 10])), n=int(rng.integers(5, 41)))
            estimator = list(EstimatorKind)[index % 3]
            with self.subTest(p=p.as_tuple(), k=design.k, n=design.n, estimator=estimator.value):
                exact = exact_risk(p, design, estimator)
                simulated = monte_carlo_risk(p, design, estimator, samples=1000000, seed=index)
                within(self, simulated.bias, exact.bias, simulated.standard_errors["bias"])
                within(self, simulated.mse, exact.mse, simulated.standard_errors["mse"])

    def test_single_unit_pools(self):
        """Test that k = 1 simulations are unbiased up to sampling error"""
        p = TraitPrevalence(0.2, 0.3, 0.1)
        summary = monte_carlo_risk(p, PoolDesign(k=1, n=20), EstimatorKind.BURROWS, samples=50000, seed=7)
        within(self, summary.bias, np.zeros(3), summary.standard_errors["bias"])
        self.assertEqual(summary.boundary_probability, 0.0)

    def test_invalid_samples(self):
        """Test that a non-positive sample count is rejected"""
        for samples in (0, -5, 2.5):
            with self.assertRaises(ValidationError):
                monte_carlo_risk(TraitPrevalence(0.1, 0.1, 0.1), PoolDesign(k=2, n=5), samples=samples, seed=1)

    def test_invalid_seed(self):
        """Test that seeds outside the unsigned 64-bit range are rejected"""
        for seed in (-1, 2 ** 64, 1.0, True):
            with self.subTest(seed=seed):
                with self.assertRaises(ValidationError):
                    monte_carlo_risk(TraitPrevalence(0.1, 0.1, 0.1), PoolDesign(k=2, n=5), samples=10, seed=seed)


class TestMonteCarloBoundaryProbability(unittest.TestCase):
    def test_agrees_with_exact(self):
        """Test the simulated boundary probability against enumeration"""
        p = TraitPrevalence(0.1, 0.1, 0.1)
        design = PoolDesign(k=10, n=25)
        share, standard_error = MonteCarloRisk.boundary_probability(p, design, samples=200000, seed=99)
        within(self, share, boundary_probability(p, design), standard_error)

    def test_degenerate_prevalence(self):
        """Test a near-zero prevalence where almost every pool is negative"""
        p = TraitPrevalence(1e-9, 1e-9, 1e-9)
        design = PoolDesign(k=2, n=10)
        share, _ = MonteCarloRisk.boundary_probability(p, design, samples=100000, seed=3)
        self.assertLessEqual(abs(share - boundary_probability(p, design)), 1e-6)

    def test_deterministic(self):
        """Test that a fixed seed repeats the estimate"""
        p = TraitPrevalence(0.045, 0.045, 0.005)
        design = PoolDesign(k=2, n=1000)
        first = MonteCarloRisk.boundary_probability(p, design, samples=10000, seed=8)
        self.assertEqual(first, MonteCarloRisk.boundary_probability(p, design, samples=10000, seed=8))
