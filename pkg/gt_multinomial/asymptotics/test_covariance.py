# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import unittest

import numpy as np

from gt_multinomial.asymptotics.bias import first_order_bias
from gt_multinomial.asymptotics.covariance import DeltaMethod, covariance_matrix
from gt_multinomial.estimators.config import EstimatorKind
from gt_multinomial.model.types import TraitPrevalence
from gt_multinomial.utils import ValidationError


class TestAsymptoticCovariance(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_single_unit_pools(self):
        """Test that k = 1 gives the multinomial covariance"""
        entries = covariance_matrix(TraitPrevalence(0.2, 0.3, 0.1), 1).entries()
        self.assertAlmostEqual(entries["sigma11"], 0.16, places=12)
        self.assertAlmostEqual(entries["sigma22"], 0.21, places=12)
        self.assertAlmostEqual(entries["sigma21"], -0.06, places=12)
        self.assertAlmostEqual(entries["sigma31"], -0.02, places=12)
        self.assertAlmostEqual(entries["sigma32"], -0.03, places=12)
        self.assertAlmostEqual(entries["sigma33"], 0.09, places=12)

    def test_pairs(self):
        """Test hand-derived entries at k = 2, p = (0.1, 0.1, 0.1)"""
        entries = covariance_matrix(TraitPrevalence(0.1, 0.1, 0.1), 2).entries()
        self.assertAlmostEqual(entries["sigma11"], 0.24, places=12)
        self.assertAlmostEqual(entries["sigma21"], 0.005625, places=12)
        self.assertAlmostEqual(entries["sigma31"], -0.050625, places=12)
        self.assertAlmostEqual(entries["sigma33"], 0.22125, places=12)

    def test_delta_method_oracle(self):
        """Test the closed form against the numerical delta method"""
        points = [TraitPrevalence(0.1, 0.1, 0.1), TraitPrevalence(0.045, 0.045, 0.005), TraitPrevalence(0.25, 0.05, 0.15)]
        for p in points:
            for k in (1, 2, 5, 10):
                sigma = covariance_matrix(p, k).sigma
                oracle = DeltaMethod.covariance(p, k)
                scale = np.abs(sigma).max()
                np.testing.assert_allclose(sigma, oracle, rtol=1e-6, atol=1e-6 * scale)

    def test_total_prevalence_variance(self):
        """Test that the variance of p10 + p01 + p11 matches the scalar delta method"""
        weights = np.ones(3)
        for _ in range(100):
            cells = self.rng.uniform(0.001, 0.1, size=3)
            p = TraitPrevalence(*cells)
            for k in (1, 2, 5, 10):
                sigma = covariance_matrix(p, k).sigma
                expected = DeltaMethod.total_prevalence_variance(p, k)
                self.assertAlmostEqual(weights @ sigma @ weights, expected, delta=1e-9 * max(1.0, abs(expected)))

    def test_symmetric_positive_semidefinite(self):
        """Test symmetry and non-negative eigenvalues over random interior points"""
        for _ in range(1000):
            p = TraitPrevalence(*self.rng.uniform(0.001, 0.1, size=3))
            k = int(self.rng.integers(1, 26))
            covariance = covariance_matrix(p, k)
            np.testing.assert_array_equal(covariance.sigma, covariance.sigma.T)
            scale = max(1.0, np.abs(covariance.sigma).max())
            self.assertGreaterEqual(covariance.eigenvalues().min(), -1e-10 * scale)

    def test_scaled(self):
        """Test the per-n covariance and standard errors"""
        covariance = covariance_matrix(TraitPrevalence(0.1, 0.1, 0.1), 2)
        np.testing.assert_allclose(covariance.scaled(100), covariance.sigma / 400.0)
        self.assertAlmostEqual(covariance.standard_errors(100)[0], np.sqrt(0.24 / 400.0), places=12)

    def test_boundary_prevalence(self):
        """Test that a zero cell is a domain error"""
        with self.assertRaises(ValidationError):
            covariance_matrix(TraitPrevalence(0.1, 0.0, 0.1), 2)
        with self.assertRaises(ValidationError):
            first_order_bias(TraitPrevalence(0.5, 0.3, 0.2), 2)


class TestFirstOrderBias(unittest.TestCase):
    def test_single_unit_pools(self):
        """Test that k = 1 has no first-order bias"""
        for estimator in EstimatorKind:
            bias = first_order_bias(TraitPrevalence(0.2, 0.3, 0.1), 1, estimator)
            self.assertEqual(bias.as_array().tolist(), [0.0, 0.0, 0.0])

    def test_burrows(self):
        """Test that the shrinkage estimator has no first-order bias"""
        for k in (2, 5, 25):
            bias = first_order_bias(TraitPrevalence(0.045, 0.045, 0.005), k, EstimatorKind.BURROWS)
            self.assertEqual(bias.as_array().tolist(), [0.0, 0.0, 0.0])

    def test_coefficients(self):
        """Test MLE coefficients at k = 2, p = (0.1, 0.1, 0.1)"""
        bias = first_order_bias(TraitPrevalence(0.1, 0.1, 0.1), 2, "mle")
        self.assertAlmostEqual(bias.bias10, 0.0348214, places=6)
        self.assertAlmostEqual(bias.bias01, 0.0348214, places=6)
        self.assertAlmostEqual(bias.bias11, 0.0214286, places=6)
        self.assertEqual(first_order_bias(TraitPrevalence(0.1, 0.1, 0.1), 2, "rmm"), bias)
        np.testing.assert_allclose(bias.at(100), bias.as_array() / 100.0)

    def test_coefficients_sum(self):
        """Test that the component coefficients add up to minus the p00 coefficient"""
        p = TraitPrevalence(0.25, 0.05, 0.15)
        for k in (2, 5, 10):
            bias = first_order_bias(p, k)
            factor = (k - 1) / (2.0 * k ** 2)
            self.assertAlmostEqual(bias.as_array().sum(), factor * (p.p00 ** (1 - k) - p.p00), places=10)
