# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import unittest

from gt_multinomial.cli.tables import EM_STARTS
from gt_multinomial.estimators.closed_form import ClosedFormEstimators
from gt_multinomial.estimators.em import EmAlgorithm
from gt_multinomial.estimators.simplex import nelder_mead_reference
from gt_multinomial.model.likelihood import Likelihood
from gt_multinomial.model.types import PoolCounts, PoolDesign, TraitPrevalence
from gt_multinomial.utils import ValidationError


class TestNelderMeadReference(unittest.TestCase):
    def setUp(self):
        self.x = PoolCounts(3, 25, 5, 2)
        self.design = PoolDesign(k=10, n=35)

    def test_never_beats_global_maximizer(self):
        """Test that no start improves on EM, and every run improves on its start"""
        best = EmAlgorithm.mle(self.x, self.design).full_log_likelihood
        for start in EM_STARTS:
            p = TraitPrevalence(*start)
            result = nelder_mead_reference(self.x, self.design, p)
            self.assertLessEqual(result.full_log_likelihood, best + 1e-6)
            self.assertGreaterEqual(result.log_likelihood, Likelihood.log_likelihood(p, self.x, self.design))
            self.assertTrue(result.estimate.in_closure(tolerance=0.0))
            self.assertGreater(result.iterations, 0)

    def test_stagnates_against_the_boundary(self):
        """Test that at least one published start stalls well short of the EM maximum"""
        em = EmAlgorithm.mle(self.x, self.design).full_log_likelihood
        finals = [nelder_mead_reference(self.x, self.design, TraitPrevalence(*start)).full_log_likelihood
            for start in EM_STARTS]
        self.assertLess(min(finals), -9.0)
        self.assertAlmostEqual(em, -8.737, delta=1e-3)
        # most starts still reach the maximum
        self.assertGreaterEqual(sum(abs(value - em) < 1e-2 for value in finals), 5)

    def test_agrees_with_closed_form_inside_region(self):
        """Test that the simplex search finds the interior closed-form maximum"""
        x = PoolCounts(5, 3, 1, 1)
        design = PoolDesign(k=2, n=10)
        expected = ClosedFormEstimators.mle_closed_form(x, design)
        result = nelder_mead_reference(x, design, TraitPrevalence(0.2, 0.1, 0.05))
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.estimate.p10, expected.p10, delta=1e-3)
        self.assertAlmostEqual(result.estimate.p01, expected.p01, delta=1e-3)
        self.assertAlmostEqual(result.estimate.p11, expected.p11, delta=1e-3)

    def test_start_must_be_interior(self):
        """Test that a boundary start is rejected"""
        with self.assertRaises(ValidationError):
            nelder_mead_reference(self.x, self.design, TraitPrevalence(0.5, 0.5, 0.0))
