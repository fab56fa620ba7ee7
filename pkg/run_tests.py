#!/usr/bin/env python
# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import sys
import os
import unittest

# Add the current directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# group -> test modules; slow reproduction checks need GT_MULTINOMIAL_SLOW_TESTS=1
TEST_GROUPS = {
    "model": ["gt_multinomial.model.test_mapping", "gt_multinomial.model.test_likelihood"],
    "estimators": [
        "gt_multinomial.estimators.test_closed_form",
        "gt_multinomial.estimators.test_em",
        "gt_multinomial.estimators.test_simplex",
    ],
    "asymptotics": ["gt_multinomial.asymptotics.test_covariance", "gt_multinomial.asymptotics.test_convergence"],
    "risk": [
        "gt_multinomial.risk.test_engine",
        "gt_multinomial.risk.test_application_grid",
        "gt_multinomial.risk.test_monte_carlo",
    ],
    "cli": ["gt_multinomial.cli.test_output", "gt_multinomial.cli.test_main"],
}


def build_suite(modules):
    """Every TestCase class of the given modules"""
    loader = unittest.TestLoader()
    test_suite = unittest.TestSuite()
    for name in modules:
        test_suite.addTests(loader.loadTestsFromName(name))
    return test_suite


def run_all_tests():
    """Run all tests for gt_multinomial"""
    modules = [name for group in TEST_GROUPS.values() for name in group]
    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(build_suite(modules))

    # Return success status
    return result.wasSuccessful()


def run_specific_test(test_name):
    """Run one test group"""
    if test_name not in TEST_GROUPS:
        print(f"Unknown test group: {test_name}")
        print("Available test groups:")
        for name in TEST_GROUPS:
            print(f"  - {name}")
        return False

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(build_suite(TEST_GROUPS[test_name]))

    # Return success status
    return result.wasSuccessful()


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Run specific test group
        success = run_specific_test(sys.argv[1])
    else:
        # Run all tests
        success = run_all_tests()

    # Exit with appropriate code
    sys.exit(0 if success else 1)
