# *****************************************************************************
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
#
# ******************************************************************************

import math
import unittest

from mock import patch
import numpy as np

from squeezeclock.domain import analysis, spinstate, theory
from squeezeclock.domain.entities import (
    Dephasing, EnsembleSpec, StateMoments)


def uncorrelated(n_atoms):
    return spinstate.uncorrelated_moments(EnsembleSpec(n_atoms))


def gaussian(n_atoms, kappa):
    return spinstate.gaussian_moments(
        EnsembleSpec(n_atoms, 'gaussian', kappa))


class TestSigmaY(unittest.TestCase):

    def test_projection_limit(self):
        sigma = theory.sigma_y_floor(uncorrelated(100), 0.3, 0.0, 0.0, 1.0,
                                   1.0, 1.0)

        self.assertAlmostEqual(sigma, 0.1)

    def test_scales_with_time_and_frequency(self):
        moments = uncorrelated(100)

        sigma = theory.sigma_y_floor(moments, 0.0, 0.0, 0.0, 0.25, 4.0, 2.0)

        self.assertAlmostEqual(sigma, 0.05)

    def test_collective_dephasing(self):
        sigma = theory.sigma_y_floor(uncorrelated(100), 0.0, 0.01, 1.0, 1.0,
                                   1.0, 1.0)

        self.assertAlmostEqual(sigma, math.sqrt(50.0) / 50.0)

    def test_lo_phase_noise_enters_through_dJz(self):
        moments = StateMoments(100, 40.0, 4.0, 9.0, 100.0, 0.5)

        sigma = theory.sigma_y_floor(moments, 0.5, 0.0, 0.0, 1.0, 1.0, 1.0)

        self.assertAlmostEqual(sigma, math.sqrt(8.5) / 40.0)

    def test_rejects_invalid_arguments(self):
        moments = uncorrelated(100)
        with self.assertRaises(theory.TheoryException):
            theory.sigma_y_floor(moments, -0.1, 0.0, 0.0, 1.0, 1.0, 1.0)
        with self.assertRaises(theory.TheoryException):
            theory.sigma_y_floor(moments, 0.1, 0.0, 0.0, 0.0, 1.0, 1.0)
        with self.assertRaises(theory.TheoryException):
            theory.sigma_y_floor(moments, 0.1, 0.0, 0.0, 1.0, 1.0, -2.0)


class TestZeta(unittest.TestCase):

    def test_uncorrelated_constant(self):
        for n in (10, 1000, 10 ** 6):
            self.assertAlmostEqual(theory.zeta_factor(uncorrelated(n), n),
                                   3.0 / 2 ** (4.0 / 3), places=9)

    def test_squeezing_lowers_zeta(self):
        n = 10 ** 4
        squeezed = theory.zeta_factor(gaussian(n, 2 ** (1.0 / 16) * 10.0), n)

        self.assertLess(squeezed, theory.zeta_factor(uncorrelated(n), n))


class TestOptimalTime(unittest.TestCase):

    def test_linear_white(self):
        self.assertAlmostEqual(
            theory.optimal_T_linear(uncorrelated(10 ** 5), 1.0), 0.02714,
            places=4)
        self.assertAlmostEqual(
            theory.optimal_T_linear(uncorrelated(10 ** 3), 1.0), 0.1260,
            places=4)

    def test_linear_inverse_in_gamma(self):
        moments = uncorrelated(10 ** 3)

        self.assertAlmostEqual(theory.optimal_T_linear(moments, 4.0),
                               theory.optimal_T_linear(moments, 1.0) / 4.0)

    def test_linear_flicker(self):
        result = theory.optimal_T_linear(uncorrelated(10 ** 3), 1.0,
                                         'flicker_fm')

        self.assertAlmostEqual(result, 0.002 ** (1.0 / 6))

    def test_linear_without_noise(self):
        with self.assertRaises(theory.TheoryException):
            theory.optimal_T_linear(uncorrelated(100), 1.0, 'none')

    def test_nonlinear(self):
        self.assertAlmostEqual(theory.optimal_T_nonlinear(2.0), 0.05)
        with self.assertRaises(theory.TheoryException):
            theory.optimal_T_nonlinear(0.0)

    def test_nonlinear_longer_than_linear(self):
        ratio = (theory.optimal_T_nonlinear(1.0)
                 / theory.optimal_T_linear(uncorrelated(10 ** 5), 1.0))

        self.assertAlmostEqual(ratio, 3.684, places=2)

    def test_dispatch(self):
        moments = uncorrelated(10 ** 3)

        self.assertEqual(theory.optimal_T(moments, 'nonlinear', 'white_fm',
                                          1.0), 0.1)
        self.assertEqual(theory.optimal_T(moments, 'linear', 'white_fm', 1.0),
                         theory.optimal_T_linear(moments, 1.0))


class TestFactors(unittest.TestCase):

    def test_lambda(self):
        moments = uncorrelated(100)

        self.assertEqual(theory.lambda_factor(moments, 'collective'), 1.0)
        self.assertAlmostEqual(theory.lambda_factor(moments, 'independent'),
                               0.01)
        with self.assertRaises(theory.TheoryException):
            theory.lambda_factor(moments, 'partial')

    def test_phase_variance(self):
        self.assertAlmostEqual(
            theory.phase_variance_for('white_fm', 2.0, 0.1), 0.2)
        self.assertAlmostEqual(
            theory.phase_variance_for('flicker_fm', 2.0, 0.1), 0.04)
        self.assertEqual(theory.phase_variance_for('none', 2.0, 0.1), 0.0)

    def test_floor_coefficient_with_dephasing(self):
        moments = uncorrelated(100)

        floor = theory.floor_coefficient(moments, 'white_fm', 1.0, 1.0,
                                         dephasing=Dephasing(0.01,
                                                             'collective'))

        self.assertAlmostEqual(floor, math.sqrt(50.0) / 50.0)

    def test_zeta_form_against_direct_formula(self):
        # The zeta form carries the cubic servo error, which the direct
        # formula omits; their ratio at the linear optimum is 3 * 2^(-7/6).
        n = 10 ** 4
        moments = uncorrelated(n)
        ramsey_T = theory.optimal_T_linear(moments, 1.0)
        direct = theory.sigma_y_floor(moments, 0.0, 0.0, 0.0, ramsey_T, 1.0,
                                    1.0)

        prediction = theory.predict(n, 'linear', 'white_fm', 'uncorrelated')

        self.assertAlmostEqual(prediction.sigma_y / direct,
                               3.0 * 2 ** (-7.0 / 6), places=9)


class TestOptimizeKappa(unittest.TestCase):

    def test_linear_white_optimum(self):
        n = 10 ** 6

        result = theory.optimize_kappa(n, 'linear', 'white_fm')

        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.kappa / n ** 0.25, 1.044, delta=0.01)

    def test_linear_white_large_n(self):
        n = 10 ** 8

        result = theory.optimize_kappa(n, 'linear', 'white_fm')

        self.assertTrue(1.034 <= result.kappa / n ** 0.25 <= 1.054)
        self.assertTrue(1.40 <= result.value * n ** (1.0 / 6) <= 1.43)

    def test_finite_size_excess(self):
        small = theory.optimize_kappa(10 ** 4, 'linear', 'white_fm')
        large = theory.optimize_kappa(10 ** 8, 'linear', 'white_fm')

        self.assertGreater(small.value * 10 ** (4.0 / 6),
                           large.value * 10 ** (8.0 / 6))
        self.assertAlmostEqual(small.value * 10 ** (4.0 / 6), 1.4156,
                               delta=0.02 * 1.4156)

    def test_matches_brute_force_grid(self):
        n = 100
        grid = np.linspace(1.0, 10.0, 10000)
        values = [theory.zeta_factor(gaussian(n, kappa), n) for kappa in grid]
        best = int(np.argmin(values))

        result = theory.optimize_kappa(n, 'linear', 'white_fm')

        self.assertAlmostEqual(result.kappa, grid[best], delta=0.02)
        self.assertAlmostEqual(result.value / values[best], 1.0, places=5)

    def test_nonlinear_white_width_scaling(self):
        points = []
        for n in (10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7):
            kappa = theory.optimize_kappa(n, 'nonlinear', 'white_fm').kappa
            points.append((n, gaussian(n, kappa).d_jy))

        slope, _ = analysis.fit_scaling(points)

        self.assertAlmostEqual(slope, 1.0 / 3, delta=0.03)

    def test_flicker_linear_optimum_inside_range(self):
        n = 10 ** 4

        result = theory.optimize_kappa(n, 'linear', 'flicker_fm')

        self.assertTrue(result.converged)
        self.assertTrue(1.0 < result.kappa < math.sqrt(n))

    def test_unbracketed_optimum_is_flagged(self):
        with patch.object(theory, '_objective',
                               return_value=lambda kappa: kappa):
            with self.assertLogs('squeezeclock.domain.theory', 'WARNING'):
                result = theory.optimize_kappa(400, 'linear', 'white_fm')

        self.assertFalse(result.converged)
        self.assertEqual(result.kappa, 1.0)
        self.assertEqual(result.value, 1.0)

    def test_rejects_small_ensembles(self):
        with self.assertRaises(theory.TheoryException):
            theory.optimize_kappa(99, 'linear', 'white_fm')

    def test_rejects_missing_noise(self):
        with self.assertRaises(theory.TheoryException):
            theory.optimize_kappa(1000, 'linear', 'none')


class TestExponents(unittest.TestCase):

    def test_white_table(self):
        self.assertAlmostEqual(
            theory.predicted_exponents('linear', 'white_fm', 'uncorrelated'),
            -1.0 / 3)
        self.assertAlmostEqual(
            theory.predicted_exponents('linear', 'white_fm', 'squeezed'),
            -1.0 / 2)
        self.assertAlmostEqual(
            theory.predicted_exponents('nonlinear', 'white_fm',
                                       'uncorrelated'), -1.0 / 2)
        self.assertAlmostEqual(
            theory.predicted_exponents('nonlinear', 'white_fm', 'squeezed'),
            -2.0 / 3)

    def test_flicker_improvements(self):
        self.assertAlmostEqual(
            theory.predicted_improvement('linear', 'flicker_fm'), -5.0 / 24)
        self.assertAlmostEqual(
            theory.predicted_improvement('nonlinear', 'flicker_fm'), -1.0 / 6)

    def test_flicker_baselines_need_opt_in(self):
        with self.assertRaises(theory.TheoryException):
            theory.predicted_exponents('linear', 'flicker_fm', 'squeezed')

        self.assertAlmostEqual(
            theory.predicted_exponents('linear', 'flicker_fm', 'squeezed',
                                       derived=True), -5.0 / 8)
        self.assertAlmostEqual(
            theory.predicted_exponents('nonlinear', 'flicker_fm',
                                       'uncorrelated', derived=True), -0.5)

    def test_unknown_combination(self):
        with self.assertRaises(theory.TheoryException):
            theory.predicted_exponents('none', 'white_fm', 'squeezed')
        with self.assertRaises(theory.TheoryException):
            theory.predicted_exponents('linear', 'white_fm', 'spin')


class TestPredict(unittest.TestCase):

    def test_nonlinear_time(self):
        prediction = theory.predict(1000, 'nonlinear', 'white_fm',
                                    'uncorrelated', gamma=2.0)

        self.assertAlmostEqual(prediction.gamma_T_opt, 0.1)
        self.assertAlmostEqual(prediction.sigma_y,
                               math.sqrt(1.0 / (1000 * 0.05)))

    def test_uncorrelated_reports_full_width(self):
        prediction = theory.predict(400, 'linear', 'white_fm')

        self.assertEqual(prediction.kappa_opt, 20.0)
        self.assertAlmostEqual(prediction.zeta, 3.0 / 2 ** (4.0 / 3))
        self.assertAlmostEqual(prediction.scaling_exponent, -1.0 / 3)

    def test_squeezing_improves_prediction(self):
        plain = theory.predict(10 ** 4, 'linear', 'white_fm', 'uncorrelated')
        squeezed = theory.predict(10 ** 4, 'linear', 'white_fm', 'squeezed')

        self.assertLess(squeezed.sigma_y, plain.sigma_y)
        self.assertLess(squeezed.kappa_opt, plain.kappa_opt)

    def test_rejects_noiseless(self):
        with self.assertRaises(theory.TheoryException):
            theory.predict(1000, 'linear', 'none')
