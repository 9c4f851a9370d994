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

import numpy as np
from scipy import signal, stats

from squeezeclock.domain import lonoise
from squeezeclock.domain.entities import LONoiseModel, NoiseTrajectory


def window_phases(traj, steps):
    return lonoise.cycle_phases(traj, steps)


class TestGenWhiteFM(unittest.TestCase):

    def test_null_noise(self):
        model = LONoiseModel('white_fm', gamma=0.0)

        traj = lonoise.gen_white_fm(model, 0.1, 100, np.random.default_rng(0))

        self.assertTrue(np.all(traj.samples == 0))
        self.assertEqual(100, traj.n_steps)

    def test_window_variance(self):
        model = LONoiseModel('white_fm', gamma=1.0)
        traj = lonoise.gen_white_fm(model, 0.01, 10 ** 6,
                                    np.random.default_rng(1))

        phases = window_phases(traj, 100)

        self.assertEqual(10 ** 4, phases.size)
        self.assertLess(abs(np.mean(phases ** 2) - 1.0),
                        4 * math.sqrt(2.0 / phases.size))

    def test_variance_linear_in_window(self):
        model = LONoiseModel('white_fm', gamma=2.0)
        traj = lonoise.gen_white_fm(model, 0.01, 10 ** 6,
                                    np.random.default_rng(2))
        windows = np.array([1, 10, 100])

        variances = [np.mean(window_phases(traj, w) ** 2) for w in windows]
        fit = stats.linregress(np.log(windows), np.log(variances))

        self.assertAlmostEqual(1.0, fit.slope, delta=0.05)

    def test_flat_spectrum(self):
        model = LONoiseModel('white_fm', gamma=1.0)
        dt = 0.01
        traj = lonoise.gen_white_fm(model, dt, 2 ** 18,
                                    np.random.default_rng(3))

        freqs, psd = signal.welch(traj.samples, fs=1 / dt, nperseg=1024)

        self.assertAlmostEqual(2.0, np.mean(psd[1:-1]), delta=0.4)

    def test_rejects_bad_grid(self):
        model = LONoiseModel('white_fm', gamma=1.0)
        rng = np.random.default_rng(0)

        for dt, steps in ((0.0, 10), (-1.0, 10), (0.1, 0)):
            with self.assertRaises(lonoise.NoiseException):
                lonoise.gen_white_fm(model, dt, steps, rng)

    def test_rejects_other_kind(self):
        model = LONoiseModel('flicker_fm', gamma=1.0, t_ref=1.0)

        with self.assertRaises(lonoise.NoiseException):
            lonoise.gen_white_fm(model, 0.1, 10, np.random.default_rng(0))

    def test_deterministic(self):
        model = LONoiseModel('white_fm', gamma=1.0)

        first = lonoise.gen_white_fm(model, 0.1, 50, np.random.default_rng(5))
        second = lonoise.gen_white_fm(model, 0.1, 50,
                                      np.random.default_rng(5))

        np.testing.assert_array_equal(first.samples, second.samples)


class TestFlickerSynthesis(unittest.TestCase):

    def setUp(self):
        self.model = LONoiseModel('flicker_fm', gamma=0.5, t_ref=1.0)

    def test_calibrated_at_t_ref(self):
        synthesis = lonoise.FlickerSynthesis(self.model, 0.1, 100)

        self.assertAlmostEqual(0.25, synthesis.window_variance(1.0),
                               places=12)

    def test_band_reaches_floor(self):
        synthesis = lonoise.FlickerSynthesis(self.model, 0.1, 100)

        self.assertGreaterEqual(synthesis.length * 0.1, 10 ** 4)
        self.assertAlmostEqual(1e-4, synthesis.f_min)

    def test_window_variance_exponent(self):
        synthesis = lonoise.FlickerSynthesis(self.model, 0.01, 1000)
        windows = np.logspace(-1, 1, 9)

        variances = [synthesis.window_variance(w) for w in windows]
        fit = stats.linregress(np.log(windows), np.log(variances))

        self.assertAlmostEqual(2.0, fit.slope, delta=0.2)

    def test_empirical_variance_at_t_ref(self):
        dt = 0.1
        variances = []
        for seed in range(20):
            traj = lonoise.gen_flicker_fm(self.model, dt, 10 ** 5,
                                          np.random.default_rng(seed))
            variances.append(np.mean(window_phases(traj, 10) ** 2))

        self.assertAlmostEqual(0.25, np.mean(variances), delta=0.25 * 0.15)

    def test_spectrum_slope(self):
        model = LONoiseModel('flicker_fm', gamma=1.0, t_ref=1.0)
        traj = lonoise.gen_flicker_fm(model, 1.0, 2 ** 17,
                                      np.random.default_rng(4))

        freqs, psd = signal.welch(traj.samples, fs=1.0, nperseg=2 ** 14)
        band = (freqs >= 1e-3) & (freqs <= 0.3)
        fit = stats.linregress(np.log(freqs[band]), np.log(psd[band]))

        self.assertAlmostEqual(-1.0, fit.slope, delta=0.1)

    def test_null_noise(self):
        model = LONoiseModel('flicker_fm', gamma=0.0, t_ref=1.0)

        traj = lonoise.gen_flicker_fm(model, 0.1, 20,
                                      np.random.default_rng(0))

        self.assertTrue(np.all(traj.samples == 0))

    def test_rejects_short_span(self):
        with self.assertRaises(lonoise.NoiseException):
            lonoise.gen_flicker_fm(self.model, 0.1, 5,
                                   np.random.default_rng(0))

    def test_deterministic(self):
        first = lonoise.gen_flicker_fm(self.model, 0.1, 100,
                                       np.random.default_rng(9))
        second = lonoise.gen_flicker_fm(self.model, 0.1, 100,
                                        np.random.default_rng(9))

        np.testing.assert_array_equal(first.samples, second.samples)


class TestGenTrajectory(unittest.TestCase):

    def test_none_is_zero(self):
        traj = lonoise.gen_trajectory(LONoiseModel('none'), 0.5, 8,
                                      np.random.default_rng(0))

        self.assertEqual(4.0, traj.span)
        self.assertTrue(np.all(traj.samples == 0))

    def test_dispatch_white(self):
        model = LONoiseModel('white_fm', gamma=1.0)

        expected = lonoise.gen_white_fm(model, 0.1, 10,
                                        np.random.default_rng(3))
        traj = lonoise.gen_trajectory(model, 0.1, 10,
                                      np.random.default_rng(3))

        np.testing.assert_array_equal(expected.samples, traj.samples)


class TestAccumulatePhase(unittest.TestCase):

    def test_zero(self):
        traj = NoiseTrajectory(0.1, np.zeros(10))

        self.assertEqual(0.0, lonoise.accumulate_phase(traj, 0, 10))

    def test_constant(self):
        traj = NoiseTrajectory(0.25, np.full(16, 3.0))

        self.assertAlmostEqual(3.0, lonoise.accumulate_phase(traj, 4, 4))

    def test_left_riemann(self):
        traj = NoiseTrajectory(0.5, np.arange(6.0))

        self.assertEqual(0.5 * (2 + 3), lonoise.accumulate_phase(traj, 2, 2))

    def test_out_of_bounds(self):
        traj = NoiseTrajectory(0.1, np.zeros(10))

        for start, steps in ((-1, 2), (9, 2), (0, 0)):
            with self.assertRaises(lonoise.NoiseException):
                lonoise.accumulate_phase(traj, start, steps)

    def test_cycle_phases_match(self):
        traj = NoiseTrajectory(0.1, np.random.default_rng(0).normal(size=40))

        phases = lonoise.cycle_phases(traj, 8)

        self.assertEqual(5, phases.size)
        self.assertAlmostEqual(lonoise.accumulate_phase(traj, 16, 8),
                               phases[2])


class TestFastPhases(unittest.TestCase):

    def test_variance(self):
        model = LONoiseModel('white_fm', gamma=0.1)

        phases = lonoise.draw_fast_phases(model, 0.5, 10 ** 5,
                                          np.random.default_rng(0))

        self.assertAlmostEqual(0.05, np.var(phases),
                               delta=4 * 0.05 * math.sqrt(2e-5))

    def test_rejects_flicker(self):
        model = LONoiseModel('flicker_fm', gamma=0.1, t_ref=1.0)

        with self.assertRaises(lonoise.NoiseException):
            lonoise.draw_fast_phases(model, 1.0, 10,
                                     np.random.default_rng(0))

    def test_none(self):
        phases = lonoise.draw_fast_phases(LONoiseModel('none'), 1.0, 10,
                                          np.random.default_rng(0))

        self.assertTrue(np.all(phases == 0))


class TestPhaseVariance(unittest.TestCase):

    def test_laws(self):
        white = LONoiseModel('white_fm', gamma=0.2)
        flicker = LONoiseModel('flicker_fm', gamma=0.2, t_ref=1.0)

        self.assertAlmostEqual(0.4, lonoise.phase_variance(white, 2.0))
        self.assertAlmostEqual(0.16, lonoise.phase_variance(flicker, 2.0))
        self.assertEqual(0.0, lonoise.phase_variance(LONoiseModel('none'),
                                                     2.0))
