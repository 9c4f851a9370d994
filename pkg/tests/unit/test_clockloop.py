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

from squeezeclock.domain import analysis, clockloop, lonoise, spinstate
from squeezeclock.domain.entities import (
    AtomicSample, ClockTrace, Dephasing, EnsembleSpec, FeedbackLaw,
    LONoiseModel, LoopConfig, NoiseTrajectory, StateMoments)


def noiseless_moments(n_atoms=100):
    return StateMoments(n_atoms, n_atoms / 2., 0.0, 0.0, 0.0, 0.0)


def uncorrelated(n_atoms):
    return spinstate.uncorrelated_moments(EnsembleSpec(n_atoms))


def floor(traces, omega=1.0):
    taus = analysis.default_taus(traces[0].n_cycles, traces[0].ramsey_T)
    curve = analysis.allan_deviation(traces, taus, omega)
    return analysis.fit_floor(curve)


class TestErrorSignal(unittest.TestCase):

    def test_on_resonance(self):
        sample = AtomicSample(0.0, 50.0)

        self.assertEqual(0.0, clockloop.error_signal(sample, 0.0))

    def test_quadrature(self):
        sample = AtomicSample(0.0, 50.0)

        self.assertAlmostEqual(50.0,
                               clockloop.error_signal(sample, math.pi / 2))

    def test_adds_dephasing_draw(self):
        sample = AtomicSample(1.5, 50.0)

        self.assertAlmostEqual(3.5, clockloop.error_signal(sample, 0.0, 2.0))

    def test_small_phase_expansion(self):
        moments = uncorrelated(1000)
        sample = AtomicSample(3.0, 500.0)

        for phase in (1e-2, -2e-2, 5e-3):
            exact = clockloop.error_signal(sample, phase)
            linear = clockloop.linearized_error_signal(sample, phase,
                                                       moments)

            self.assertLess(abs(exact - linear), 500.0 * abs(phase) ** 3)

    def test_cubic_term(self):
        moments = uncorrelated(1000)
        sample = AtomicSample(0.0, 500.0)
        phase = 0.05

        exact = clockloop.error_signal(sample, phase)
        cubic = clockloop.linearized_error_signal(sample, phase, moments,
                                                  cubic=True)

        self.assertLess(abs(exact - cubic), 500.0 * phase ** 5 / 100)


class TestCorrections(unittest.TestCase):

    def setUp(self):
        self.moments = uncorrelated(1000)
        self.jz = self.moments.jz_mean

    def test_linear_zero(self):
        self.assertEqual(0.0, clockloop.linear_correction(0.0, self.moments,
                                                          0.1))

    def test_linear_cancels_phase(self):
        correction = clockloop.linear_correction(self.jz * 0.02,
                                                 self.moments, 0.1)

        self.assertAlmostEqual(-0.2, correction)

    def test_linear_gain(self):
        correction = clockloop.linear_correction(self.jz * 0.02,
                                                 self.moments, 0.1, 0.5)

        self.assertAlmostEqual(-0.1, correction)

    def test_nonlinear_small_signal(self):
        ratio = 0.01
        linear = clockloop.linear_correction(self.jz * ratio, self.moments,
                                             1.0)
        nonlinear = clockloop.nonlinear_correction(self.jz * ratio,
                                                   self.moments, 1.0)

        self.assertAlmostEqual(ratio ** 2 / 6, nonlinear / linear - 1,
                               delta=1e-8)

    def test_nonlinear_inverts_sine(self):
        for phase in (-1.2, 0.3, 1.5):
            signal = clockloop.error_signal(AtomicSample(0.0, self.jz),
                                            phase)

            self.assertAlmostEqual(
                -phase / 0.5,
                clockloop.nonlinear_correction(signal, self.moments, 0.5))

    def test_nonlinear_clamped(self):
        correction = clockloop.nonlinear_correction(2 * self.jz,
                                                    self.moments, 0.5, 0.8)

        self.assertAlmostEqual(-0.8 * (math.pi / 2) / 0.5, correction)


class TestRunClock(unittest.TestCase):

    def test_noiseless_fixed_point(self):
        config = LoopConfig(0.1, 64, steps_per_cycle=4)

        trace = clockloop.run_clock(config, LONoiseModel('none'),
                                    noiseless_moments())

        self.assertTrue(np.all(trace.correction == 0))
        self.assertTrue(np.all(trace.slaved_freq.samples == 0))
        self.assertEqual(0.0, clockloop.mean_frequency_offset(trace, 64))

    def test_trace_shape(self):
        config = LoopConfig(0.2, 32, steps_per_cycle=8)
        noise = LONoiseModel('white_fm', gamma=0.05)

        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        self.assertEqual(32, trace.n_cycles)
        self.assertEqual(256, trace.slaved_freq.n_steps)
        self.assertAlmostEqual(32 * 0.2, trace.slaved_freq.span)

    def test_phase_matches_slaved_record(self):
        config = LoopConfig(0.2, 32, steps_per_cycle=8)
        noise = LONoiseModel('white_fm', gamma=0.05)

        trace = clockloop.run_clock(config, noise, uncorrelated(100), 2)

        np.testing.assert_allclose(
            trace.phase_o,
            lonoise.cycle_phases(trace.slaved_freq, 8), atol=1e-12)
        self.assertAlmostEqual(
            lonoise.accumulate_phase(trace.slaved_freq, 0, 8) / 0.2,
            clockloop.mean_frequency_offset(trace, 1))

    def test_steering_persists(self):
        config = LoopConfig(0.2, 16, steps_per_cycle=4)
        noise = LONoiseModel('white_fm', gamma=0.05)

        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        applied = np.concatenate(([0.0], np.cumsum(trace.correction)[:-1]))
        rng = clockloop.trial_stream(0, 0)
        free = lonoise.cycle_phases(
            lonoise.gen_white_fm(noise, 0.05, 64, rng), 4)
        np.testing.assert_allclose(trace.phase_o, free + 0.2 * applied,
                                   atol=1e-12)

    def test_deterministic(self):
        config = LoopConfig(0.1, 16, master_seed=11)
        noise = LONoiseModel('white_fm', gamma=0.1)
        moments = uncorrelated(100)

        first = clockloop.run_clock(config, noise, moments, 3)
        second = clockloop.run_clock(config, noise, moments, 3)
        other = clockloop.run_clock(config, noise, moments, 4)

        np.testing.assert_array_equal(first.error_signal,
                                      second.error_signal)
        self.assertFalse(np.array_equal(first.error_signal,
                                        other.error_signal))

    def test_run_trials_ordered(self):
        config = LoopConfig(0.1, 16, trials=3, master_seed=5)
        noise = LONoiseModel('white_fm', gamma=0.1)
        moments = uncorrelated(100)

        class ReversedExecutor(object):
            def map(self, fn, items):
                results = [fn(item) for item in reversed(list(items))]
                return list(reversed(results))

        traces = clockloop.run_trials(config, noise, moments,
                                      ReversedExecutor())

        for index, trace in enumerate(traces):
            expected = clockloop.run_clock(config, noise, moments, index)
            np.testing.assert_array_equal(expected.phase_o, trace.phase_o)

    def test_rejects_flicker_fast_mode(self):
        config = LoopConfig(0.1, 16, mode='fast')
        noise = LONoiseModel('flicker_fm', gamma=0.1, t_ref=0.1)

        with self.assertRaises(clockloop.LoopException):
            clockloop.run_clock(config, noise, uncorrelated(100))

    def test_fast_mode_trace(self):
        config = LoopConfig(0.1, 16, mode='fast')
        noise = LONoiseModel('white_fm', gamma=0.1)

        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        self.assertEqual(16, trace.slaved_freq.n_steps)
        self.assertAlmostEqual(trace.phase_o[3] / 0.1,
                               trace.slaved_freq.samples[3])

    def test_free_running_has_no_corrections(self):
        config = LoopConfig(0.1, 16, feedback=FeedbackLaw('none'))
        noise = LONoiseModel('white_fm', gamma=0.1)

        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        self.assertTrue(np.all(trace.correction == 0))

    def test_nonlinear_tracks_beyond_quadrature(self):
        config = LoopConfig(0.1, 256, mode='fast',
                            feedback=FeedbackLaw('nonlinear'))
        noise = LONoiseModel('white_fm', gamma=10.0)

        trace = clockloop.run_clock(config, noise, noiseless_moments())

        free = lonoise.draw_fast_phases(noise, 0.1, 256,
                                        clockloop.trial_stream(0, 0))
        resolved = np.abs(free) < math.pi / 2
        self.assertTrue(np.any(np.abs(trace.phase_o[resolved]) > math.pi / 2))
        np.testing.assert_allclose(
            -trace.phase_o[resolved] / 0.1, trace.correction[resolved],
            atol=1e-9)

    def test_predicted_phase(self):
        white = LONoiseModel('white_fm', gamma=1.0)
        nonlinear = LoopConfig(0.2, 16, feedback=FeedbackLaw('nonlinear'))

        self.assertAlmostEqual(
            0.6, clockloop.predicted_phase(nonlinear, white, 3.0))
        self.assertEqual(0.0, clockloop.predicted_phase(
            LoopConfig(0.2, 16), white, 3.0))
        self.assertEqual(0.0, clockloop.predicted_phase(
            nonlinear, LONoiseModel('flicker_fm', 1.0, t_ref=0.2), 3.0))

    def test_rejects_negative_seed(self):
        with self.assertRaises(clockloop.LoopException):
            clockloop.trial_stream(-1, 0)


class TestClosedLoopStability(unittest.TestCase):
    N_ATOMS = 1000
    RAMSEY_T = 0.01
    GAMMA = 1.0

    def run_floor(self, **fields):
        config = LoopConfig(self.RAMSEY_T, 4096, steps_per_cycle=8,
                            trials=8, master_seed=21)
        config = config.replace(**fields)
        noise = LONoiseModel('white_fm', self.GAMMA)
        traces = clockloop.run_trials(config, noise,
                                      uncorrelated(self.N_ATOMS))
        return floor(traces)

    def expected_floor(self, extra_variance=0.0):
        jz = self.N_ATOMS / 2.
        variance = self.N_ATOMS / 4. + extra_variance
        return math.sqrt(variance) / (math.sqrt(self.RAMSEY_T) * jz)

    def test_white_floor(self):
        fit = self.run_floor()

        self.assertFalse(fit.flagged)
        self.assertAlmostEqual(1.0, fit.coeff / self.expected_floor(),
                               delta=0.1)

    def test_linearized_floor(self):
        fit = self.run_floor(linearized=True)

        self.assertAlmostEqual(1.0, fit.coeff / self.expected_floor(),
                               delta=0.05)

    def test_gain_insensitive(self):
        reference = self.run_floor().coeff

        for gain in (0.8, 1.2):
            fit = self.run_floor(feedback=FeedbackLaw('linear', gain))
            self.assertAlmostEqual(1.0, fit.coeff / reference, delta=0.1)

    def test_nonlinear_floor(self):
        fit = self.run_floor(feedback=FeedbackLaw('nonlinear'))

        self.assertAlmostEqual(1.0, fit.coeff / self.expected_floor(),
                               delta=0.1)

    def test_independent_dephasing(self):
        config = LoopConfig(self.RAMSEY_T, 4096, trials=8, mode='fast',
                            master_seed=3,
                            dephasing=Dephasing(1.0 / self.RAMSEY_T))
        traces = clockloop.run_trials(config, LONoiseModel('none'),
                                      uncorrelated(self.N_ATOMS))

        fit = floor(traces)

        expected = self.expected_floor(self.N_ATOMS / 4.)
        self.assertAlmostEqual(1.0, fit.coeff / expected, delta=0.1)

    def test_collective_dephasing(self):
        config = LoopConfig(self.RAMSEY_T, 4096, trials=8, mode='fast',
                            master_seed=4,
                            dephasing=Dephasing(0.1, 'collective'))
        traces = clockloop.run_trials(config, LONoiseModel('none'),
                                      uncorrelated(self.N_ATOMS))

        fit = floor(traces)

        jz = self.N_ATOMS / 2.
        expected = self.expected_floor(jz ** 2 * 0.1 * self.RAMSEY_T)
        self.assertAlmostEqual(1.0, fit.coeff / expected, delta=0.1)

    def test_slaved_spectrum_suppressed(self):
        config = LoopConfig(self.RAMSEY_T, 8192, steps_per_cycle=16)
        noise = LONoiseModel('white_fm', self.GAMMA)

        trace = clockloop.run_clock(config, noise, noiseless_moments(1000))
        spectrum = analysis.psd_welch(trace.slaved_freq, 8192, 0.5)

        low = spectrum.freqs < 2.0
        self.assertLess(np.mean(spectrum.psd[low]), 0.2 * 2 * self.GAMMA)


class TestMeanFrequencyOffset(unittest.TestCase):

    def constant_trace(self, value):
        n = 8
        slaved = NoiseTrajectory(0.05, np.full(n * 4, value))
        return ClockTrace(0.2, np.full(n, value * 0.2), np.zeros(n),
                          np.zeros(n), slaved)

    def test_constant(self):
        trace = self.constant_trace(1.5)

        for n_sub in (1, 3, 8):
            self.assertAlmostEqual(
                1.5, clockloop.mean_frequency_offset(trace, n_sub))

    def test_out_of_range(self):
        trace = self.constant_trace(0.0)

        for n_sub in (0, 9):
            with self.assertRaises(clockloop.LoopException):
                clockloop.mean_frequency_offset(trace, n_sub)

    def test_sum_of_cycle_phases(self):
        config = LoopConfig(0.1, 32, steps_per_cycle=4)
        noise = LONoiseModel('white_fm', gamma=0.5)
        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        self.assertAlmostEqual(
            np.sum(trace.phase_o[:10]) / (10 * 0.1),
            clockloop.mean_frequency_offset(trace, 10))

    def test_corrected_phases(self):
        config = LoopConfig(0.1, 32, steps_per_cycle=4)
        noise = LONoiseModel('white_fm', gamma=0.5)
        trace = clockloop.run_clock(config, noise, uncorrelated(100))

        np.testing.assert_allclose(
            trace.phase_o + 0.1 * trace.correction,
            clockloop.corrected_cycle_phases(trace))
