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

"""Closed servo loop between the local oscillator and the atoms.

Cycle ``k`` (t in [(k-1)T, kT)) accumulates the LO phase from the free
noise plus every correction applied at earlier detection times. The error
signal keeps the full trigonometric form; the correction is applied as a
frequency step at ``t_k`` and persists.

Under white FM the nonlinear servo interrogates against the phase its own
steering predicts for the cycle and adds that phase back to the arcsin
estimate, so the arcsin only resolves the free-running part.
"""

import functools
import logging
import math

import numpy as np

from squeezeclock.domain import lonoise
from squeezeclock.domain.entities import (
    AtomicSample, ClockTrace, DEPHASING_COLLECTIVE, FEEDBACK_LINEAR,
    FEEDBACK_NONLINEAR, MODE_FAST, NOISE_FLICKER, NOISE_WHITE,
    NoiseTrajectory)
from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require
from squeezeclock.domain.spinstate import sample_atomic_noise

LOG = logging.getLogger(__name__)

LC_ERR_FAST_FLICKER = 'Flicker noise needs trajectory mode, got fast mode'
LC_ERR_N_SUB = 'n_sub must be in [1, {}], got {}'
LC_ERR_SEED = 'Seeds and trial indices must be >= 0, got {} and {}'


class LoopException(SqueezeClockException):
    """Raised on invalid closed-loop requests."""

    pass


def error_signal(sample, phase, dephasing_draw=0.0):
    """Measured Ramsey signal J_z sin(phase) + J_y cos(phase) + draw.

    :type sample: AtomicSample
    :param sample: Projection-noise realization of the cycle.

    :type phase: float
    :param phase: Phase of the cycle in rad, collective dephasing included.

    :type dephasing_draw: float
    :param dephasing_draw: Aggregate independent-dephasing contribution.

    :rtype: float
    """

    return (sample.jz * math.sin(phase) + sample.jy * math.cos(phase)
            + dephasing_draw)


def linearized_error_signal(sample, phase, moments, dephasing_draw=0.0,
                            cubic=False):
    """First order expansion of :func:`error_signal` in the phase.

    ``<J_z>(phase - phase**3/6) + J_y + (J_z - <J_z>) phase``; the cubic
    term is kept only when ``cubic`` is set.
    """

    signal = moments.jz_mean * phase
    if cubic:
        signal -= moments.jz_mean * phase ** 3 / 6.0
    return (signal + sample.jy + (sample.jz - moments.jz_mean) * phase
            + dephasing_draw)


def linear_correction(signal, moments, ramsey_T, gain=1.0):
    """-g E / (<J_z> T) in rad/s."""

    return -gain * signal / (moments.jz_mean * ramsey_T)


def nonlinear_correction(signal, moments, ramsey_T, gain=1.0):
    """-g arcsin(E / <J_z>) / T with the ratio clamped to [-1, 1]."""

    ratio = min(1.0, max(-1.0, signal / moments.jz_mean))
    return -gain * math.asin(ratio) / ramsey_T


def predicted_phase(config, noise, steering):
    """Cycle phase the servo expects from its own steering.

    Free-running white FM phases of successive cycles are independent, so
    the steering alone is predictable. Other noise kinds and the linear law
    interrogate against zero.

    :type steering: float
    :param steering: Sum of the corrections applied so far, rad/s.

    :rtype: float
    """

    if (config.feedback.kind == FEEDBACK_NONLINEAR
            and noise.kind == NOISE_WHITE):
        return config.ramsey_T * steering
    return 0.0


def _no_correction(signal, moments, ramsey_T, gain=1.0):
    return 0.0


_LAWS = {
    FEEDBACK_LINEAR: linear_correction,
    FEEDBACK_NONLINEAR: nonlinear_correction,
}


def trial_stream(master_seed, trial_index):
    """Private random stream of one trial.

    :rtype: numpy.random.Generator
    """

    require(master_seed >= 0 and trial_index >= 0, LoopException,
            LC_ERR_SEED, master_seed, trial_index)
    return np.random.default_rng(
        np.random.SeedSequence([int(master_seed), int(trial_index)]))


def _free_running(config, noise, rng):
    if config.mode == MODE_FAST:
        phases = lonoise.draw_fast_phases(noise, config.ramsey_T,
                                          config.n_cycles, rng)
        return phases, None

    traj = lonoise.gen_trajectory(noise, config.dt,
                                  config.n_cycles * config.steps_per_cycle,
                                  rng)
    return lonoise.cycle_phases(traj, config.steps_per_cycle), traj


def run_clock(config, noise, moments, trial_index=0):
    """Simulate one closed-loop trial.

    Draws come from :func:`trial_stream` in a fixed order: the LO noise,
    then J_y, then J_z, then the dephasing phases.

    :type config: LoopConfig
    :param config: Loop parameters.

    :type noise: LONoiseModel
    :param noise: Free-running LO noise.

    :type moments: StateMoments
    :param moments: Initial atomic state, prepared afresh every cycle.

    :type trial_index: int
    :param trial_index: Index of the trial in the run.

    :rtype: ClockTrace
    """

    require(not (config.mode == MODE_FAST and noise.kind == NOISE_FLICKER),
            LoopException, LC_ERR_FAST_FLICKER)

    rng = trial_stream(config.master_seed, trial_index)
    n = config.n_cycles
    ramsey_T = config.ramsey_T

    free, traj = _free_running(config, noise, rng)
    atoms = sample_atomic_noise(moments, rng, size=n)

    collective = 0.0
    independent = 0.0
    dephasing = config.dephasing
    if dephasing is not None and dephasing.gamma_e > 0:
        draws = rng.standard_normal(n)
        if dephasing.mode == DEPHASING_COLLECTIVE:
            collective = math.sqrt(dephasing.gamma_e * ramsey_T) * draws
        else:
            independent = math.sqrt(moments.n_atoms / 4.0
                                    * dephasing.gamma_e * ramsey_T) * draws
    collective = np.broadcast_to(collective, (n,)).tolist()
    independent = np.broadcast_to(independent, (n,)).tolist()

    law = _LAWS.get(config.feedback.kind, _no_correction)
    gain = config.feedback.gain
    free_list = free.tolist()
    jy = atoms.jy.tolist()
    jz = atoms.jz.tolist()

    phase_o = [0.0] * n
    signals = [0.0] * n
    corrections = [0.0] * n
    steering = 0.0
    for k in range(n):
        phase = free_list[k] + ramsey_T * steering
        reference = predicted_phase(config, noise, steering)
        seen = phase - reference + collective[k]
        sample = AtomicSample(jy[k], jz[k])
        if config.linearized:
            signal = linearized_error_signal(sample, seen, moments,
                                             independent[k])
        else:
            signal = error_signal(sample, seen, independent[k])
        delta = (law(signal, moments, ramsey_T, gain)
                 - gain * reference / ramsey_T)

        phase_o[k] = phase
        signals[k] = signal
        corrections[k] = delta
        steering += delta

    applied = np.concatenate(([0.0], np.cumsum(corrections)[:-1]))
    if traj is None:
        slaved = NoiseTrajectory(ramsey_T, free / ramsey_T + applied)
    else:
        slaved = NoiseTrajectory(
            traj.dt,
            traj.samples + np.repeat(applied, config.steps_per_cycle))

    return ClockTrace(ramsey_T, phase_o, signals, corrections, slaved)


def run_trials(config, noise, moments, executor=None):
    """Run every trial of ``config``, ordered by trial index.

    :type executor: object
    :param executor: Anything with an ordered ``map(fn, iterable)``; the
        builtin map is used when omitted.

    :rtype: list of ClockTrace
    """

    task = functools.partial(run_clock, config, noise, moments)
    trials = range(config.trials)
    LOG.info('Running %d trials of %d cycles (T=%g s, %s feedback)',
             config.trials, config.n_cycles, config.ramsey_T,
             config.feedback.kind)

    if executor is None:
        return list(map(task, trials))
    return list(executor.map(task, trials))


def mean_frequency_offset(trace, n_sub):
    """Time average of the slaved frequency over the first ``n_sub`` cycles.

    :rtype: float
    """

    require(1 <= n_sub <= trace.n_cycles, LoopException, LC_ERR_N_SUB,
            trace.n_cycles, n_sub)
    slaved = trace.slaved_freq
    steps = n_sub * (slaved.n_steps // trace.n_cycles)
    return slaved.dt * float(np.sum(slaved.samples[:steps])) / (
        n_sub * trace.ramsey_T)


def corrected_cycle_phases(trace):
    """Per-cycle steered output phase_O + T * correction in rad."""

    return trace.phase_o + trace.ramsey_T * trace.correction
