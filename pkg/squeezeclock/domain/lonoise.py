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

"""Free-running local oscillator frequency noise.

Trajectories hold the frequency offset in rad/s on a uniform grid. The
one-sided spectral density convention is S(f) = 2 * Var(x) * dt for white
noise, so white FM calibrated by ``gamma`` has the flat level ``2 gamma``.
Phases are integrated with the left-Riemann sum ``dt * sum(samples)``.
"""

import logging
import math

import numpy as np
from scipy import fft

from squeezeclock.domain.entities import (
    NOISE_FLICKER, NOISE_NONE, NOISE_WHITE, NoiseTrajectory)
from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

LOG = logging.getLogger(__name__)

LC_ERR_KIND = 'Generator for "{}" noise called with a "{}" model'
LC_ERR_DT = 'dt must be > 0, got {}'
LC_ERR_STEPS = 'n_steps must be an integer >= 1, got {}'
LC_ERR_SPAN = 'Flicker span n_steps*dt={} is shorter than t_ref={}'
LC_ERR_WINDOW = 'Window [{}, {}) outside trajectory of {} samples'
LC_ERR_CYCLE = 'steps_per_cycle must be in [1, {}], got {}'
LC_ERR_FAST_FLICKER = ('Fast mode draws independent phases and cannot '
                       'represent flicker noise')
LC_ERR_T = 'Window length must be > 0, got {}'


class NoiseException(SqueezeClockException):
    """Raised on invalid noise generation requests."""

    pass


def _check_grid(dt, n_steps):
    require(dt > 0, NoiseException, LC_ERR_DT, dt)
    require(isinstance(n_steps, (int, np.integer)) and n_steps >= 1,
            NoiseException, LC_ERR_STEPS, n_steps)


def _check_kind(model, kind):
    require(model.kind == kind, NoiseException, LC_ERR_KIND, kind,
            model.kind)


def gen_white_fm(model, dt, n_steps, rng):
    """White frequency noise with Var(phase over T) = gamma * T.

    :type model: LONoiseModel
    :param model: White FM model.

    :type dt: float
    :param dt: Sample spacing in s.

    :type n_steps: int
    :param n_steps: Number of samples.

    :type rng: numpy.random.Generator
    :param rng: Random stream.

    :rtype: NoiseTrajectory
    """

    _check_kind(model, NOISE_WHITE)
    _check_grid(dt, n_steps)

    scale = math.sqrt(model.gamma / dt)
    return NoiseTrajectory(dt, scale * rng.standard_normal(n_steps))


class FlickerSynthesis(object):
    """Spectral synthesis of band-limited 1/f frequency noise.

    The record is built on ``length >= n_steps`` samples so that the band
    reaches ``f_min = 10**-f_floor_decades / t_ref``. Bin ``k`` of the band
    carries a cosine and a sine with variance ``c_k**2 ∝ 1 / f_k``; the DC
    and Nyquist bins are empty. Amplitudes are scaled so that the phase
    accumulated over ``t_ref`` has variance ``(gamma * t_ref)**2``.

    :type model: LONoiseModel
    :param model: Flicker FM model.

    :type dt: float
    :param dt: Sample spacing in s.

    :type n_steps: int
    :param n_steps: Number of samples returned by :meth:`draw`.
    """

    def __init__(self, model, dt, n_steps):
        _check_kind(model, NOISE_FLICKER)
        _check_grid(dt, n_steps)
        span = n_steps * dt
        require(span >= model.t_ref * (1 - 1e-9), NoiseException,
                LC_ERR_SPAN, span, model.t_ref)

        decades = 10.0 ** model.f_floor_decades
        length = max(n_steps, int(math.ceil(decades * model.t_ref / dt)))
        length = fft.next_fast_len(length, real=True)

        k = np.arange(length // 2 + 1)
        freqs = k / (length * dt)
        f_min = 1.0 / (decades * model.t_ref)
        in_band = (k > 0) & (freqs >= f_min * (1 - 1e-12))
        if length % 2 == 0:
            in_band[-1] = False

        variances = np.zeros(k.size)
        variances[in_band] = 1.0 / (freqs[in_band] * length * dt)

        self._model = model
        self._dt = float(dt)
        self._n_steps = int(n_steps)
        self._length = length
        self._in_band = in_band
        self._variances = variances
        self._f_min = f_min

        reference = self.unit_window_variance(self.window_steps(model.t_ref))
        target = (model.gamma * model.t_ref) ** 2
        self._h = target / reference if reference > 0 else 0.0
        LOG.debug('Flicker synthesis on %d samples, band [%g, %g] Hz',
                  length, f_min, 0.5 / dt)

    @property
    def length(self):
        return self._length

    @property
    def f_min(self):
        return self._f_min

    @property
    def h(self):
        """Coefficient of the one-sided density S(f) = h / f."""

        return self._h

    def window_steps(self, window):
        return max(1, int(round(window / self._dt)))

    def unit_window_variance(self, steps):
        """Phase variance over ``steps`` samples for h = 1."""

        k = np.nonzero(self._in_band)[0]
        ratio = (np.sin(math.pi * k * steps / self._length)
                 / np.sin(math.pi * k / self._length))
        return self._dt ** 2 * float(np.sum(self._variances[k] * ratio ** 2))

    def window_variance(self, window):
        """Exact variance of the phase accumulated over ``window`` seconds.

        :type window: float
        :param window: Integration window in s.

        :rtype: float
        """

        require(window > 0, NoiseException, LC_ERR_T, window)
        return self._h * self.unit_window_variance(self.window_steps(window))

    def draw(self, rng):
        """
        :type rng: numpy.random.Generator
        :param rng: Random stream.

        :rtype: NoiseTrajectory
        """

        bins = self._variances.size
        xi = rng.standard_normal(bins)
        eta = rng.standard_normal(bins)
        if self._h == 0:
            return NoiseTrajectory(self._dt, np.zeros(self._n_steps))

        amplitude = np.sqrt(self._h * self._variances)
        spectrum = 0.5 * self._length * amplitude * (xi - 1j * eta)
        samples = fft.irfft(spectrum, n=self._length)
        return NoiseTrajectory(self._dt, samples[:self._n_steps])


def gen_flicker_fm(model, dt, n_steps, rng):
    """Band-limited 1/f frequency noise calibrated at ``model.t_ref``.

    :rtype: NoiseTrajectory
    """

    return FlickerSynthesis(model, dt, n_steps).draw(rng)


def gen_trajectory(model, dt, n_steps, rng):
    """Dispatch on the noise kind; ``none`` yields zeros without draws."""

    if model.kind == NOISE_WHITE:
        return gen_white_fm(model, dt, n_steps, rng)
    if model.kind == NOISE_FLICKER:
        return gen_flicker_fm(model, dt, n_steps, rng)

    _check_grid(dt, n_steps)
    return NoiseTrajectory(dt, np.zeros(n_steps))


def accumulate_phase(traj, start_index, steps_per_cycle):
    """Phase ``dt * sum(samples[start:start + steps])`` in rad.

    :type traj: NoiseTrajectory
    :param traj: Frequency record.

    :rtype: float
    """

    stop = start_index + steps_per_cycle
    require(0 <= start_index and steps_per_cycle >= 1
            and stop <= traj.n_steps, NoiseException, LC_ERR_WINDOW,
            start_index, stop, traj.n_steps)
    return traj.dt * float(np.sum(traj.samples[start_index:stop]))


def cycle_phases(traj, steps_per_cycle):
    """Phases of consecutive cycles covering the whole trajectory.

    A trailing partial cycle is ignored.

    :rtype: numpy.ndarray
    """

    require(1 <= steps_per_cycle <= traj.n_steps, NoiseException,
            LC_ERR_CYCLE, traj.n_steps, steps_per_cycle)
    cycles = traj.n_steps // steps_per_cycle
    blocks = traj.samples[:cycles * steps_per_cycle]
    return traj.dt * blocks.reshape(cycles, steps_per_cycle).sum(axis=1)


def draw_fast_phases(model, ramsey_T, n_cycles, rng):
    """Per-cycle white FM phases drawn directly as Normal(0, gamma * T).

    :raises NoiseException: for flicker noise, whose phases are correlated
        across cycles.
    """

    require(model.kind != NOISE_FLICKER, NoiseException, LC_ERR_FAST_FLICKER)
    if model.kind == NOISE_NONE:
        return np.zeros(n_cycles)
    return math.sqrt(model.gamma * ramsey_T) * rng.standard_normal(n_cycles)


def phase_variance(model, window):
    """Calibrated free-running phase variance over ``window``.

    gamma*T for white FM and (gamma*T)**2 for flicker FM, the latter exact
    only at ``t_ref``.
    """

    require(window > 0, NoiseException, LC_ERR_T, window)
    if model.kind == NOISE_WHITE:
        return model.gamma * window
    if model.kind == NOISE_FLICKER:
        return (model.gamma * window) ** 2
    return 0.0
