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

"""Stability and spectral estimators for clock traces.

Allan deviations use the steered output of every cycle,
``phase_O + T * correction``, averaged over non-overlapping windows of
``tau / T`` cycles: the time-averaged frequency offset of each window is
``sum / tau``.
"""

import logging
import math

import allantools
import numpy as np
from scipy import signal, stats

from squeezeclock.domain.clockloop import corrected_cycle_phases
from squeezeclock.domain.entities import (
    FloorFit, PsdEstimate, StabilityCurve)
from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

LOG = logging.getLogger(__name__)

"""Floor fits only use taus of at least this many cycles."""
FLOOR_MIN_CYCLES = 10

"""Minimal number of points of floor and scaling fits."""
MIN_FIT_POINTS = 4

"""Minimal max(N)/min(N) of a scaling fit."""
MIN_SCALING_SPAN = 100.0

"""Allowed |slope + 1/2| beyond three standard errors."""
SLOPE_SLACK = 0.05

MAX_OVERLAP = 0.9

LC_ERR_NO_TRACES = 'At least one trace is required'
LC_ERR_CYCLE_TIME = 'All traces must share the Ramsey time, got {} and {}'
LC_ERR_TAU_MULTIPLE = 'tau={} is not a positive multiple of T={}'
LC_ERR_TAU_LENGTH = 'tau={} exceeds the run length {}'
LC_ERR_SEGMENTS = 'tau={} leaves {} segment(s); at least 2 are required'
LC_ERR_FIT_POINTS = 'Fit needs >= {} points, got {}'
LC_ERR_SEGMENT_LEN = 'segment_len must be in [2, {}], got {}'
LC_ERR_OVERLAP = 'overlap_fraction must be in [0, {}], got {}'
LC_ERR_VALUES = 'Scaling fits need positive values and atom numbers'
LC_ERR_SPAN = 'Scaling fits need N spanning >= {}x, got {}x'
LC_ERR_GRID = 'Spectra must share one frequency grid'
LC_ERR_LENGTHS = 'Classical Allan deviation needs traces of equal length'
LC_WARN_FLAGGED = ('Floor fit over tau in [%g, %g] has log-log slope '
                   '%.3f +/- %.3f, not -1/2')


class AnalysisException(SqueezeClockException):
    """Raised on invalid analysis requests."""

    pass


def _cycle_time(traces):
    require(len(traces) > 0, AnalysisException, LC_ERR_NO_TRACES)
    ramsey_T = traces[0].ramsey_T
    for trace in traces[1:]:
        require(math.isclose(trace.ramsey_T, ramsey_T, rel_tol=1e-12),
                AnalysisException, LC_ERR_CYCLE_TIME, ramsey_T,
                trace.ramsey_T)
    return ramsey_T


def tau_cycles(tau, ramsey_T):
    """Number of cycles in ``tau``; rejects non-multiples of T."""

    cycles = int(round(tau / ramsey_T))
    require(cycles >= 1 and abs(cycles * ramsey_T - tau) <= 1e-9 * tau,
            AnalysisException, LC_ERR_TAU_MULTIPLE, tau, ramsey_T)
    return cycles


def default_taus(n_cycles, ramsey_T):
    """Taus of 1, 2, 4, ... cycles up to half the run.

    :rtype: numpy.ndarray
    """

    cycles = 2 ** np.arange(int(math.log2(max(n_cycles // 2, 1))) + 1)
    return cycles * ramsey_T


def window_offsets(traces, cycles):
    """Time-averaged frequency offsets of all non-overlapping windows."""

    offsets = []
    for trace in traces:
        output = corrected_cycle_phases(trace)
        segments = output.size // cycles
        if segments:
            sums = output[:segments * cycles].reshape(segments, cycles)
            offsets.append(sums.sum(axis=1) / (cycles * trace.ramsey_T))
    return np.concatenate(offsets) if offsets else np.zeros(0)


def allan_deviation(traces, taus, omega):
    """Fractional frequency deviation of the time-averaged offset.

    :type traces: list of ClockTrace
    :param traces: Trials sharing one Ramsey time.

    :type taus: list of float
    :param taus: Averaging times in s, multiples of T.

    :type omega: float
    :param omega: Carrier frequency in rad/s.

    :rtype: StabilityCurve
    """

    ramsey_T = _cycle_time(traces)
    longest = max(trace.n_cycles for trace in traces) * ramsey_T

    sigma, stderr = [], []
    for tau in taus:
        require(tau <= longest * (1 + 1e-12), AnalysisException,
                LC_ERR_TAU_LENGTH, tau, longest)
        offsets = window_offsets(traces, tau_cycles(tau, ramsey_T))
        require(offsets.size >= 2, AnalysisException, LC_ERR_SEGMENTS, tau,
                offsets.size)

        value = math.sqrt(float(np.mean(offsets ** 2))) / omega
        sigma.append(value)
        stderr.append(value / math.sqrt(2.0 * offsets.size))

    return StabilityCurve(taus, sigma, stderr, ramsey_T)


def fit_floor(curve, min_cycles=FLOOR_MIN_CYCLES):
    """Fit sigma_y = c / sqrt(tau) through the origin.

    Points are weighted by 1/stderr**2 unless a stderr vanishes. The fit is
    flagged when the log-log slope of the same points differs from -1/2 by
    more than three standard errors plus SLOPE_SLACK.

    :type curve: StabilityCurve
    :param curve: Allan deviation points.

    :type min_cycles: int
    :param min_cycles: Smallest tau used, in cycles.

    :rtype: FloorFit
    """

    selected = curve.taus >= min_cycles * curve.cycle_time * (1 - 1e-9)
    taus = curve.taus[selected]
    sigma = curve.sigma_y[selected]
    errors = curve.stderr[selected]
    require(taus.size >= MIN_FIT_POINTS, AnalysisException,
            LC_ERR_FIT_POINTS, MIN_FIT_POINTS, taus.size)

    x = 1.0 / np.sqrt(taus)
    if np.all(errors > 0):
        weights = 1.0 / errors ** 2
        coeff = float(np.sum(weights * x * sigma) / np.sum(weights * x ** 2))
        coeff_err = math.sqrt(1.0 / float(np.sum(weights * x ** 2)))
    else:
        coeff = float(np.sum(x * sigma) / np.sum(x ** 2))
        residual = float(np.sum((sigma - coeff * x) ** 2)) / (x.size - 1)
        coeff_err = math.sqrt(residual / float(np.sum(x ** 2)))

    fit_range = (float(taus[0]), float(taus[-1]))
    if np.all(sigma == 0):
        return FloorFit(0.0, coeff_err, -0.5, 0.0, fit_range, False)

    positive = sigma > 0
    slope = stats.linregress(np.log(taus[positive]), np.log(sigma[positive]))
    flagged = bool(np.sum(positive) < 3 or abs(slope.slope + 0.5)
                   > 3 * slope.stderr + SLOPE_SLACK)
    if flagged:
        LOG.warning(LC_WARN_FLAGGED, fit_range[0], fit_range[1], slope.slope,
                    slope.stderr)

    return FloorFit(max(coeff, 0.0), coeff_err, float(slope.slope),
                    float(slope.stderr), fit_range, flagged)


def psd_welch(traj, segment_len, overlap_fraction=0.5):
    """One-sided Welch density of a frequency record.

    Hann windows, mean removed per segment; the zero-frequency bin is
    dropped. Summing ``psd * df`` recovers the sample variance.

    :type traj: NoiseTrajectory
    :param traj: Frequency record in rad/s.

    :rtype: PsdEstimate
    """

    require(2 <= segment_len <= traj.n_steps, AnalysisException,
            LC_ERR_SEGMENT_LEN, traj.n_steps, segment_len)
    require(0 <= overlap_fraction <= MAX_OVERLAP, AnalysisException,
            LC_ERR_OVERLAP, MAX_OVERLAP, overlap_fraction)

    overlap = min(int(round(overlap_fraction * segment_len)),
                  segment_len - 1)
    freqs, psd = signal.welch(traj.samples, fs=1.0 / traj.dt, window='hann',
                              nperseg=segment_len, noverlap=overlap,
                              detrend='constant', scaling='density')
    segments = 1 + (traj.n_steps - segment_len) // (segment_len - overlap)
    return PsdEstimate(freqs[1:], psd[1:], segments)


def average_psd(estimates):
    """Mean of spectra estimated on one frequency grid."""

    require(len(estimates) > 0, AnalysisException, LC_ERR_NO_TRACES)
    freqs = estimates[0].freqs
    for estimate in estimates[1:]:
        require(np.array_equal(estimate.freqs, freqs), AnalysisException,
                LC_ERR_GRID)

    psd = np.mean([estimate.psd for estimate in estimates], axis=0)
    segments = sum(estimate.segment_count for estimate in estimates)
    return PsdEstimate(freqs, psd, segments)


def fit_scaling(points):
    """Power-law exponent of ``value`` against ``N``.

    :type points: list of tuple
    :param points: (N, value) pairs.

    :rtype: tuple
    :return: (exponent, stderr) of the log-log least-squares slope.
    """

    require(len(points) >= MIN_FIT_POINTS, AnalysisException,
            LC_ERR_FIT_POINTS, MIN_FIT_POINTS, len(points))
    n_atoms = np.array([p[0] for p in points], dtype=float)
    values = np.array([p[1] for p in points], dtype=float)
    require(np.all(values > 0) and np.all(n_atoms > 0), AnalysisException,
            LC_ERR_VALUES)
    span = n_atoms.max() / n_atoms.min()
    require(span >= MIN_SCALING_SPAN, AnalysisException, LC_ERR_SPAN,
            MIN_SCALING_SPAN, span)

    fit = stats.linregress(np.log(n_atoms), np.log(values))
    return float(fit.slope), float(fit.stderr)


def two_sample_allan(traces, taus, omega):
    """Classical overlapping Allan deviation of the per-cycle frequency.

    The fractional frequency of cycle k is ``output_k / (T omega)``.
    Variances of the traces are combined weighted by their number of
    terms. Taus allantools cannot resolve are dropped.

    :rtype: StabilityCurve
    """

    ramsey_T = _cycle_time(traces)
    lengths = set(trace.n_cycles for trace in traces)
    require(len(lengths) == 1, AnalysisException, LC_ERR_LENGTHS)

    results = []
    for trace in traces:
        y = corrected_cycle_phases(trace) / (ramsey_T * omega)
        results.append(allantools.oadev(y, rate=1.0 / ramsey_T,
                                        data_type='freq',
                                        taus=np.asarray(taus, dtype=float)))

    taus_out = results[0][0]
    counts = np.array([result[3] for result in results], dtype=float)
    variances = np.array([result[1] ** 2 for result in results])
    total = counts.sum(axis=0)
    combined = np.sqrt(np.sum(counts * variances, axis=0) / total)
    stderr = combined / np.sqrt(total)
    return StabilityCurve(taus_out, combined, stderr, ramsey_T)
