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

"""Commands of the simulator as use cases returning ResultTables."""

import abc
import logging
import math

import numpy as np
import six

from squeezeclock.domain import (
    analysis, clockloop, spinstate, theory)
from squeezeclock.domain.config import (
    AXIS_KAPPA, AXIS_N, AXIS_T, ConfigReader, STATE_OPTIMAL,
    STATE_UNCORRELATED)
from squeezeclock.domain.entities import (
    COMMAND_MOMENTS, COMMAND_PSD, COMMAND_RUN, COMMAND_SWEEP, COMMAND_THEORY,
    EnsembleSpec, FAMILY_GAUSSIAN, FEEDBACK_LINEAR, FEEDBACK_NONE,
    FeedbackLaw, MODE_TRAJECTORY, NOISE_NONE, NOISE_WHITE, ResultTable)
from squeezeclock.domain.exceptions import (
    ConfigurationException, SqueezeClockException)
from squeezeclock.domain.helper import require, validate_property_type

LOG = logging.getLogger(__name__)

MOMENTS_FILE = 'moments.csv'
THEORY_FILE = 'theory.csv'
ALLAN_FILE = 'allan.csv'
SWEEP_FILE = 'sweep.csv'
SUMMARY_FILE = 'summary.csv'
PSD_FILE = 'psd.csv'

MOMENTS_COLUMNS = ('N', 'kappa', 'jz_mean', 'dJy', 'dJz', 'dJx', 'xi',
                   'method')
THEORY_COLUMNS = ('N', 'state', 'feedback', 'noise', 'kappa_opt', 'zeta',
                  'gamma_T_opt', 'sigma_y', 'exponent')
ALLAN_COLUMNS = ('tau', 'sigma_y', 'stderr', 'sigma_y_omega_per_gamma',
                 'classical_sigma_y')
SWEEP_COLUMNS = ('feedback', 'state', 'axis_value', 'N', 'kappa', 'ramsey_T',
                 'gamma_T', 'floor_coeff', 'stderr', 'flagged', 'theory_floor',
                 'theory_zeta', 'trials', 'cycles')
SUMMARY_COLUMNS = ('feedback', 'state', 'exponent', 'stderr', 'predicted',
                   'points')
PSD_COLUMNS = ('f', 'S_free', 'S_locked_unsqueezed', 'S_locked_squeezed')

"""Shortest run accepted by the spectrum command."""
MIN_PSD_CYCLES = 64

LABEL_KAPPA = 'kappa'

LC_ERR_COMMAND = 'No use case for command "{}", expected one of {}'
LC_ERR_NO_NOISE = 'The {} command needs LO noise, [noise] kind is "none"'
LC_ERR_SMALL_N = 'Optimal squeezing needs N >= {}, got {}'
LC_ERR_PSD_MODE = 'Spectra need the trajectory loop mode, got "{}"'
LC_ERR_PSD_CYCLES = 'Spectra need n_cycles >= {}, got {}'
LC_ERR_XI = 'Cannot build the squeezed state: {}'
LC_ERR_AXIS_VALUE = '[sweep] values must be > 0 on the {} axis, got {}'
LC_ERR_RAMSEY_T = ('Missing required option "ramsey_t" in section [loop] '
                   'for a {} sweep')
LC_WARN_SINGLE = 'Sweep over a single %s value; no scaling fit'
LC_WARN_NO_FIT = 'No scaling fit for %s/%s: %s'


class UseCaseException(SqueezeClockException):
    """Base class for UseCase execution exceptions."""

    pass


@six.add_metaclass(abc.ABCMeta)
class BaseUseCase:
    """Base class for UseCases."""

    @abc.abstractmethod
    def execute(self):
        """Execute Use Case. Main business logic for exact use case."""

        raise NotImplementedError


@six.add_metaclass(abc.ABCMeta)
class SimulationUseCase(BaseUseCase):
    """Use case driven by a run configuration.

    :type reader: ConfigReader
    :param reader: Typed configuration.

    :type executor: object
    :param executor: Ordered ``map`` used for the trials.
    """

    def __init__(self, reader, executor=None):
        self.reader = reader
        self.executor = executor

    @property
    def reader(self):
        return self._reader

    @reader.setter
    @validate_property_type(ConfigReader)
    def reader(self, reader):
        self._reader = reader

    @abc.abstractmethod
    def execute(self):
        """
        :rtype: list of ResultTable
        """

        raise NotImplementedError

    def _stability(self, traces, config, settings):
        """Allan deviation over the configured taus and its floor fit."""

        half = config.n_cycles // 2
        cycles = sorted(set(c for c in settings.taus_cycles if 1 <= c <= half))
        taus = np.asarray(cycles, dtype=float) * config.ramsey_T
        curve = analysis.allan_deviation(traces, taus, config.omega)
        fit = analysis.fit_floor(curve, settings.floor_min_cycles)
        return curve.with_floor(fit), fit


class MomentsUseCase(SimulationUseCase):
    """Moments of every configured (N, kappa) state."""

    def execute(self):
        specs = self.reader.ensemble_specs()
        method = self.reader.method([spec.n_atoms for spec in specs
                                     if spec.family == FAMILY_GAUSSIAN])
        table = ResultTable(MOMENTS_FILE, MOMENTS_COLUMNS)

        for spec in specs:
            moments = spinstate.ensemble_moments(spec, method)
            kappa = (spec.kappa if spec.family == FAMILY_GAUSSIAN
                     else float('nan'))
            table.append((spec.n_atoms, kappa, moments.jz_mean, moments.d_jy,
                          moments.d_jz, moments.d_jx, moments.xi,
                          spinstate.resolve_method(spec, method)))

        return [table]


class TheoryUseCase(SimulationUseCase):
    """Predicted optima and floors for each N, state and servo."""

    def execute(self):
        settings = self.reader.theory_settings()
        kind = self.reader.noise_kind()
        require(kind != NOISE_NONE, ConfigurationException, LC_ERR_NO_NOISE,
                'theory')
        gamma = self.reader.gamma()
        omega = self.reader.omega()
        method = self.reader.method(
            settings.n_atoms if theory.STATE_SQUEEZED in settings.states
            else ())

        table = ResultTable(THEORY_FILE, THEORY_COLUMNS,
                            notes={'tau': settings.tau})
        for n_atoms in settings.n_atoms:
            for state in settings.states:
                if state == theory.STATE_SQUEEZED:
                    require(n_atoms >= theory.MIN_OPTIMIZE_N,
                            ConfigurationException, LC_ERR_SMALL_N,
                            theory.MIN_OPTIMIZE_N, n_atoms)
                for feedback in settings.feedbacks:
                    p = theory.predict(n_atoms, feedback, kind, state, gamma,
                                       omega, settings.tau, method)
                    table.append((n_atoms, state, feedback, kind, p.kappa_opt,
                                  p.zeta, p.gamma_T_opt, p.sigma_y,
                                  p.scaling_exponent))
        return [table]


class RunUseCase(SimulationUseCase):
    """One closed-loop configuration: Allan deviation and floor fit."""

    def execute(self):
        spec = self.reader.single_ensemble()
        sizes = [spec.n_atoms] if spec.family == FAMILY_GAUSSIAN else []
        moments = spinstate.ensemble_moments(spec, self.reader.method(sizes))
        config = self.reader.loop_config()
        noise = self.reader.noise_model(config.ramsey_T, config.n_cycles)
        settings = self.reader.analysis_settings(config.n_cycles)

        traces = clockloop.run_trials(config, noise, moments, self.executor)
        curve, fit = self._stability(traces, config, settings)
        classical = analysis.two_sample_allan(traces, curve.taus,
                                              config.omega)
        by_cycles = dict(zip(
            np.rint(classical.taus / config.ramsey_T).astype(int),
            classical.sigma_y))

        predicted = theory.floor_coefficient(moments, noise.kind, noise.gamma,
                                             config.ramsey_T, config.omega,
                                             config.dephasing)
        notes = {
            'xi': moments.xi,
            'floor_coeff': fit.coeff,
            'floor_stderr': fit.stderr,
            'slope': fit.slope,
            'slope_stderr': fit.slope_stderr,
            'fit_min_tau': fit.fit_range[0],
            'fit_max_tau': fit.fit_range[1],
            'flagged': fit.flagged,
            'theory_floor': predicted,
        }
        table = ResultTable(ALLAN_FILE, ALLAN_COLUMNS, notes=notes)
        for tau, sigma, stderr in curve.points:
            scaled = (sigma * config.omega / noise.gamma if noise.gamma > 0
                      else float('nan'))
            cycles = int(round(tau / config.ramsey_T))
            table.append((tau, sigma, stderr, scaled,
                          by_cycles.get(cycles, float('nan'))))

        LOG.info('Floor %.6g +- %.2g (theory %.6g)', fit.coeff, fit.stderr,
                 predicted)
        return [table]


class SweepUseCase(SimulationUseCase):
    """Floors along one axis (T, kappa or N) for several servo/state curves.

    N sweeps also get a summary with the fitted scaling exponent of each
    curve.
    """

    def execute(self):
        sweep = self.reader.sweep_settings()
        self._validate(sweep)
        if len(sweep.values) == 1:
            LOG.warning(LC_WARN_SINGLE, sweep.axis)

        base_T = self.reader.get_float('loop', 'ramsey_t', None)
        base = self.reader.loop_config(base_T or 1.0)
        settings = self.reader.analysis_settings(base.n_cycles)
        states = ([LABEL_KAPPA] if sweep.axis == AXIS_KAPPA
                  else sweep.states)

        table = ResultTable(SWEEP_FILE, SWEEP_COLUMNS)
        summary = ResultTable(SUMMARY_FILE, SUMMARY_COLUMNS)
        for feedback in sweep.feedbacks:
            for state in states:
                rows = [self._point(sweep, value, feedback, state, base,
                                    base_T, settings)
                        for value in sweep.values]
                for row in rows:
                    table.append(row)
                if sweep.axis == AXIS_N and len(rows) > 1:
                    self._summarize(summary, feedback, state, rows)

        if sweep.axis == AXIS_N:
            return [table, summary]
        return [table]

    def _validate(self, sweep):
        if sweep.axis != AXIS_KAPPA:
            for value in sweep.values:
                require(value > 0, ConfigurationException, LC_ERR_AXIS_VALUE,
                        sweep.axis, value)
        if self.reader.get_float('loop', 'ramsey_t', None) is None:
            require(sweep.axis == AXIS_T
                    or (sweep.axis == AXIS_N and sweep.optimize_t),
                    ConfigurationException, LC_ERR_RAMSEY_T, sweep.axis)

        needs_theory = (sweep.optimize_t or STATE_OPTIMAL in sweep.states)
        if needs_theory and sweep.axis != AXIS_KAPPA:
            require(self.reader.noise_kind() != NOISE_NONE,
                    ConfigurationException, LC_ERR_NO_NOISE, 'sweep')
        if STATE_OPTIMAL in sweep.states and sweep.axis != AXIS_KAPPA:
            sizes = (sweep.values if sweep.axis == AXIS_N
                     else [self.reader.single_n_atoms()])
            for n_atoms in sizes:
                require(n_atoms >= theory.MIN_OPTIMIZE_N,
                        ConfigurationException, LC_ERR_SMALL_N,
                        theory.MIN_OPTIMIZE_N, n_atoms)

        gaussian = [state for state in sweep.states
                    if state != STATE_UNCORRELATED]
        if sweep.axis == AXIS_KAPPA or gaussian:
            self.reader.method(sweep.values if sweep.axis == AXIS_N
                               else [self.reader.single_n_atoms()])

    def _spec(self, n_atoms, state, feedback):
        if state == STATE_OPTIMAL:
            law = FEEDBACK_LINEAR if feedback == FEEDBACK_NONE else feedback
            kappa = theory.optimize_kappa(
                n_atoms, law, self.reader.noise_kind(), self.reader.gamma(),
                self.reader.method()).kappa
            return EnsembleSpec(n_atoms, FAMILY_GAUSSIAN, kappa)
        return self.reader.ensemble_spec(n_atoms, state)

    def _point(self, sweep, value, feedback, state, base, base_T, settings):
        n_atoms = (int(value) if sweep.axis == AXIS_N
                   else self.reader.single_n_atoms())
        if sweep.axis == AXIS_KAPPA:
            spec = self.reader.ensemble_spec(n_atoms, value)
        else:
            spec = self._spec(n_atoms, state, feedback)
        moments = spinstate.ensemble_moments(spec, self.reader.method())

        kind = self.reader.noise_kind()
        gamma = self.reader.gamma()
        if sweep.axis == AXIS_T:
            ramsey_T = value
        elif sweep.optimize_t:
            ramsey_T = theory.optimal_T(moments, feedback, kind, gamma)
        else:
            ramsey_T = base_T

        config = base.replace(ramsey_T=ramsey_T,
                              feedback=self.reader.feedback(feedback))
        noise = self.reader.noise_model(ramsey_T, config.n_cycles)
        traces = clockloop.run_trials(config, noise, moments, self.executor)
        _, fit = self._stability(traces, config, settings)

        predicted_floor = theory.floor_coefficient(
            moments, kind, gamma, ramsey_T, config.omega, config.dephasing)
        zeta_form = float('nan')
        if kind == NOISE_WHITE:
            zeta_form = (theory.zeta_factor(moments, n_atoms)
                         * n_atoms ** (-1.0 / 3) * math.sqrt(gamma)
                         / config.omega)

        kappa = spec.kappa if spec.family == FAMILY_GAUSSIAN else float('nan')
        LOG.info('Sweep %s=%g (%s, %s): T=%g floor=%.6g', sweep.axis, value,
                 feedback, state, ramsey_T, fit.coeff)
        return (feedback, state, value, n_atoms, kappa, ramsey_T,
                gamma * ramsey_T, fit.coeff, fit.stderr, fit.flagged,
                predicted_floor, zeta_form, config.trials, config.n_cycles)

    def _summarize(self, summary, feedback, state, rows):
        points = [(row[3], row[7]) for row in rows if row[7] > 0]
        try:
            slope, stderr = analysis.fit_scaling(points)
        except analysis.AnalysisException as e:
            LOG.warning(LC_WARN_NO_FIT, feedback, state, e)
            return

        label = {STATE_UNCORRELATED: theory.STATE_UNCORRELATED,
                 STATE_OPTIMAL: theory.STATE_SQUEEZED}.get(state)
        predicted = float('nan')
        if label is not None:
            try:
                predicted = theory.predicted_exponents(
                    feedback, self.reader.noise_kind(), label, derived=True)
            except theory.TheoryException:
                pass
        summary.append((feedback, state, slope, stderr, predicted,
                        len(points)))


class PsdUseCase(SimulationUseCase):
    """Slaved-LO spectra: free running, locked, and locked with squeezing.

    The squeezed state has xi = N^p with p = [psd] squeezed_xi_exponent.
    """

    def execute(self):
        n_atoms = self.reader.single_n_atoms()
        method = self.reader.method([n_atoms])
        config = self.reader.loop_config()
        require(config.mode == MODE_TRAJECTORY, ConfigurationException,
                LC_ERR_PSD_MODE, config.mode)
        require(config.n_cycles >= MIN_PSD_CYCLES, ConfigurationException,
                LC_ERR_PSD_CYCLES, MIN_PSD_CYCLES, config.n_cycles)
        noise = self.reader.noise_model(config.ramsey_T, config.n_cycles)
        settings = self.reader.psd_settings()

        xi = n_atoms ** settings.xi_exponent
        try:
            kappa = spinstate.kappa_for_xi(n_atoms, xi, method)
        except spinstate.EnsembleException as e:
            raise ConfigurationException(LC_ERR_XI.format(e))
        squeezed = spinstate.gaussian_moments(
            EnsembleSpec(n_atoms, FAMILY_GAUSSIAN, kappa), method)
        plain = spinstate.uncorrelated_moments(EnsembleSpec(n_atoms))

        segment = (min(settings.segment_cycles, config.n_cycles)
                   * config.steps_per_cycle)
        free = config.replace(feedback=FeedbackLaw(FEEDBACK_NONE))
        spectra = [self._spectrum(free, noise, plain, segment,
                                  settings.overlap),
                   self._spectrum(config, noise, plain, segment,
                                  settings.overlap),
                   self._spectrum(config, noise, squeezed, segment,
                                  settings.overlap)]

        notes = {'kappa_squeezed': kappa, 'xi_squeezed': squeezed.xi,
                 'segment_len': segment,
                 'segments': spectra[0].segment_count}
        table = ResultTable(PSD_FILE, PSD_COLUMNS, notes=notes)
        for row in zip(spectra[0].freqs, *(s.psd for s in spectra)):
            table.append(row)
        return [table]

    def _spectrum(self, config, noise, moments, segment, overlap):
        traces = clockloop.run_trials(config, noise, moments, self.executor)
        return analysis.average_psd([
            analysis.psd_welch(trace.slaved_freq, segment, overlap)
            for trace in traces])


USE_CASES = {
    COMMAND_MOMENTS: MomentsUseCase,
    COMMAND_THEORY: TheoryUseCase,
    COMMAND_RUN: RunUseCase,
    COMMAND_SWEEP: SweepUseCase,
    COMMAND_PSD: PsdUseCase,
}


def use_case_for(command):
    """Use case class of a command.

    :raise UseCaseException: Unknown command.
    """

    require(command in USE_CASES, UseCaseException, LC_ERR_COMMAND, command,
            sorted(USE_CASES))
    return USE_CASES[command]
