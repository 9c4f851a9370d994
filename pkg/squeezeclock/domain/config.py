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

"""Typed access to run configurations.

Values come from a repository keyed ``section_option``; every value read,
defaults included, is kept so result files can record the resolved
configuration.
"""

import re
from collections import namedtuple, OrderedDict
from fractions import Fraction

import numpy as np

from squeezeclock.domain import analysis, spinstate
from squeezeclock.domain.entities import (
    Dephasing, DEPHASING_INDEPENDENT, DEPHASING_MODES, EnsembleSpec,
    EntityException, FAMILIES, FAMILY_GAUSSIAN, FAMILY_UNCORRELATED,
    FEEDBACK_KINDS, FEEDBACK_LINEAR, FeedbackLaw, LONoiseModel, LOOP_MODES,
    LoopConfig, MODE_FAST, MODE_TRAJECTORY, NOISE_FLICKER, NOISE_KINDS,
    NOISE_WHITE)
from squeezeclock.domain.exceptions import ConfigurationException
from squeezeclock.domain.helper import require, validate_property_type
from squeezeclock.domain.repositories import BaseRepository

KEY_TEMPLATE = '{0}_{1}'

AXIS_T = 'T'
AXIS_KAPPA = 'kappa'
AXIS_N = 'N'
AXES = (AXIS_T, AXIS_KAPPA, AXIS_N)

STATE_UNCORRELATED = 'uncorrelated'
STATE_OPTIMAL = 'optimal'
THEORY_STATES = ('uncorrelated', 'squeezed')

TRUE_VALUES = ('true', 'yes', 'on', '1')
FALSE_VALUES = ('false', 'no', 'off', '0')

"""``log:start:stop:count`` expands to ``count`` log-spaced values."""
LOG_GRID = re.compile(r'^log:([^:]+):([^:]+):(\d+)$')
LIST_SEPARATOR = re.compile(r'[,\s]+')

DEFAULT_CYCLES = 2048
DEFAULT_TRIALS = 16
DEFAULT_PSD_SEGMENT = 256
DEFAULT_SQUEEZED_XI_EXPONENT = '-1/6'

LC_ERR_MISSING = 'Missing required option "{}" in section [{}]'
LC_ERR_VALUE = 'Invalid {} value "{}" for [{}] {}'
LC_ERR_CHOICE = '[{}] {} must be one of {}, got "{}"'
LC_ERR_EMPTY = '[{}] {} must list at least one value'
LC_ERR_SINGLE = '[{}] {} must hold a single value for this command'
LC_ERR_FLICKER_FAST = ('Flicker noise needs the trajectory loop mode; '
                       'fast mode draws white phases only')
LC_ERR_STATE = 'Unknown state "{}", expected uncorrelated, {} or a kappa'
LC_ERR_TAUS = ('Only {} averaging times reach {} cycles; the floor fit '
               'needs {}')
LC_ERR_EXACT_CAP = ('[ensemble] method = exact handles at most {} atoms, '
                    'got {}')
LC_ERR_T_REF = ('[noise] t_ref = {} s is longer than the {} s run '
                '({} cycles of {} s)')
LC_ERR_POSITIVE = '[{}] {} must be positive, got {}'
LC_ERR_OVERLAP = '[analysis] psd_overlap must be in [0, {}], got {}'

MISSING = object()

AnalysisSettings = namedtuple('AnalysisSettings',
                              'taus_cycles floor_min_cycles')

PsdSettings = namedtuple('PsdSettings', 'segment_cycles overlap xi_exponent')

SweepSettings = namedtuple('SweepSettings', 'axis values feedbacks states '
                                            'optimize_t')

TheorySettings = namedtuple('TheorySettings', 'n_atoms tau states feedbacks')


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ', '.join(_format(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value).strip()


def parse_float(text):
    """Float from ``text``; fractions such as ``-1/6`` are accepted."""

    try:
        return float(text)
    except ValueError:
        return float(Fraction(text.replace(' ', '')))


def parse_int(text):
    """Integer from ``text``; integral floats such as ``1e5`` are accepted."""

    try:
        return int(text)
    except ValueError:
        value = parse_float(text)
        if not float(value).is_integer():
            raise ValueError(text)
        return int(value)


def parse_list(text, convert=str):
    """Split a comma or whitespace separated list.

    A single ``log:start:stop:count`` item expands to
    ``numpy.logspace(start, stop, count)``.
    """

    text = text.strip()
    if not text:
        return []

    grid = LOG_GRID.match(text)
    if grid:
        values = np.logspace(parse_float(grid.group(1)),
                             parse_float(grid.group(2)),
                             int(grid.group(3)))
        if convert is parse_int:
            return [int(round(value)) for value in values]
        return [float(value) for value in values]

    return [convert(item) for item in LIST_SEPARATOR.split(text) if item]


class ConfigReader(object):
    """Build domain objects from a configuration repository.

    :type repository: BaseRepository
    :param repository: Source of ``section_option`` raw values.
    """

    def __init__(self, repository):
        self.repository = repository
        self._resolved = OrderedDict()

    @property
    def repository(self):
        return self._repository

    @repository.setter
    @validate_property_type(BaseRepository)
    def repository(self, repository):
        self._repository = repository

    def resolved(self):
        """Every value read so far, grouped by section.

        :rtype: OrderedDict
        """

        return OrderedDict((section, OrderedDict(options))
                           for section, options in self._resolved.items())

    def record(self, section, option, value):
        """Add a value to the resolved configuration."""

        self._resolved.setdefault(section, OrderedDict())[option] = \
            _format(value)

    def get(self, section, option, default=MISSING):
        """Raw string value, or ``default`` when absent.

        :raise ConfigurationException: Required option missing.
        """

        value = self._repository.find_one(KEY_TEMPLATE.format(section,
                                                              option))
        if value is None:
            require(default is not MISSING, ConfigurationException,
                    LC_ERR_MISSING, option, section)
            value = default

        if value is not None:
            self.record(section, option, value)
        return value

    def _typed(self, section, option, default, convert, kind):
        value = self.get(section, option, default)
        if value is None or not isinstance(value, str):
            return value
        try:
            return convert(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigurationException(
                LC_ERR_VALUE.format(kind, value, section, option))

    def get_int(self, section, option, default=MISSING):
        return self._typed(section, option, default, parse_int, 'integer')

    def get_float(self, section, option, default=MISSING):
        return self._typed(section, option, default, parse_float, 'float')

    def get_bool(self, section, option, default=MISSING):
        def convert(text):
            if text.lower() in TRUE_VALUES:
                return True
            if text.lower() in FALSE_VALUES:
                return False
            raise ValueError(text)

        return self._typed(section, option, default, convert, 'boolean')

    def get_choice(self, section, option, choices, default=MISSING):
        value = self.get(section, option, default)
        value = value.strip() if isinstance(value, str) else value
        require(value in choices, ConfigurationException, LC_ERR_CHOICE,
                section, option, choices, value)
        return value

    def get_list(self, section, option, convert=str, default=MISSING):
        """List of values; defaults may be given as lists or strings."""

        if isinstance(default, (list, tuple)):
            default = _format(default)
        values = self._typed(section, option, default,
                             lambda text: parse_list(text, convert), 'list')
        if values is not None:
            require(len(values) > 0, ConfigurationException, LC_ERR_EMPTY,
                    section, option)
        return values

    # ensemble

    def method(self, sizes=()):
        """Moment method of the ``[ensemble]`` section.

        :type sizes: list of int
        :param sizes: Atom numbers that get Gaussian moments.

        :raise ConfigurationException: ``exact`` beyond EXACT_N_CAP atoms.
        """

        method = self.get_choice('ensemble', 'method', spinstate.METHODS,
                                 spinstate.METHOD_AUTO)
        if method == spinstate.METHOD_EXACT:
            for n_atoms in sizes:
                require(n_atoms <= spinstate.EXACT_N_CAP,
                        ConfigurationException, LC_ERR_EXACT_CAP,
                        spinstate.EXACT_N_CAP, n_atoms)
        return method

    def n_atoms_list(self, section='ensemble'):
        return self.get_list(section, 'n_atoms', parse_int)

    def family(self):
        return self.get_choice('ensemble', 'family', FAMILIES,
                               FAMILY_UNCORRELATED)

    def kappa_rules(self):
        return self.get_list('ensemble', 'kappa')

    def ensemble_spec(self, n_atoms, state):
        """Spec for ``state``: ``uncorrelated``, a kappa or an ``n^p`` rule.

        :raise ConfigurationException: Invalid or out-of-range kappa.
        """

        try:
            if state == STATE_UNCORRELATED:
                return EnsembleSpec(n_atoms)
            kappa = spinstate.kappa_from_rule(n_atoms, state)
            return EnsembleSpec(n_atoms, FAMILY_GAUSSIAN, kappa)
        except (EntityException, spinstate.EnsembleException) as e:
            raise ConfigurationException(str(e))

    def ensemble_specs(self):
        """Every (N, kappa) combination of the ``[ensemble]`` section.

        :rtype: list of EnsembleSpec
        """

        n_list = self.n_atoms_list()
        if self.family() == FAMILY_UNCORRELATED:
            return [self.ensemble_spec(n, STATE_UNCORRELATED)
                    for n in n_list]

        rules = self.kappa_rules()
        return [self.ensemble_spec(n, rule) for n in n_list for rule in rules]

    def single_n_atoms(self):
        n_list = self.n_atoms_list()
        require(len(n_list) == 1, ConfigurationException, LC_ERR_SINGLE,
                'ensemble', 'n_atoms')
        return n_list[0]

    def single_ensemble(self):
        specs = self.ensemble_specs()
        require(len(specs) == 1, ConfigurationException, LC_ERR_SINGLE,
                'ensemble', 'n_atoms and kappa')
        return specs[0]

    # noise and loop

    def noise_kind(self):
        return self.get_choice('noise', 'kind', NOISE_KINDS, NOISE_WHITE)

    def gamma(self):
        return self.get_float('noise', 'gamma', 1.0)

    def noise_model(self, ramsey_T, n_cycles=None):
        """LO noise; the flicker reference time defaults to ``ramsey_T``.

        :type n_cycles: int
        :param n_cycles: Cycles of the run; flicker noise needs ``t_ref``
            inside the run.

        :raise ConfigurationException:

        :rtype: LONoiseModel
        """

        kind = self.noise_kind()
        gamma = self.gamma()
        t_ref = self.get_float('noise', 't_ref', None)
        decades = self.get_int('noise', 'f_floor_decades', 4)
        if kind == NOISE_FLICKER and t_ref is None:
            t_ref = ramsey_T
        if kind == NOISE_FLICKER and n_cycles is not None:
            span = ramsey_T * n_cycles
            require(t_ref <= span * (1 + 1e-9), ConfigurationException,
                    LC_ERR_T_REF, t_ref, span, n_cycles, ramsey_T)
        try:
            return LONoiseModel(kind, gamma, t_ref, decades)
        except EntityException as e:
            raise ConfigurationException(str(e))

    def dephasing(self):
        """Environmental dephasing, or None when gamma_e is zero.

        :rtype: Dephasing
        """

        gamma_e = self.get_float('dephasing', 'gamma_e', 0.0)
        mode = self.get_choice('dephasing', 'mode', DEPHASING_MODES,
                               DEPHASING_INDEPENDENT)
        if gamma_e == 0:
            return None
        try:
            return Dephasing(gamma_e, mode)
        except EntityException as e:
            raise ConfigurationException(str(e))

    def feedback(self, kind=None):
        if kind is None:
            kind = self.get_choice('loop', 'feedback', FEEDBACK_KINDS,
                                   FEEDBACK_LINEAR)
        gain = self.get_float('loop', 'gain', 1.0)
        try:
            return FeedbackLaw(kind, gain)
        except EntityException as e:
            raise ConfigurationException(str(e))

    def ramsey_time(self):
        return self.get_float('loop', 'ramsey_t')

    def omega(self):
        return self.get_float('loop', 'omega', 1.0)

    def seed(self):
        return self.get_int('loop', 'seed', 0)

    def loop_config(self, ramsey_T=None):
        """Closed-loop parameters of the ``[loop]`` section.

        :type ramsey_T: float
        :param ramsey_T: Overrides ``[loop] ramsey_t``.

        :rtype: LoopConfig
        """

        if ramsey_T is None:
            ramsey_T = self.ramsey_time()
        mode = self.get_choice('loop', 'mode', LOOP_MODES, MODE_TRAJECTORY)
        require(not (mode == MODE_FAST and self.noise_kind() == NOISE_FLICKER),
                ConfigurationException, LC_ERR_FLICKER_FAST)

        try:
            return LoopConfig(
                ramsey_T,
                self.get_int('loop', 'n_cycles', DEFAULT_CYCLES),
                feedback=self.feedback(),
                steps_per_cycle=self.get_int('loop', 'steps_per_cycle', 32),
                trials=self.get_int('loop', 'trials', DEFAULT_TRIALS),
                master_seed=self.seed(),
                omega=self.omega(),
                dephasing=self.dephasing(),
                mode=mode,
                linearized=self.get_bool('loop', 'linearized', False))
        except EntityException as e:
            raise ConfigurationException(str(e))

    # analysis

    def analysis_settings(self, n_cycles):
        """Averaging times and spectrum settings for runs of ``n_cycles``.

        :raise ConfigurationException: Too few averaging times for a floor
            fit.

        :rtype: AnalysisSettings
        """

        taus = self.get_list('analysis', 'taus', parse_int, None)
        if taus is None:
            ramsey_cycles = analysis.default_taus(n_cycles, 1.0)
            taus = [int(round(value)) for value in ramsey_cycles]
        min_cycles = self.get_int('analysis', 'floor_min_cycles',
                                  analysis.FLOOR_MIN_CYCLES)
        usable = sum(1 for tau in taus if tau >= min_cycles)
        require(usable >= analysis.MIN_FIT_POINTS, ConfigurationException,
                LC_ERR_TAUS, usable, min_cycles, analysis.MIN_FIT_POINTS)

        return AnalysisSettings(taus, min_cycles)

    def sweep_settings(self):
        """
        :rtype: SweepSettings
        """

        axis = self.get_choice('sweep', 'axis', AXES, AXIS_T)
        convert = parse_int if axis == AXIS_N else parse_float
        feedbacks = self.get_list('sweep', 'feedbacks', str, [FEEDBACK_LINEAR])
        for kind in feedbacks:
            require(kind in FEEDBACK_KINDS, ConfigurationException,
                    LC_ERR_CHOICE, 'sweep', 'feedbacks', FEEDBACK_KINDS, kind)

        states = self.get_list('sweep', 'states', str, [STATE_UNCORRELATED])
        for state in states:
            self._check_state(state)

        return SweepSettings(axis, self.get_list('sweep', 'values', convert),
                             feedbacks, states,
                             self.get_bool('sweep', 'optimize_t', False))

    @staticmethod
    def _check_state(state):
        if state in (STATE_UNCORRELATED, STATE_OPTIMAL):
            return
        try:
            spinstate.kappa_from_rule(100, state)
        except spinstate.EnsembleException:
            raise ConfigurationException(LC_ERR_STATE.format(state,
                                                             STATE_OPTIMAL))

    def theory_settings(self):
        """
        :rtype: TheorySettings
        """

        n_atoms = self.get_list('theory', 'n_atoms', parse_int, None)
        if n_atoms is None:
            n_atoms = self.n_atoms_list()
        states = self.get_list('theory', 'states', str, THEORY_STATES)
        for state in states:
            require(state in THEORY_STATES, ConfigurationException,
                    LC_ERR_CHOICE, 'theory', 'states', THEORY_STATES, state)
        feedbacks = self.get_list('theory', 'feedbacks', str,
                                  ['linear', 'nonlinear'])
        for kind in feedbacks:
            require(kind in ('linear', 'nonlinear'), ConfigurationException,
                    LC_ERR_CHOICE, 'theory', 'feedbacks',
                    ('linear', 'nonlinear'), kind)
        tau = self.get_float('theory', 'tau', 1.0)
        require(tau > 0, ConfigurationException, LC_ERR_POSITIVE, 'theory',
                'tau', tau)
        return TheorySettings(n_atoms, tau, states, feedbacks)

    def psd_settings(self):
        """Welch segment (in cycles), overlap and the squeezed-state xi
        exponent of the spectrum comparison.

        :rtype: PsdSettings
        """

        segment = self.get_int('analysis', 'psd_segment', DEFAULT_PSD_SEGMENT)
        require(segment > 0, ConfigurationException, LC_ERR_POSITIVE,
                'analysis', 'psd_segment', segment)
        overlap = self.get_float('analysis', 'psd_overlap', 0.5)
        require(0 <= overlap <= analysis.MAX_OVERLAP, ConfigurationException,
                LC_ERR_OVERLAP, analysis.MAX_OVERLAP, overlap)

        return PsdSettings(
            segment, overlap,
            self.get_float('psd', 'squeezed_xi_exponent',
                           DEFAULT_SQUEEZED_XI_EXPONENT))
