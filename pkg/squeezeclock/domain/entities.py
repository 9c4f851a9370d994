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

import abc
import math
from collections import namedtuple

import numpy as np
import six

from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

FAMILY_UNCORRELATED = 'uncorrelated'
FAMILY_GAUSSIAN = 'gaussian'
FAMILIES = (FAMILY_UNCORRELATED, FAMILY_GAUSSIAN)

NOISE_WHITE = 'white_fm'
NOISE_FLICKER = 'flicker_fm'
NOISE_NONE = 'none'
NOISE_KINDS = (NOISE_WHITE, NOISE_FLICKER, NOISE_NONE)

FEEDBACK_LINEAR = 'linear'
FEEDBACK_NONLINEAR = 'nonlinear'
FEEDBACK_NONE = 'none'
FEEDBACK_KINDS = (FEEDBACK_LINEAR, FEEDBACK_NONLINEAR, FEEDBACK_NONE)

DEPHASING_COLLECTIVE = 'collective'
DEPHASING_INDEPENDENT = 'independent'
DEPHASING_MODES = (DEPHASING_COLLECTIVE, DEPHASING_INDEPENDENT)

MODE_TRAJECTORY = 'trajectory'
MODE_FAST = 'fast'
LOOP_MODES = (MODE_TRAJECTORY, MODE_FAST)

"""Relative slack on the κ ≤ √N bound so that κ = sqrt(N) passes."""
KAPPA_BOUND_SLACK = 1e-12

"""Numeric tolerance (per atom) on the uncertainty relation."""
UNCERTAINTY_TOLERANCE = 1e-9

"""Smallest loop length for which a white floor can be estimated."""
MIN_CYCLES = 8

"""Upper bound of the servo gain for which the discrete loop is stable."""
MAX_GAIN = 2.0

LC_ERR_N_ATOMS = 'n_atoms must be an integer >= 2, got {}'
LC_ERR_FAMILY = 'Unknown state family "{}", expected one of {}'
LC_ERR_KAPPA_MISSING = 'kappa is required for the gaussian family'
LC_ERR_KAPPA_RANGE = 'kappa={} outside [1, sqrt(N)={}] for N={}'
LC_ERR_JZ_MEAN = 'jz_mean={} must lie in (0, N/2={}]'
LC_ERR_VARIANCE = '{} must be a finite non-negative number, got {}'
LC_ERR_UNCERTAINTY = ('Uncertainty relation violated: dJy*dJx={} < '
                      '<Jz>/2={}')
LC_ERR_NOISE_KIND = 'Unknown noise kind "{}", expected one of {}'
LC_ERR_GAMMA = 'gamma must be >= 0, got {}'
LC_ERR_T_REF = 't_ref must be > 0 for flicker noise, got {}'
LC_ERR_DECADES = 'f_floor_decades must be an integer >= 1, got {}'
LC_ERR_DT = 'dt must be > 0, got {}'
LC_ERR_EMPTY = 'A trajectory needs at least one sample'
LC_ERR_FEEDBACK = 'Unknown feedback "{}", expected one of {}'
LC_ERR_GAIN = 'gain must lie in (0, {}], got {}'
LC_ERR_DEPHASING = 'Unknown dephasing mode "{}", expected one of {}'
LC_ERR_POSITIVE = '{} must be > 0, got {}'
LC_ERR_CYCLES = 'n_cycles must be >= {}, got {}'
LC_ERR_COUNT = '{} must be an integer >= 1, got {}'
LC_ERR_LOOP_MODE = 'Unknown loop mode "{}", expected one of {}'
LC_ERR_LENGTHS = 'Per-cycle arrays must all have length {}'
LC_ERR_SPAN = 'slaved_freq covers {}s, expected n_cycles*T={}s'
LC_ERR_TAUS = 'taus must be strictly increasing'
LC_ERR_PSD = 'freqs must be positive, increasing and match psd in length'


class EntityException(SqueezeClockException):
    """Raised when a value object is built with inconsistent fields."""

    pass


@six.add_metaclass(abc.ABCMeta)
class BaseEntity:
    """Base class for Entities."""

    pass


def _frozen(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


def _check_variance(name, value):
    require(np.isfinite(value) and value >= 0, EntityException,
            LC_ERR_VARIANCE, name, value)


class EnsembleSpec(BaseEntity):
    """Atom number and initial-state family of the ensemble.

    :type n_atoms: int
    :param n_atoms: Number of atoms N (>= 2).

    :type family: str
    :param family: ``uncorrelated`` or ``gaussian``.

    :type kappa: float
    :param kappa: Width of the Gaussian family, 1 <= kappa <= sqrt(N).
    """

    def __init__(self, n_atoms, family=FAMILY_UNCORRELATED, kappa=None):
        require(isinstance(n_atoms, (int, np.integer)) and n_atoms >= 2,
                EntityException, LC_ERR_N_ATOMS, n_atoms)
        require(family in FAMILIES, EntityException, LC_ERR_FAMILY, family,
                FAMILIES)

        if family == FAMILY_GAUSSIAN:
            require(kappa is not None, EntityException, LC_ERR_KAPPA_MISSING)
            upper = math.sqrt(n_atoms)
            require(1.0 <= kappa <= upper * (1 + KAPPA_BOUND_SLACK),
                    EntityException, LC_ERR_KAPPA_RANGE, kappa, upper,
                    n_atoms)
            kappa = float(min(kappa, upper))

        self._n_atoms = int(n_atoms)
        self._family = family
        self._kappa = kappa

    @property
    def n_atoms(self):
        return self._n_atoms

    @property
    def family(self):
        return self._family

    @property
    def kappa(self):
        return self._kappa

    @property
    def total_spin(self):
        """Total angular momentum quantum number J = N/2."""

        return self._n_atoms / 2.0

    def __repr__(self):
        return 'EnsembleSpec(n_atoms={}, family={!r}, kappa={!r})'.format(
            self._n_atoms, self._family, self._kappa)


class StateMoments(namedtuple('StateMoments', 'n_atoms jz_mean var_jy var_jz '
                                              'var_jx xi')):
    """First and second moments of the collective spin.

    Build instances with :meth:`create`, which derives ``xi`` from the
    other fields and checks the invariants.
    """

    __slots__ = ()

    @classmethod
    def create(cls, n_atoms, jz_mean, var_jy, var_jz, var_jx):
        """
        :type n_atoms: int
        :param n_atoms: Number of atoms N.

        :type jz_mean: float
        :param jz_mean: <J_z> in spin units, 0 < <J_z> <= N/2.

        :rtype: StateMoments
        :return: Validated moments with xi = sqrt(N) dJy / <J_z>.
        """

        half = n_atoms / 2.0
        tol = UNCERTAINTY_TOLERANCE * n_atoms
        require(0 < jz_mean <= half + tol, EntityException, LC_ERR_JZ_MEAN,
                jz_mean, half)
        for name, value in (('var_jy', var_jy), ('var_jz', var_jz),
                            ('var_jx', var_jx)):
            _check_variance(name, value)

        product = math.sqrt(var_jy * var_jx)
        require(product >= jz_mean / 2.0 - tol, EntityException,
                LC_ERR_UNCERTAINTY, product, jz_mean / 2.0)

        xi = math.sqrt(n_atoms) * math.sqrt(var_jy) / jz_mean
        return cls(int(n_atoms), float(jz_mean), float(var_jy),
                   float(var_jz), float(var_jx), xi)

    @property
    def d_jy(self):
        return math.sqrt(self.var_jy)

    @property
    def d_jz(self):
        return math.sqrt(self.var_jz)

    @property
    def d_jx(self):
        return math.sqrt(self.var_jx)

    @property
    def mean_jz_squared(self):
        """<J_z^2> = var_jz + <J_z>^2."""

        return self.var_jz + self.jz_mean ** 2

    def replace(self, **fields):
        """Copy with some fields changed; ``xi`` is recomputed."""

        values = self._asdict()
        values.update(fields)
        values.pop('xi')
        return StateMoments.create(**values)


AtomicSample = namedtuple('AtomicSample', 'jy jz')


class LONoiseModel(BaseEntity):
    """Free-running local oscillator frequency noise.

    :type kind: str
    :param kind: ``white_fm``, ``flicker_fm`` or ``none``.

    :type gamma: float
    :param gamma: Dephasing rate in 1/s used for calibration.

    :type t_ref: float
    :param t_ref: Flicker calibration window in s.

    :type f_floor_decades: int
    :param f_floor_decades: Flicker band extent below 1/t_ref in decades.
    """

    def __init__(self, kind, gamma=0.0, t_ref=None, f_floor_decades=4):
        require(kind in NOISE_KINDS, EntityException, LC_ERR_NOISE_KIND, kind,
                NOISE_KINDS)
        require(gamma >= 0, EntityException, LC_ERR_GAMMA, gamma)
        if kind == NOISE_FLICKER:
            require(t_ref is not None and t_ref > 0, EntityException,
                    LC_ERR_T_REF, t_ref)
        require(isinstance(f_floor_decades, (int, np.integer))
                and f_floor_decades >= 1, EntityException, LC_ERR_DECADES,
                f_floor_decades)

        self.kind = kind
        self.gamma = float(gamma)
        self.t_ref = None if t_ref is None else float(t_ref)
        self.f_floor_decades = int(f_floor_decades)

    def with_t_ref(self, t_ref):
        """Copy of the model calibrated at another reference window."""

        return LONoiseModel(self.kind, self.gamma, t_ref,
                            self.f_floor_decades)

    def __repr__(self):
        return ('LONoiseModel(kind={!r}, gamma={!r}, t_ref={!r}, '
                'f_floor_decades={!r})').format(
            self.kind, self.gamma, self.t_ref, self.f_floor_decades)


class NoiseTrajectory(BaseEntity):
    """Uniformly sampled frequency offset record in rad/s.

    :type dt: float
    :param dt: Sample spacing in s.

    :type samples: numpy.ndarray
    :param samples: Frequency offsets, read-only after construction.
    """

    def __init__(self, dt, samples):
        require(dt > 0, EntityException, LC_ERR_DT, dt)
        samples = _frozen(samples)
        require(samples.ndim == 1 and samples.size >= 1, EntityException,
                LC_ERR_EMPTY)

        self._dt = float(dt)
        self._samples = samples

    @property
    def dt(self):
        return self._dt

    @property
    def samples(self):
        return self._samples

    @property
    def n_steps(self):
        return self._samples.size

    @property
    def span(self):
        """Covered time in s."""

        return self._dt * self._samples.size


class FeedbackLaw(namedtuple('FeedbackLaw', 'kind gain')):
    """Servo law applied at the end of every Ramsey cycle."""

    __slots__ = ()

    def __new__(cls, kind, gain=1.0):
        require(kind in FEEDBACK_KINDS, EntityException, LC_ERR_FEEDBACK,
                kind, FEEDBACK_KINDS)
        if kind != FEEDBACK_NONE:
            require(0 < gain <= MAX_GAIN, EntityException, LC_ERR_GAIN,
                    MAX_GAIN, gain)
        return super(FeedbackLaw, cls).__new__(cls, kind, float(gain))


class Dephasing(namedtuple('Dephasing', 'gamma_e mode')):
    """Environmental dephasing of the atoms at rate ``gamma_e``."""

    __slots__ = ()

    def __new__(cls, gamma_e, mode=DEPHASING_INDEPENDENT):
        require(gamma_e >= 0, EntityException, LC_ERR_GAMMA, gamma_e)
        require(mode in DEPHASING_MODES, EntityException, LC_ERR_DEPHASING,
                mode, DEPHASING_MODES)
        return super(Dephasing, cls).__new__(cls, float(gamma_e), mode)


class LoopConfig(BaseEntity):
    """Closed-loop run parameters.

    :type ramsey_T: float
    :param ramsey_T: Ramsey (cycle) time T in s.

    :type n_cycles: int
    :param n_cycles: Number of Ramsey cycles per trial (>= 8).

    :type feedback: FeedbackLaw
    :param feedback: Servo law and gain.

    :type dephasing: Dephasing
    :param dephasing: Optional environmental dephasing.

    :type mode: str
    :param mode: ``trajectory`` (sampled LO record) or ``fast`` (per-cycle
        white phases drawn directly).

    :type linearized: bool
    :param linearized: Use the linearized error signal (test hook).
    """

    def __init__(self, ramsey_T, n_cycles, feedback=None, steps_per_cycle=32,
                 trials=1, master_seed=0, omega=1.0, dephasing=None,
                 mode=MODE_TRAJECTORY, linearized=False):
        require(ramsey_T > 0, EntityException, LC_ERR_POSITIVE, 'ramsey_T',
                ramsey_T)
        require(n_cycles >= MIN_CYCLES, EntityException, LC_ERR_CYCLES,
                MIN_CYCLES, n_cycles)
        for name, value in (('steps_per_cycle', steps_per_cycle),
                            ('trials', trials)):
            require(isinstance(value, (int, np.integer)) and value >= 1,
                    EntityException, LC_ERR_COUNT, name, value)
        require(omega > 0, EntityException, LC_ERR_POSITIVE, 'omega', omega)
        require(mode in LOOP_MODES, EntityException, LC_ERR_LOOP_MODE, mode,
                LOOP_MODES)

        self.ramsey_T = float(ramsey_T)
        self.n_cycles = int(n_cycles)
        self.feedback = feedback or FeedbackLaw(FEEDBACK_LINEAR)
        self.steps_per_cycle = int(steps_per_cycle)
        self.trials = int(trials)
        self.master_seed = int(master_seed)
        self.omega = float(omega)
        self.dephasing = dephasing
        self.mode = mode
        self.linearized = bool(linearized)

    @property
    def dt(self):
        """Trajectory sample spacing T / steps_per_cycle."""

        return self.ramsey_T / self.steps_per_cycle

    @property
    def duration(self):
        return self.ramsey_T * self.n_cycles

    def replace(self, **fields):
        """Copy with some fields changed."""

        values = dict(
            ramsey_T=self.ramsey_T, n_cycles=self.n_cycles,
            feedback=self.feedback, steps_per_cycle=self.steps_per_cycle,
            trials=self.trials, master_seed=self.master_seed,
            omega=self.omega, dephasing=self.dephasing, mode=self.mode,
            linearized=self.linearized)
        values.update(fields)
        return LoopConfig(**values)


class ClockTrace(BaseEntity):
    """Per-cycle record of one closed-loop trial.

    :type ramsey_T: float
    :param ramsey_T: Cycle time T in s.

    :param phase_o: Phase accumulated by the slaved LO in every cycle (rad).

    :param error_signal: Measured error signal (spin units).

    :param correction: Applied frequency correction (rad/s).

    :type slaved_freq: NoiseTrajectory
    :param slaved_freq: Free noise plus active corrections.
    """

    def __init__(self, ramsey_T, phase_o, error_signal, correction,
                 slaved_freq):
        phase_o = _frozen(phase_o)
        error_signal = _frozen(error_signal)
        correction = _frozen(correction)
        n = phase_o.size
        require(error_signal.size == n and correction.size == n,
                EntityException, LC_ERR_LENGTHS, n)
        expected = n * ramsey_T
        require(abs(slaved_freq.span - expected) <= 1e-9 * expected,
                EntityException, LC_ERR_SPAN, slaved_freq.span, expected)

        self._ramsey_T = float(ramsey_T)
        self._phase_o = phase_o
        self._error_signal = error_signal
        self._correction = correction
        self._slaved_freq = slaved_freq

    @property
    def ramsey_T(self):
        return self._ramsey_T

    @property
    def n_cycles(self):
        return self._phase_o.size

    @property
    def phase_o(self):
        return self._phase_o

    @property
    def error_signal(self):
        return self._error_signal

    @property
    def correction(self):
        return self._correction

    @property
    def slaved_freq(self):
        return self._slaved_freq


class StabilityCurve(BaseEntity):
    """Allan deviation points and the fitted white floor.

    :param taus: Averaging times in s, strictly increasing.

    :param sigma_y: Fractional frequency deviation at each tau.

    :param stderr: Standard error of each sigma_y.

    :type cycle_time: float
    :param cycle_time: Ramsey time T the taus are multiples of.
    """

    def __init__(self, taus, sigma_y, stderr, cycle_time, floor_coeff=0.0,
                 fit_range=None, flagged=False):
        taus = _frozen(taus)
        require(taus.size == 0 or np.all(np.diff(taus) > 0), EntityException,
                LC_ERR_TAUS)
        require(floor_coeff >= 0, EntityException, LC_ERR_VARIANCE,
                'floor_coeff', floor_coeff)

        self.taus = taus
        self.sigma_y = _frozen(sigma_y)
        self.stderr = _frozen(stderr)
        self.cycle_time = float(cycle_time)
        self.floor_coeff = float(floor_coeff)
        self.fit_range = fit_range
        self.flagged = bool(flagged)

    @property
    def points(self):
        return list(zip(self.taus, self.sigma_y, self.stderr))

    def with_floor(self, fit):
        """Copy carrying the result of a floor fit.

        :type fit: FloorFit
        :param fit: Result of :func:`squeezeclock.domain.analysis.fit_floor`.
        """

        return StabilityCurve(self.taus, self.sigma_y, self.stderr,
                              self.cycle_time, fit.coeff, fit.fit_range,
                              fit.flagged)


FloorFit = namedtuple('FloorFit', 'coeff stderr slope slope_stderr fit_range '
                                  'flagged')


class PsdEstimate(BaseEntity):
    """One-sided power spectral density in (rad/s)^2/Hz."""

    def __init__(self, freqs, psd, segment_count):
        freqs = _frozen(freqs)
        psd = _frozen(psd)
        require(freqs.size == psd.size and freqs.size > 0
                and freqs[0] > 0 and np.all(np.diff(freqs) > 0),
                EntityException, LC_ERR_PSD)

        self.freqs = freqs
        self.psd = psd
        self.segment_count = int(segment_count)


TheoryPrediction = namedtuple('TheoryPrediction', 'sigma_y zeta gamma_T_opt '
                                                  'kappa_opt '
                                                  'scaling_exponent')

KappaOptimum = namedtuple('KappaOptimum', 'kappa value converged')


COMMAND_MOMENTS = 'moments'
COMMAND_THEORY = 'theory'
COMMAND_RUN = 'run'
COMMAND_SWEEP = 'sweep'
COMMAND_PSD = 'psd'
COMMANDS = (COMMAND_MOMENTS, COMMAND_THEORY, COMMAND_RUN, COMMAND_SWEEP,
            COMMAND_PSD)

LC_ERR_COMMAND = 'Unknown command "{}", expected one of {}'
LC_ERR_SEED = 'seed must be a non-negative integer, got {}'
LC_ERR_COLUMNS = 'Row {} has {} values for {} columns'


class RunManifest(BaseEntity):
    """One command-line invocation.

    :type command: str
    :param command: One of COMMANDS.

    :type config_path: str
    :param config_path: INI configuration file.

    :type output_dir: str
    :param output_dir: Directory the result files are written to.

    :type seed_override: int
    :param seed_override: Replaces ``[loop] seed`` when given.

    :type threads: int
    :param threads: Worker processes for the trials.
    """

    def __init__(self, command, config_path, output_dir, seed_override=None,
                 threads=1):
        require(command in COMMANDS, EntityException, LC_ERR_COMMAND,
                command, COMMANDS)
        require(seed_override is None
                or (isinstance(seed_override, (int, np.integer))
                    and seed_override >= 0),
                EntityException, LC_ERR_SEED, seed_override)
        require(isinstance(threads, (int, np.integer)) and threads >= 1,
                EntityException, LC_ERR_COUNT, 'threads', threads)

        self.command = command
        self.config_path = config_path
        self.output_dir = output_dir
        self.seed_override = seed_override
        self.threads = int(threads)

    def __repr__(self):
        return 'RunManifest({}, {}, {})'.format(self.command,
                                                self.config_path,
                                                self.output_dir)


class ResultTable(BaseEntity):
    """Rows of one result file and the values noted in its header.

    :type name: str
    :param name: File name, e.g. ``moments.csv``.

    :type columns: tuple of str
    :param columns: Column names.

    :type rows: list of tuple
    :param rows: Values in column order.

    :type notes: dict
    :param notes: Scalar results reported in the header (floor fits,
        exponent fits).
    """

    def __init__(self, name, columns, rows=(), notes=None):
        self.name = name
        self.columns = tuple(columns)
        self.rows = []
        self.notes = dict(notes or {})
        for row in rows:
            self.append(row)

    def append(self, row):
        row = tuple(row)
        require(len(row) == len(self.columns), EntityException,
                LC_ERR_COLUMNS, len(self.rows), len(row), len(self.columns))
        self.rows.append(row)

    def column(self, name):
        index = self.columns.index(name)
        return [row[index] for row in self.rows]
