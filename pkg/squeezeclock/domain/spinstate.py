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

"""Collective-spin statistics of the atomic ensemble.

Moments are returned in spin units with the mean spin along +z. The
Gaussian family is expanded in the J_y eigenbasis; the raising operator
about the y axis is ``J_+ = J_z + i J_x`` with matrix elements
``a_m = sqrt(J(J+1) - m(m+1))``.
"""

import logging
import math
import re

import numpy as np
from scipy import optimize

from squeezeclock.domain.entities import (
    AtomicSample, EnsembleSpec, EntityException, FAMILY_GAUSSIAN,
    FAMILY_UNCORRELATED, StateMoments)
from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

LOG = logging.getLogger(__name__)

METHOD_AUTO = 'auto'
METHOD_EXACT = 'exact'
METHOD_ASYMPTOTIC = 'asymptotic'
METHODS = (METHOD_AUTO, METHOD_EXACT, METHOD_ASYMPTOTIC)

"""Largest atom number accepted by the exact summation."""
EXACT_N_CAP = 10 ** 7

"""Amplitudes beyond |m| > AMPLITUDE_CUTOFF * kappa are below 1e-27."""
AMPLITUDE_CUTOFF = 8.0

"""Validity window of the asymptotic moments, kappa in [3, sqrt(N)/3]."""
ASYMPTOTIC_KAPPA_MIN = 3.0
ASYMPTOTIC_SQRT_N_FRACTION = 1.0 / 3.0

LC_ERR_FAMILY = 'Operation needs the {} family, got "{}"'
LC_ERR_METHOD = 'Unknown moment method "{}", expected one of {}'
LC_ERR_EXACT_CAP = 'Exact moments are limited to N <= {}, got N={}'
LC_ERR_RULE = 'Cannot read kappa rule "{}", expected a number or n^p'
LC_ERR_XI_RANGE = 'xi={} not reachable for N={}, range is [{}, {}]'
LC_WARN_WINDOW = ('Asymptotic moments requested at kappa=%g outside '
                  '[%g, %g] for N=%d')

RULE_PATTERN = re.compile(r'^\s*[nN]\s*\^\s*([-+]?[0-9.]+(?:[eE][-+]?\d+)?)'
                          r'\s*$')


class EnsembleException(SqueezeClockException):
    """Raised on invalid ensemble requests."""

    pass


def _require_family(spec, family):
    require(spec.family == family, EnsembleException, LC_ERR_FAMILY, family,
            spec.family)


def uncorrelated_moments(spec):
    """Moments of the coherent (uncorrelated) state along +z.

    :type spec: EnsembleSpec
    :param spec: Uncorrelated ensemble.

    :rtype: StateMoments
    """

    _require_family(spec, FAMILY_UNCORRELATED)
    quarter = spec.n_atoms / 4.0
    return StateMoments.create(spec.n_atoms, spec.n_atoms / 2.0, quarter,
                               0.0, quarter)


class GaussianSpinState(object):
    """Normalized amplitudes of the Gaussian squeezed state.

    ``c_m`` is proportional to ``(-1)^(m+J) exp(-(m/kappa)^2)`` on the J_y
    lattice ``m = -J..J``. Amplitudes are evaluated only inside
    ``|m| <= AMPLITUDE_CUTOFF * kappa``; the rest vanish in double
    precision.

    :type spec: EnsembleSpec
    :param spec: Gaussian ensemble.
    """

    def __init__(self, spec):
        _require_family(spec, FAMILY_GAUSSIAN)
        require(spec.n_atoms <= EXACT_N_CAP, EnsembleException,
                LC_ERR_EXACT_CAP, EXACT_N_CAP, spec.n_atoms)

        n = spec.n_atoms
        j = spec.total_spin
        reach = AMPLITUDE_CUTOFF * spec.kappa
        k_low = max(0, int(math.ceil(j - reach)))
        k_high = min(n, int(math.floor(j + reach)))
        k = np.arange(k_low, k_high + 1)
        m = k - j

        # Log weights keep the profile finite for any kappa.
        log_weight = -(m / spec.kappa) ** 2
        amplitudes = np.exp(log_weight - log_weight.max())
        amplitudes[k % 2 == 1] *= -1.0
        amplitudes /= np.sqrt(np.sum(amplitudes ** 2))

        self._spec = spec
        self._m = m
        self._amplitudes = amplitudes

    @property
    def spec(self):
        return self._spec

    @property
    def m(self):
        """J_y eigenvalues of the retained basis states."""

        return self._m

    @property
    def amplitudes(self):
        return self._amplitudes

    def _ladder(self, m):
        j = self._spec.total_spin
        return np.sqrt(np.maximum(j * (j + 1) - m * (m + 1), 0.0))

    def _raising(self):
        c = self._amplitudes
        m = self._m[:-1]
        return c[:-1] * c[1:] * self._ladder(m), m

    def mean_jy(self):
        return float(np.sum(self._amplitudes ** 2 * self._m))

    def mean_jy_squared(self):
        return float(np.sum(self._amplitudes ** 2 * self._m ** 2))

    def mean_jz(self):
        """|<J_+>|; the state is rotated by pi about y if needed."""

        terms, _ = self._raising()
        return abs(float(np.sum(terms)))

    def mean_raising_squared(self):
        """<J_+^2> = <J_z^2> - <J_x^2> for real amplitudes."""

        c = self._amplitudes
        m = self._m[:-2]
        return float(np.sum(c[:-2] * c[2:] * self._ladder(m)
                            * self._ladder(m + 1)))

    def symmetric_covariance_yz(self):
        """<(J_y J_z + J_z J_y)/2> - <J_y><J_z>."""

        terms, m = self._raising()
        sign = math.copysign(1.0, np.sum(terms))
        return (sign * float(np.sum(terms * (m + 0.5)))
                - self.mean_jy() * self.mean_jz())

    def moments(self):
        """
        :rtype: StateMoments
        :return: Exact moments of the state.
        """

        j = self._spec.total_spin
        casimir = j * (j + 1)
        jy2 = self.mean_jy_squared()
        p2 = self.mean_raising_squared()
        jz = self.mean_jz()

        var_jy = jy2 - self.mean_jy() ** 2
        var_jz = max((casimir - jy2 + p2) / 2.0 - jz ** 2, 0.0)
        var_jx = max((casimir - jy2 - p2) / 2.0, 0.0)
        return StateMoments.create(self._spec.n_atoms, jz, var_jy, var_jz,
                                   var_jx)


def gaussian_state(spec):
    """
    :type spec: EnsembleSpec
    :param spec: Gaussian ensemble, N <= EXACT_N_CAP.

    :rtype: GaussianSpinState
    """

    return GaussianSpinState(spec)


def exact_gaussian_moments(spec):
    return GaussianSpinState(spec).moments()


def asymptotic_window(n_atoms):
    """Range of kappa where the asymptotic moments hold to 5%."""

    return (ASYMPTOTIC_KAPPA_MIN,
            math.sqrt(n_atoms) * ASYMPTOTIC_SQRT_N_FRACTION)


def asymptotic_gaussian_moments(spec, warn=True):
    """Closed-form moments for 1 << kappa << sqrt(N).

    var_jy = kappa^2/4, <J_z> = J(1 - kappa^2/(8J^2) - 1/(2 kappa^2)),
    var_jz = J^2 (1 - exp(-1/kappa^2))^2 / 2 and
    var_jx = J^2 (1 - exp(-2/kappa^2)) / 2. The leading terms of the last
    two are J^2/(2 kappa^4) and J^2/kappa^2.

    :type spec: EnsembleSpec
    :param spec: Gaussian ensemble.

    :type warn: bool
    :param warn: Log a warning when kappa is outside the validity window.

    :rtype: StateMoments
    """

    _require_family(spec, FAMILY_GAUSSIAN)
    kappa = spec.kappa
    j = spec.total_spin
    low, high = asymptotic_window(spec.n_atoms)
    if warn and not low <= kappa <= high:
        LOG.warning(LC_WARN_WINDOW, kappa, low, high, spec.n_atoms)

    inv_k2 = 1.0 / kappa ** 2
    jz = j * (1.0 - kappa ** 2 / (8.0 * j ** 2) - 0.5 * inv_k2)
    var_jy = kappa ** 2 / 4.0
    var_jz = j ** 2 * (-math.expm1(-inv_k2)) ** 2 / 2.0
    var_jx = j ** 2 * (-math.expm1(-2.0 * inv_k2)) / 2.0
    return StateMoments.create(spec.n_atoms, jz, var_jy, var_jz, var_jx)


def resolve_method(spec, method=METHOD_AUTO):
    """Method actually used for ``spec``: ``exact`` or ``asymptotic``.

    Uncorrelated moments are closed-form and always exact.
    """

    require(method in METHODS, EnsembleException, LC_ERR_METHOD, method,
            METHODS)
    if spec.family == FAMILY_UNCORRELATED:
        return METHOD_EXACT
    if method == METHOD_AUTO:
        return (METHOD_EXACT if spec.n_atoms <= EXACT_N_CAP
                else METHOD_ASYMPTOTIC)
    return method


def gaussian_moments(spec, method=METHOD_AUTO, warn=True):
    """Moments of the Gaussian family by the requested method.

    ``auto`` sums exactly up to EXACT_N_CAP atoms and switches to the
    asymptotic forms beyond; ``warn`` is passed to the asymptotic path.
    """

    _require_family(spec, FAMILY_GAUSSIAN)
    if resolve_method(spec, method) == METHOD_EXACT:
        return exact_gaussian_moments(spec)
    return asymptotic_gaussian_moments(spec, warn)


def ensemble_moments(spec, method=METHOD_AUTO):
    """
    :type spec: EnsembleSpec
    :param spec: Any ensemble.

    :type method: str
    :param method: ``auto``, ``exact`` or ``asymptotic`` (Gaussian only).

    :rtype: StateMoments
    """

    if spec.family == FAMILY_UNCORRELATED:
        return uncorrelated_moments(spec)
    return gaussian_moments(spec, method)


def sample_atomic_noise(moments, rng, size=None):
    """Draw projection-noise realizations of J_y and J_z.

    J_y is drawn before J_z. With ``size`` the fields are arrays.

    :type moments: StateMoments
    :param moments: State to sample.

    :type rng: numpy.random.Generator
    :param rng: Random stream.

    :rtype: AtomicSample
    """

    jy = moments.d_jy * rng.standard_normal(size)
    jz = moments.jz_mean + moments.d_jz * rng.standard_normal(size)
    return AtomicSample(jy, jz)


def kappa_from_rule(n_atoms, rule):
    """Evaluate a kappa setting for ``n_atoms`` atoms.

    :type rule: str or float
    :param rule: A number or ``n^p`` meaning kappa = N^p.

    :rtype: float
    """

    if isinstance(rule, (int, float)):
        return float(rule)

    match = RULE_PATTERN.match(rule)
    if match:
        return float(n_atoms) ** float(match.group(1))

    try:
        return float(rule)
    except ValueError:
        raise EnsembleException(LC_ERR_RULE.format(rule))


def xi_of_kappa(n_atoms, kappa, method=METHOD_AUTO):
    spec = EnsembleSpec(n_atoms, FAMILY_GAUSSIAN, kappa)
    return gaussian_moments(spec, method).xi


def kappa_for_xi(n_atoms, xi, method=METHOD_AUTO):
    """Width kappa of the Gaussian state with squeezing parameter ``xi``.

    xi(kappa) increases monotonically on [1, sqrt(N)], so the root is
    unique.

    :rtype: float
    """

    low, high = 1.0, math.sqrt(n_atoms)
    xi_low = xi_of_kappa(n_atoms, low, method)
    xi_high = xi_of_kappa(n_atoms, high, method)
    require(xi_low <= xi <= xi_high, EnsembleException, LC_ERR_XI_RANGE, xi,
            n_atoms, xi_low, xi_high)

    try:
        return optimize.brentq(
            lambda kappa: xi_of_kappa(n_atoms, kappa, method) - xi,
            low, high, xtol=1e-10)
    except (ValueError, EntityException) as e:
        raise EnsembleException(str(e))
