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

"""Analytic stability predictions of the locked clock.

All floors are expressed as ``sigma_y * sqrt(tau)``; with ``omega = 1`` and
``gamma = 1`` they are the dimensionless coefficients reported next to the
simulated floors.
"""

import logging
import math

import numpy as np
from scipy import optimize

from squeezeclock.domain import spinstate
from squeezeclock.domain.entities import (
    DEPHASING_COLLECTIVE, DEPHASING_INDEPENDENT, EnsembleSpec,
    FAMILY_GAUSSIAN, FEEDBACK_LINEAR, FEEDBACK_NONLINEAR, KappaOptimum,
    NOISE_FLICKER, NOISE_NONE, NOISE_WHITE, TheoryPrediction)
from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

LOG = logging.getLogger(__name__)

"""Largest gamma*T the nonlinear servo still captures."""
NONLINEAR_GAMMA_T = 0.1

"""Smallest ensemble handled by :func:`optimize_kappa`."""
MIN_OPTIMIZE_N = 100

"""Relative tolerance of the golden-section search on kappa."""
KAPPA_TOLERANCE = 1e-3

"""Points of the coarse logarithmic grid used to bracket the optimum."""
KAPPA_GRID_POINTS = 41

STATE_UNCORRELATED = 'uncorrelated'
STATE_SQUEEZED = 'squeezed'
STATES = (STATE_UNCORRELATED, STATE_SQUEEZED)

ZETA_PREFACTOR = 3.0 / 2 ** (4.0 / 3)

# d log(sigma_y) / d log(N) with the Ramsey time optimized per N.
WHITE_EXPONENTS = {
    (FEEDBACK_LINEAR, STATE_UNCORRELATED): -1.0 / 3,
    (FEEDBACK_LINEAR, STATE_SQUEEZED): -1.0 / 2,
    (FEEDBACK_NONLINEAR, STATE_UNCORRELATED): -1.0 / 2,
    (FEEDBACK_NONLINEAR, STATE_SQUEEZED): -2.0 / 3,
}

# Squeezed minus uncorrelated exponent.
IMPROVEMENTS = {
    (FEEDBACK_LINEAR, NOISE_WHITE): -1.0 / 6,
    (FEEDBACK_NONLINEAR, NOISE_WHITE): -1.0 / 6,
    (FEEDBACK_LINEAR, NOISE_FLICKER): -5.0 / 24,
    (FEEDBACK_NONLINEAR, NOISE_FLICKER): -1.0 / 6,
}

# Uncorrelated flicker baselines follow from the optimal-time rules; they
# are returned only when derived values are requested.
FLICKER_BASELINES = {
    FEEDBACK_LINEAR: -5.0 / 12,
    FEEDBACK_NONLINEAR: -1.0 / 2,
}

LC_ERR_POSITIVE = '{} must be > 0, got {}'
LC_ERR_NEGATIVE = '{} must be >= 0, got {}'
LC_ERR_MODE = 'Unknown dephasing mode "{}"'
LC_ERR_NOISE = 'No optimal-time rule for "{}" noise'
LC_ERR_COMBINATION = 'No prediction for feedback={}, noise={}, state={}'
LC_ERR_DERIVED = ('Uncorrelated flicker exponents are derived values; '
                  'pass derived=True to use them')
LC_ERR_SMALL_N = 'optimize_kappa needs N >= {}, got {}'
LC_WARN_BRACKET = ('Optimum over kappa not bracketed for N=%d (%s, %s); '
                   'returning the grid edge kappa=%g')


class TheoryException(SqueezeClockException):
    """Raised on invalid theory requests."""

    pass


def _positive(name, value):
    require(value > 0, TheoryException, LC_ERR_POSITIVE, name, value)


def sigma_y_floor(moments, var_phi_o, var_phi_e, lam, ramsey_T, tau, omega):
    """Allan deviation of the linearized closed loop.

    sqrt(dJy^2 + dJz^2 <phi_O^2> + lam <J_z^2> <phi_E^2>)
    / (omega sqrt(tau T) <J_z>)

    :type moments: StateMoments
    :param moments: Atomic state.

    :type var_phi_o: float
    :param var_phi_o: LO phase variance per cycle.

    :type var_phi_e: float
    :param var_phi_e: Environmental phase variance per cycle.

    :type lam: float
    :param lam: Collective (1) or independent ((N/4)/<J_z^2>) factor.

    :rtype: float
    """

    for name, value in (('var_phi_o', var_phi_o), ('var_phi_e', var_phi_e),
                        ('lambda', lam)):
        require(value >= 0, TheoryException, LC_ERR_NEGATIVE, name, value)
    for name, value in (('T', ramsey_T), ('tau', tau), ('omega', omega)):
        _positive(name, value)

    noise = (moments.var_jy + moments.var_jz * var_phi_o
             + lam * moments.mean_jz_squared * var_phi_e)
    return math.sqrt(noise) / (omega * math.sqrt(tau * ramsey_T)
                               * moments.jz_mean)


def zeta_factor(moments, n_atoms):
    """Stability prefactor at the linear optimal Ramsey time.

    (3/2^(4/3)) N^(1/3) [(dJy/<J_z>)^(4/3) + (2^(4/3)/3)(dJz/<J_z>)^2]^(1/2)
    """

    transverse = (moments.d_jy / moments.jz_mean) ** (4.0 / 3)
    longitudinal = (2 ** (4.0 / 3) / 3) * (moments.d_jz
                                           / moments.jz_mean) ** 2
    return (ZETA_PREFACTOR * n_atoms ** (1.0 / 3)
            * math.sqrt(transverse + longitudinal))


def lambda_factor(moments, mode):
    if mode == DEPHASING_COLLECTIVE:
        return 1.0
    require(mode == DEPHASING_INDEPENDENT, TheoryException, LC_ERR_MODE,
            mode)
    return (moments.n_atoms / 4.0) / moments.mean_jz_squared


def phase_variance_for(noise_kind, gamma, ramsey_T):
    """<phi_O^2> per cycle: gamma*T (white) or (gamma*T)^2 (flicker)."""

    if noise_kind == NOISE_WHITE:
        return gamma * ramsey_T
    if noise_kind == NOISE_FLICKER:
        return (gamma * ramsey_T) ** 2
    return 0.0


def optimal_T_linear(moments, gamma, noise_kind=NOISE_WHITE):
    """Ramsey time where the cubic servo error meets the projection noise.

    White noise: gamma*T = (2 dJy^2/<J_z>^2)^(1/3). Flicker noise, where
    <phi^2> = (gamma*T)^2: gamma*T = (2 dJy^2/<J_z>^2)^(1/6).
    """

    _positive('gamma', gamma)
    ratio = 2.0 * moments.var_jy / moments.jz_mean ** 2
    if noise_kind == NOISE_WHITE:
        return ratio ** (1.0 / 3) / gamma
    if noise_kind == NOISE_FLICKER:
        return ratio ** (1.0 / 6) / gamma
    raise TheoryException(LC_ERR_NOISE.format(noise_kind))


def optimal_T_nonlinear(gamma):
    _positive('gamma', gamma)
    return NONLINEAR_GAMMA_T / gamma


def optimal_T(moments, feedback, noise_kind, gamma):
    """Ramsey time used for ``feedback`` under ``noise_kind``."""

    if feedback == FEEDBACK_NONLINEAR:
        return optimal_T_nonlinear(gamma)
    return optimal_T_linear(moments, gamma, noise_kind)


def floor_coefficient(moments, noise_kind, gamma, ramsey_T, omega=1.0,
                      dephasing=None):
    """sigma_y * sqrt(tau) from :func:`sigma_y_floor`.

    :type dephasing: Dephasing
    :param dephasing: Optional environmental dephasing.

    :rtype: float
    """

    var_phi_e, lam = 0.0, 0.0
    if dephasing is not None:
        var_phi_e = dephasing.gamma_e * ramsey_T
        lam = lambda_factor(moments, dephasing.mode)
    return sigma_y_floor(moments,
                         phase_variance_for(noise_kind, gamma, ramsey_T),
                         var_phi_e, lam, ramsey_T, 1.0, omega)


def _moments(n_atoms, kappa, method, warn=True):
    spec = EnsembleSpec(n_atoms, FAMILY_GAUSSIAN, kappa)
    return spinstate.gaussian_moments(spec, method, warn)


def _objective(n_atoms, feedback, noise_kind, gamma, method):
    def white_linear(kappa):
        return zeta_factor(_moments(n_atoms, kappa, method, False),
                           n_atoms)

    def floor(kappa):
        moments = _moments(n_atoms, kappa, method, False)
        ramsey_T = optimal_T(moments, feedback, noise_kind, gamma)
        return floor_coefficient(moments, noise_kind, gamma, ramsey_T)

    if feedback == FEEDBACK_LINEAR and noise_kind == NOISE_WHITE:
        return white_linear
    return floor


def optimize_kappa(n_atoms, feedback, noise_kind=NOISE_WHITE, gamma=1.0,
                   method=spinstate.METHOD_AUTO):
    """Best Gaussian-state width for the given servo and noise.

    White noise with linear feedback minimizes zeta; the other cases
    minimize the floor coefficient at the Ramsey time of
    :func:`optimal_T`. A coarse logarithmic grid brackets the minimum and
    a golden-section search refines it to KAPPA_TOLERANCE.

    :type n_atoms: int
    :param n_atoms: Atom number, >= 100.

    :rtype: KappaOptimum
    """

    require(n_atoms >= MIN_OPTIMIZE_N, TheoryException, LC_ERR_SMALL_N,
            MIN_OPTIMIZE_N, n_atoms)
    require(noise_kind in (NOISE_WHITE, NOISE_FLICKER), TheoryException,
            LC_ERR_NOISE, noise_kind)
    objective = _objective(n_atoms, feedback, noise_kind, gamma, method)

    grid = np.logspace(0.0, math.log10(math.sqrt(n_atoms)),
                       KAPPA_GRID_POINTS)
    grid[-1] = math.sqrt(n_atoms)
    values = [objective(kappa) for kappa in grid]
    best = int(np.argmin(values))

    if best in (0, grid.size - 1):
        LOG.warning(LC_WARN_BRACKET, n_atoms, feedback, noise_kind,
                    grid[best])
        return KappaOptimum(float(grid[best]), float(values[best]), False)

    result = optimize.minimize_scalar(
        objective, bracket=(grid[best - 1], grid[best], grid[best + 1]),
        method='golden', tol=KAPPA_TOLERANCE)
    return KappaOptimum(float(result.x), float(result.fun), True)


def predicted_improvement(feedback, noise_kind):
    """Squeezed minus uncorrelated scaling exponent."""

    key = (feedback, noise_kind)
    require(key in IMPROVEMENTS, TheoryException, LC_ERR_COMBINATION,
            feedback, noise_kind, STATE_SQUEEZED)
    return IMPROVEMENTS[key]


def predicted_exponents(feedback, noise_kind, state, derived=False):
    """Predicted d log(sigma_y) / d log(N) with T optimized per N.

    :type derived: bool
    :param derived: Allow the uncorrelated flicker baselines, which
        follow from the optimal-time rules rather than a closed form.

    :rtype: float
    """

    require(state in STATES, TheoryException, LC_ERR_COMBINATION, feedback,
            noise_kind, state)
    if noise_kind == NOISE_WHITE:
        key = (feedback, state)
        require(key in WHITE_EXPONENTS, TheoryException, LC_ERR_COMBINATION,
                feedback, noise_kind, state)
        return WHITE_EXPONENTS[key]

    require(noise_kind == NOISE_FLICKER and feedback in FLICKER_BASELINES,
            TheoryException, LC_ERR_COMBINATION, feedback, noise_kind,
            state)
    require(derived, TheoryException, LC_ERR_DERIVED)
    baseline = FLICKER_BASELINES[feedback]
    if state == STATE_UNCORRELATED:
        return baseline
    return baseline + predicted_improvement(feedback, noise_kind)


def predict(n_atoms, feedback, noise_kind=NOISE_WHITE,
            state=STATE_UNCORRELATED, gamma=1.0, omega=1.0, tau=1.0,
            method=spinstate.METHOD_AUTO):
    """Theory summary for one ensemble, servo and noise.

    Squeezed states use :func:`optimize_kappa`; uncorrelated states report
    kappa = sqrt(N). White noise with linear feedback quotes the zeta form
    of sigma_y, the other cases :func:`sigma_y_floor` at the optimal
    Ramsey time.

    :rtype: TheoryPrediction
    """

    require(noise_kind != NOISE_NONE, TheoryException, LC_ERR_NOISE,
            noise_kind)
    require(state in STATES, TheoryException, LC_ERR_COMBINATION, feedback,
            noise_kind, state)

    if state == STATE_SQUEEZED:
        kappa = optimize_kappa(n_atoms, feedback, noise_kind, gamma,
                               method).kappa
        moments = _moments(n_atoms, kappa, method)
    else:
        kappa = math.sqrt(n_atoms)
        moments = spinstate.uncorrelated_moments(EnsembleSpec(n_atoms))

    zeta = zeta_factor(moments, n_atoms)
    ramsey_T = optimal_T(moments, feedback, noise_kind, gamma)
    if feedback == FEEDBACK_LINEAR and noise_kind == NOISE_WHITE:
        sigma = zeta * n_atoms ** (-1.0 / 3) * gamma / (
            omega * math.sqrt(gamma * tau))
    else:
        sigma = floor_coefficient(moments, noise_kind, gamma, ramsey_T,
                                  omega) / math.sqrt(tau)

    exponent = predicted_exponents(feedback, noise_kind, state, derived=True)
    return TheoryPrediction(sigma, zeta, gamma * ramsey_T, kappa, exponent)
