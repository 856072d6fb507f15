# Copyright (c) 2024, fronthaullib contributors
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR
# ANY SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF
# OR IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.

"""
Reverse water-filling of a bit budget over the eigenmodes of a received-signal covariance.

For signal eigenvalues s_i >= sigma^2 and a multiplier mu, the inverse compression noise of mode i is

    lambda_i = max(0, (1/mu) (1/sigma^2 - 1/s_i) - 1/sigma^2)

and mu is chosen so that sum_i log2(lambda_i s_i + 1) equals the budget. With u = ln(1/mu - 1) and
a_i = ln(sigma^2 / (s_i - sigma^2)) the bits spent on an active mode are (u - a_i) / ln 2, which is what
the search below works with.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import optimize
from scipy import special

from fronthaullib.exceptions import InfeasibleSpectrumException
from fronthaullib.exceptions import SolverException
from fronthaullib.exceptions import ValidationException

logger = logging.getLogger(__name__)

BIT_TOLERANCE = 1e-6
MAX_ITERATIONS = 200


@dataclass
class WaterfillResult:
    lambdas: np.ndarray
    mu: float
    mode_bits: np.ndarray

    @property
    def achieved_bits(self) -> float:
        return math.fsum(self.mode_bits)


def _validate(signal_eigs: np.ndarray, noise_floor: float, budget: float) -> None:
    if not np.isfinite(noise_floor) or noise_floor <= 0:
        raise ValidationException(f'Noise floor must be positive and finite, got {noise_floor!r}')

    if not np.isfinite(budget) or budget < 0:
        raise ValidationException(f'Bit budget must be nonnegative and finite, got {budget!r}')

    if signal_eigs.size == 0:
        raise ValidationException('Empty spectrum')

    if not np.all(np.isfinite(signal_eigs)) or np.any(signal_eigs < 0):
        raise ValidationException('Signal eigenvalues must be nonnegative and finite')

    if np.any(signal_eigs < noise_floor * (1 - 1e-9)):
        raise ValidationException('Signal eigenvalues must not fall below the noise floor')


def mode_thresholds(signal_eigs: np.ndarray, noise_floor: float) -> np.ndarray:
    """
    Activation thresholds a_i = ln(sigma^2 / (s_i - sigma^2)) on the u scale; +inf for pure-noise modes
    """
    excess = np.maximum(np.asarray(signal_eigs, dtype=float) - noise_floor, 0.0)
    with np.errstate(divide='ignore'):
        return np.log(noise_floor) - np.log(excess)


def _bits_at(u: float, thresholds: np.ndarray) -> np.ndarray:
    return np.maximum(u - thresholds, 0.0) / math.log(2)


def waterfill(signal_eigs, noise_floor: float, budget: float) -> WaterfillResult:
    """
    Solves the water-filling problem and keeps the per-mode bit split

    :param signal_eigs: signal eigenvalues p*lambda_i^2 + sigma^2 in watts
    :param noise_floor: sigma^2 in watts
    :param budget: bits per received vector
    :return: WaterfillResult
    """
    eigs = np.asarray(signal_eigs, dtype=float).ravel()
    _validate(eigs, noise_floor, budget)

    if budget == 0:
        return WaterfillResult(np.zeros(eigs.size), 1.0, np.zeros(eigs.size))

    thresholds = mode_thresholds(eigs, noise_floor)
    active = np.isfinite(thresholds)

    if not np.any(active):
        raise InfeasibleSpectrumException(f'{budget} bits requested for a pure-noise spectrum')

    def excess_bits(u: float) -> float:
        return math.fsum(_bits_at(u, thresholds)) - budget

    # no bits at the lowest threshold; at the highest one plus the budget the weakest active mode alone spends it
    low = float(np.min(thresholds[active]))
    high = float(np.max(thresholds[active])) + budget * math.log(2) + 1.0

    if excess_bits(high) < 0:
        raise SolverException(f'Could not bracket the multiplier for a budget of {budget} bits')

    try:
        u = optimize.bisect(excess_bits, low, high, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=MAX_ITERATIONS)

    except RuntimeError as re:
        raise SolverException(f'Multiplier search did not converge for a budget of {budget} bits: {re}')

    mode_bits = _bits_at(u, thresholds)
    achieved = math.fsum(mode_bits)
    if abs(achieved - budget) > BIT_TOLERANCE:
        raise SolverException(f'Water-filling missed the budget: {achieved} bits for {budget}')

    # lambda_i sigma^2 = (sigma^2 / s_i) * (exp(u - a_i) - 1) on active modes
    with np.errstate(over='ignore', invalid='ignore'):
        scaled = np.where(u > thresholds, noise_floor / eigs * np.expm1(u - thresholds), 0.0)
        lambdas = np.where(scaled > 0, scaled / noise_floor, 0.0)

    mu = float(special.expit(-u))

    logger.debug(f'Water level found: mu={mu}, {int(np.count_nonzero(lambdas))} active modes')

    return WaterfillResult(lambdas, mu, mode_bits)


def reverse_waterfill(signal_eigs, noise_floor: float, budget: float) -> Tuple[np.ndarray, float]:
    """
    Inverse compression noise eigenvalues and the multiplier that spend exactly the given budget

    :param signal_eigs: signal eigenvalues p*lambda_i^2 + sigma^2
    :param noise_floor: sigma^2
    :param budget: bits per received vector
    :return: tuple of (lambdas, mu)
    """
    result = waterfill(signal_eigs, noise_floor, budget)
    return result.lambdas, result.mu


def compression_objective(lambdas, signal_eigs, noise_floor: float) -> float:
    """
    Information kept about the users' signals, sum_i log2(lambda_i s_i + 1) - log2(lambda_i sigma^2 + 1)
    """
    lam = np.asarray(lambdas, dtype=float)
    eigs = np.asarray(signal_eigs, dtype=float)
    return float(np.sum(np.log2(lam * eigs + 1) - np.log2(lam * noise_floor + 1)))


def spent_bits(lambdas, signal_eigs) -> float:
    lam = np.asarray(lambdas, dtype=float)
    eigs = np.asarray(signal_eigs, dtype=float)
    return float(np.sum(np.log2(lam * eigs + 1)))
