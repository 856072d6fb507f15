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
Sequential estimation of the users' signals along the fronthaul, and the spectral efficiency it achieves.

Noise blocks are handled as precisions Z_l^-1 throughout: an AP that stores nothing has an infinite
compression noise, which is a zero precision block and turns its update into a skip.
"""

import logging
import math
from dataclasses import dataclass
from typing import List
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np
from scipy import linalg

from fronthaullib.exceptions import EstimationException

logger = logging.getLogger(__name__)

Blocks = Union[np.ndarray, Sequence[np.ndarray]]


@dataclass
class EstimationState:
    gamma: np.ndarray
    estimates: np.ndarray
    ap_cursor: int = 0


@dataclass
class CompressedObservation:
    vectors: List[np.ndarray]
    noise_precisions: List[np.ndarray]

    def __len__(self):
        return len(self.vectors)


def noise_precision(noise_covariance: np.ndarray) -> np.ndarray:
    """
    Inverts a finite noise covariance block

    :param noise_covariance: Hermitian positive definite matrix
    :return: Z^-1
    """
    z = np.atleast_2d(np.asarray(noise_covariance, dtype=complex))
    try:
        factor = linalg.cho_factor(z, lower=True)
        precision = linalg.cho_solve(factor, np.eye(z.shape[0]))

    except linalg.LinAlgError as le:
        raise EstimationException(f'Noise covariance is not positive definite: {le}')

    return (precision + precision.conj().T) / 2


def precision_root(precision: np.ndarray) -> np.ndarray:
    """
    Returns W with W^H W equal to the given precision, one row per nonzero eigenvalue
    """
    vals, vecs = linalg.eigh(np.atleast_2d(precision))
    keep = vals > 0
    return np.sqrt(vals[keep])[:, None] * vecs[:, keep].conj().T


def _hermitian(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


class SequentialEstimator:
    """
    Refines the users' signal estimate one AP at a time. Each step folds in the compressed observation of one
    AP and leaves the error covariance of the estimate in state.gamma.

    :param num_users: number of users K
    :param tx_power: prior power p of every user's signal
    :param num_samples: number of uplink samples estimated together
    """

    def __init__(self, num_users: int, tx_power: float, num_samples: int = 1):
        self.num_users = num_users
        self.tx_power = tx_power
        self.state = EstimationState(
            gamma=tx_power * np.eye(num_users, dtype=complex),
            estimates=np.zeros((num_users, num_samples), dtype=complex),
        )
        self.gamma_history = [self.state.gamma.copy()]

    def step(self, channel_block: np.ndarray, precision: np.ndarray, observation: np.ndarray) -> EstimationState:
        h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
        p = np.atleast_2d(np.asarray(precision, dtype=complex))
        y = np.asarray(observation, dtype=complex).reshape(h.shape[0], -1)
        state = self.state

        if h.shape[1] != self.num_users or p.shape != (h.shape[0], h.shape[0]):
            raise EstimationException(f'AP {state.ap_cursor}: channel {h.shape} and precision {p.shape} '
                                      f'do not match {self.num_users} users')

        if y.shape[1] != state.estimates.shape[1]:
            raise EstimationException(f'AP {state.ap_cursor}: expected {state.estimates.shape[1]} samples')

        w = precision_root(p)

        if w.shape[0] == 0:
            logger.debug(f'AP {state.ap_cursor} stores nothing, skipping')
            state.ap_cursor += 1
            self.gamma_history.append(state.gamma.copy())
            return state

        g = w @ h
        gamma = state.gamma
        gain = g @ gamma
        innovation_cov = np.eye(g.shape[0]) + gain @ g.conj().T
        update = linalg.solve(innovation_cov, gain, assume_a='her')

        new_gamma = _hermitian(gamma - gain.conj().T @ update)
        innovation = w @ y - g @ state.estimates

        state.estimates = state.estimates + new_gamma @ g.conj().T @ innovation
        state.gamma = new_gamma
        state.ap_cursor += 1
        self.gamma_history.append(new_gamma.copy())

        return state


def _as_samples(observation) -> np.ndarray:
    y = np.asarray(observation, dtype=complex)
    return y[:, None] if y.ndim == 1 else y


def rls_sequential(channel_blocks: Sequence[np.ndarray], noise_precisions: Sequence[np.ndarray],
                   observations: Union[CompressedObservation, Sequence[np.ndarray]],
                   tx_power: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Runs the sequential estimator over all APs in order

    :param channel_blocks: per-AP channel blocks (or PCA-mapped blocks)
    :param noise_precisions: per-AP noise precision blocks Z_l^-1, zero for an AP that stores nothing
    :param observations: per-AP compressed received vectors, one column per sample
    :param tx_power: prior power p
    :return: tuple of (estimates, final error covariance)
    """
    if isinstance(observations, CompressedObservation):
        observations = observations.vectors

    if not (len(channel_blocks) == len(noise_precisions) == len(observations)):
        raise EstimationException('Channel, noise and observation lists differ in length')

    if not channel_blocks:
        raise EstimationException('No APs to estimate from')

    first = np.asarray(observations[0])
    samples = _as_samples(first)
    estimator = SequentialEstimator(np.atleast_2d(channel_blocks[0]).shape[1], tx_power, samples.shape[1])

    for h, precision, y in zip(channel_blocks, noise_precisions, observations):
        estimator.step(h, precision, _as_samples(y))

    estimates = estimator.state.estimates
    if first.ndim == 1:
        estimates = estimates[:, 0]

    return estimates, estimator.state.gamma


def _stack_channel(channel: Blocks) -> np.ndarray:
    if isinstance(channel, np.ndarray):
        return np.atleast_2d(channel.astype(complex))

    return np.vstack([np.atleast_2d(b) for b in channel]).astype(complex)


def _stack_precision(precision: Blocks) -> np.ndarray:
    if isinstance(precision, np.ndarray):
        return np.atleast_2d(precision.astype(complex))

    return linalg.block_diag(*[np.atleast_2d(b) for b in precision]).astype(complex)


def batch_ls_oracle(channel: Blocks, precision: Blocks, observation, tx_power: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Closed-form regularized least squares over all APs at once

    :param channel: stacked NL x K channel or the list of per-AP blocks
    :param precision: block-diagonal noise precision or the list of per-AP blocks
    :param observation: stacked received vector(s)
    :param tx_power: prior power p
    :return: tuple of (estimates, error covariance)
    """
    h = _stack_channel(channel)
    p = _stack_precision(precision)
    if isinstance(observation, (list, tuple)):
        y = np.concatenate([np.asarray(v, dtype=complex) for v in observation])
    else:
        y = np.asarray(observation, dtype=complex)

    if p.shape != (h.shape[0], h.shape[0]) or y.shape[0] != h.shape[0]:
        raise EstimationException(f'Shapes do not match: H {h.shape}, Z^-1 {p.shape}, y {y.shape}')

    information = _hermitian(h.conj().T @ p @ h) + np.eye(h.shape[1]) / tx_power
    gamma = _hermitian(linalg.inv(information))
    estimates = gamma @ (h.conj().T @ (p @ y))

    return estimates, gamma


def _log2det(matrix: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(matrix)
    if sign == 0:
        raise EstimationException('Singular matrix in log-determinant')

    return float(logdet) / math.log(2)


def log2det_user_domain(channel: np.ndarray, precision: np.ndarray, tx_power: float) -> float:
    """
    log2 det(I_K + p H^H Z^-1 H)
    """
    return _log2det(np.eye(channel.shape[1]) + tx_power * _hermitian(channel.conj().T @ precision @ channel))


def log2det_antenna_domain(channel: np.ndarray, precision: np.ndarray, tx_power: float) -> float:
    """
    log2 det(I + p H H^H Z^-1), equal to the user-domain form by Sylvester's identity
    """
    return _log2det(np.eye(channel.shape[0]) + tx_power * channel @ channel.conj().T @ precision)


def _log2det_smallest(channel: np.ndarray, precision: np.ndarray, tx_power: float) -> float:
    if channel.shape[1] < channel.shape[0]:
        return log2det_user_domain(channel, precision, tx_power)

    return log2det_antenna_domain(channel, precision, tx_power)


def sum_se_exact(channel: Blocks, precision: Blocks, tx_power: float, prelog: float = 1.0) -> float:
    """
    Sum spectral efficiency of the network with successive interference cancellation

    :param channel: stacked channel or per-AP blocks (PCA-mapped blocks are accepted)
    :param precision: block-diagonal noise precision or per-AP blocks
    :param tx_power: uplink power p
    :param prelog: fraction of the coherence block carrying uplink data
    :return: bits/s/Hz
    """
    h = _stack_channel(channel)
    p = _stack_precision(precision)

    if p.shape != (h.shape[0], h.shape[0]):
        raise EstimationException(f'Precision {p.shape} does not match channel {h.shape}')

    return prelog * _log2det_smallest(h, p, tx_power)


def sum_se_upper(channel_blocks: Sequence[np.ndarray], precisions: Sequence[np.ndarray], tx_power: float,
                 prelog: float = 1.0) -> float:
    """
    Per-AP decomposition of the sum SE, an upper bound on sum_se_exact
    """
    total = math.fsum(_log2det_smallest(np.atleast_2d(h).astype(complex), np.atleast_2d(p).astype(complex), tx_power)
                      for h, p in zip(channel_blocks, precisions))
    return prelog * total


def _check_diagonal(precisions: Sequence[np.ndarray]) -> None:
    for index, block in enumerate(precisions):
        b = np.atleast_2d(block)
        off_diagonal = b - np.diag(np.diag(b))
        if np.any(np.abs(off_diagonal) > 1e-12 * max(1.0, float(np.max(np.abs(b))))):
            raise EstimationException(f'AP {index}: element-wise noise block is not diagonal')


def sum_se_ec(channel_blocks: Sequence[np.ndarray], precisions: Sequence[np.ndarray], tx_power: float,
              prelog: float = 1.0) -> float:
    """
    Sum SE under element-wise compression, with the per-AP noise taken as diagonal
    """
    _check_diagonal(precisions)
    return sum_se_exact(list(channel_blocks), list(precisions), tx_power, prelog)


def sum_se_ec_bound(channel_blocks: Sequence[np.ndarray], precisions: Sequence[np.ndarray], tx_power: float,
                    prelog: float = 1.0) -> float:
    """
    Element-by-element upper bound on sum_se_ec
    """
    _check_diagonal(precisions)
    total = 0.0
    for h, p in zip(channel_blocks, precisions):
        h = np.atleast_2d(h)
        powers = tx_power * np.sum(np.abs(h) ** 2, axis=1)
        total += float(np.sum(np.log2(1 + powers * np.real(np.diag(np.atleast_2d(p))))))

    return prelog * total
