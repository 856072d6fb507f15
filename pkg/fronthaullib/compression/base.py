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

import logging
import math
from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional
from typing import Union

import numpy as np

from fronthaullib.compression.waterfill import BIT_TOLERANCE
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.exceptions import ValidationException

logger = logging.getLogger(__name__)


class CompressionOption(Enum):
    VECTOR_WISE = 'vc'
    ELEMENT_WISE = 'ec'
    ELEMENT_WISE_EQUAL_BITS = 'ec_equal'
    PCA_ELEMENT_WISE = 'pca_ec'
    NONE = 'none'

    @classmethod
    def parse(cls, value: Union[str, 'CompressionOption']) -> 'CompressionOption':
        if isinstance(value, cls):
            return value

        key = str(value).strip().lower().replace('-', '_').replace('/', '_')
        aliases = {'pca': 'pca_ec', 'ec_equal_bits': 'ec_equal', 'inf': 'none'}
        key = aliases.get(key, key)

        for option in cls:
            if option.value == key:
                return option

        raise InvalidConfigurationException(f'Unknown compression option: {value}')


@dataclass
class CompressionSolution:
    """
    Compression noise of one AP, stored through the inverse noise eigenvalues lambda_q in the eigenbasis U.
    A zero lambda_q is a mode that is not stored at all; option NONE keeps every mode losslessly.
    """

    ap_index: int
    option: CompressionOption
    eigenbasis: np.ndarray
    noise_inverse_eigenvalues: np.ndarray
    lagrange_multiplier: Optional[float]
    target_bits: float
    achieved_bits: float
    noise_power: float
    signal_eigenvalues: np.ndarray
    mode_bits: Optional[np.ndarray] = None
    element_power_profile: Optional[np.ndarray] = None
    projector: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.noise_inverse_eigenvalues.size

    @property
    def is_lossless(self) -> bool:
        return self.option == CompressionOption.NONE

    def noise_inverse(self) -> np.ndarray:
        """
        Inverse compression noise covariance Q^-1 = U diag(lambda_q) U^H
        """
        u = self.eigenbasis
        return (u * self.noise_inverse_eigenvalues[None, :]) @ u.conj().T

    def precision_eigenvalues(self) -> np.ndarray:
        """
        Eigenvalues of the total noise precision (sigma^2 I + Q)^-1, i.e. lambda / (1 + sigma^2 lambda)
        """
        lam = self.noise_inverse_eigenvalues
        scaled = self.noise_power * lam
        with np.errstate(invalid='ignore'):
            fraction = np.where(np.isinf(scaled), 1.0, scaled / (1.0 + scaled))

        return fraction / self.noise_power

    def noise_precision(self) -> np.ndarray:
        u = self.eigenbasis
        return (u * self.precision_eigenvalues()[None, :]) @ u.conj().T

    def effective_channel(self, channel_block: np.ndarray) -> np.ndarray:
        if self.projector is None:
            return channel_block

        return self.projector.conj().T @ channel_block

    def bits_per_mode(self) -> np.ndarray:
        """
        Bit split b_i across the stored modes or elements
        """
        if self.mode_bits is not None:
            return self.mode_bits

        if self.is_lossless:
            return np.full(self.dimension, np.inf)

        return np.log2(self.noise_inverse_eigenvalues * self.signal_eigenvalues + 1)


def _log2det(matrix: np.ndarray) -> float:
    _, logdet = np.linalg.slogdet(matrix)
    return float(logdet) / math.log(2)


def achieved_bits(solution: CompressionSolution, channel_block: np.ndarray, tx_power: float,
                  noise_power: float) -> float:
    """
    Evaluates the bits spent per received vector by a solution for the given channel block

    :param solution: compression solution
    :param channel_block: N x K channel of the AP
    :param tx_power: uplink power p
    :param noise_power: sigma^2
    :return: bits per received vector
    """
    option = solution.option
    lam = solution.noise_inverse_eigenvalues

    if option == CompressionOption.NONE:
        return math.inf

    if not np.all(np.isfinite(lam)):
        # modes too fine to represent, fall back to the log-domain split
        return math.fsum(solution.bits_per_mode())

    h = np.asarray(channel_block, dtype=complex)

    if option == CompressionOption.VECTOR_WISE:
        # det(I + Q^-1 R) evaluated in the eigenbasis of Q, where unstored modes are exact identity rows
        u = solution.eigenbasis
        covariance = tx_power * h @ h.conj().T + noise_power * np.eye(h.shape[0])
        return _log2det(np.eye(h.shape[0]) + lam[:, None] * (u.conj().T @ covariance @ u))

    if option in (CompressionOption.ELEMENT_WISE, CompressionOption.ELEMENT_WISE_EQUAL_BITS):
        profile = tx_power * np.sum(np.abs(h) ** 2, axis=1) + noise_power
        return float(np.sum(np.log2(1 + profile * lam)))

    mapped = solution.effective_channel(h)
    covariance = tx_power * mapped @ mapped.conj().T + noise_power * np.eye(mapped.shape[0])
    return _log2det(np.eye(mapped.shape[0]) + np.diag(lam) @ covariance)


def lossless_solution(channel_block: np.ndarray, noise_power: float, ap_index: int = 0) -> CompressionSolution:
    """
    Solution for an AP that keeps its received vectors uncompressed
    """
    antennas = np.atleast_2d(channel_block).shape[0]
    return CompressionSolution(
        ap_index=ap_index,
        option=CompressionOption.NONE,
        eigenbasis=np.eye(antennas, dtype=complex),
        noise_inverse_eigenvalues=np.full(antennas, np.inf),
        lagrange_multiplier=None,
        target_bits=math.inf,
        achieved_bits=math.inf,
        noise_power=noise_power,
        signal_eigenvalues=np.full(antennas, np.inf),
    )


def verify_budget(solution: CompressionSolution) -> None:
    deviation = abs(solution.achieved_bits - solution.target_bits)
    if deviation > BIT_TOLERANCE * max(1.0, solution.target_bits):
        logger.warning(f'AP {solution.ap_index}: {solution.option.value} spends {solution.achieved_bits} bits '
                       f'for a budget of {solution.target_bits}')


class Compressor(ABC):
    """
    Base class for the per-AP compression options. Subclasses solve for the compression noise of a single
    AP; use create_compressor to get the right one for an option name.

    :param tx_power: uplink power p used to build the received-signal covariance
    """

    option = CompressionOption.NONE

    # True when the compression noise is diagonal in the antenna domain
    diagonal_noise = False

    def __init__(self, tx_power: float):
        if not np.isfinite(tx_power) or tx_power <= 0:
            raise ValidationException(f'tx_power must be positive, got {tx_power!r}')

        self.tx_power = tx_power

    @abstractmethod
    def compress(self, channel_block: np.ndarray, noise_power: float, budget: float,
                 ap_index: int = 0) -> CompressionSolution:
        pass

    def solve(self, channel_block: np.ndarray, noise_power: float, budget: float,
              ap_index: int = 0) -> CompressionSolution:
        """
        Solves for one AP, bypassing the solver when the AP stores nothing and so keeps its vectors intact

        :param channel_block: N x K channel of the AP
        :param noise_power: receiver (or effective) noise power of the AP
        :param budget: bits per received vector, math.inf for lossless
        :param ap_index: index of the AP, carried into the solution
        :return: CompressionSolution
        """
        if math.isinf(budget):
            return lossless_solution(channel_block, noise_power, ap_index)

        solution = self.compress(np.atleast_2d(np.asarray(channel_block, dtype=complex)), noise_power, float(budget),
                                 ap_index)
        verify_budget(solution)
        return solution

    def __repr__(self):
        return f'{self.__class__.__name__}(tx_power={self.tx_power})'
