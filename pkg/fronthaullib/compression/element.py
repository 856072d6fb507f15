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

import numpy as np

from fronthaullib.compression.base import CompressionOption
from fronthaullib.compression.base import CompressionSolution
from fronthaullib.compression.base import Compressor
from fronthaullib.compression.base import achieved_bits
from fronthaullib.compression.waterfill import waterfill
from fronthaullib.exceptions import ValidationException


def element_power_profile(channel_block: np.ndarray, tx_power: float, noise_power: float) -> np.ndarray:
    """
    Received power of every antenna element, p ||H[i, :]||^2 + sigma^2
    """
    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    return tx_power * np.sum(np.abs(h) ** 2, axis=1) + noise_power


def _diagonal_solution(option, h, tx_power, noise_power, budget, ap_index, lambdas, mu, mode_bits, profile):
    solution = CompressionSolution(
        ap_index=ap_index,
        option=option,
        eigenbasis=np.eye(h.shape[0], dtype=complex),
        noise_inverse_eigenvalues=lambdas,
        lagrange_multiplier=mu,
        target_bits=budget,
        achieved_bits=float(np.sum(mode_bits)),
        noise_power=noise_power,
        signal_eigenvalues=profile,
        mode_bits=mode_bits,
        element_power_profile=profile,
    )
    solution.achieved_bits = achieved_bits(solution, h, tx_power, noise_power)
    return solution


def solve_ec(channel_block: np.ndarray, tx_power: float, noise_power: float, budget: float,
             ap_index: int = 0) -> CompressionSolution:
    """
    Element-wise compression with the bit split optimized by water-filling over the element powers
    """
    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    profile = element_power_profile(h, tx_power, noise_power)
    result = waterfill(profile, noise_power, budget)

    return _diagonal_solution(CompressionOption.ELEMENT_WISE, h, tx_power, noise_power, budget, ap_index,
                              result.lambdas, result.mu, result.mode_bits, profile)


def solve_ec_equal_bits(channel_block: np.ndarray, tx_power: float, noise_power: float, budget: float,
                        ap_index: int = 0) -> CompressionSolution:
    """
    Element-wise compression spending C/N bits on every element
    """
    if not np.isfinite(budget) or budget < 0:
        raise ValidationException(f'Bit budget must be nonnegative and finite, got {budget!r}')

    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    profile = element_power_profile(h, tx_power, noise_power)
    per_element = budget / h.shape[0]

    mode_bits = np.full(h.shape[0], per_element)
    with np.errstate(over='ignore'):
        lambdas = np.expm1(per_element * np.log(2)) / profile

    return _diagonal_solution(CompressionOption.ELEMENT_WISE_EQUAL_BITS, h, tx_power, noise_power, budget,
                              ap_index, lambdas, None, mode_bits, profile)


class ElementWiseCompressor(Compressor):
    option = CompressionOption.ELEMENT_WISE
    diagonal_noise = True

    def compress(self, channel_block, noise_power, budget, ap_index=0):
        return solve_ec(channel_block, self.tx_power, noise_power, budget, ap_index)


class EqualBitsCompressor(Compressor):
    option = CompressionOption.ELEMENT_WISE_EQUAL_BITS
    diagonal_noise = True

    def compress(self, channel_block, noise_power, budget, ap_index=0):
        return solve_ec_equal_bits(channel_block, self.tx_power, noise_power, budget, ap_index)
