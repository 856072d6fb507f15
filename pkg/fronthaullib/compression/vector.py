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
from scipy import linalg

from fronthaullib.compression.base import CompressionOption
from fronthaullib.compression.base import CompressionSolution
from fronthaullib.compression.base import Compressor
from fronthaullib.compression.base import achieved_bits
from fronthaullib.compression.waterfill import waterfill


def received_spectrum(channel_block: np.ndarray, tx_power: float, noise_power: float):
    """
    Eigendecomposition of the received-signal covariance p H H^H + sigma^2 I through the SVD of H

    :return: tuple of (U, eigenvalues) with eigenvalues in descending order
    """
    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    u, singular_values, _ = linalg.svd(h, full_matrices=True)

    spectrum = np.full(h.shape[0], float(noise_power))
    spectrum[:singular_values.size] += tx_power * singular_values ** 2

    return u, spectrum


def solve_vc(channel_block: np.ndarray, tx_power: float, noise_power: float, budget: float,
             ap_index: int = 0) -> CompressionSolution:
    """
    Vector-wise compression: water-fills the budget over the eigenmodes of the received-signal covariance

    :param channel_block: N x K channel of the AP
    :param tx_power: uplink power p
    :param noise_power: sigma^2
    :param budget: bits per received vector
    :param ap_index: AP index carried into the solution
    :return: CompressionSolution with a full eigenbasis
    """
    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    u, spectrum = received_spectrum(h, tx_power, noise_power)
    result = waterfill(spectrum, noise_power, budget)

    solution = CompressionSolution(
        ap_index=ap_index,
        option=CompressionOption.VECTOR_WISE,
        eigenbasis=u,
        noise_inverse_eigenvalues=result.lambdas,
        lagrange_multiplier=result.mu,
        target_bits=budget,
        achieved_bits=result.achieved_bits,
        noise_power=noise_power,
        signal_eigenvalues=spectrum,
        mode_bits=result.mode_bits,
    )
    solution.achieved_bits = achieved_bits(solution, h, tx_power, noise_power)

    return solution


class VectorWiseCompressor(Compressor):
    option = CompressionOption.VECTOR_WISE

    def compress(self, channel_block, noise_power, budget, ap_index=0):
        return solve_vc(channel_block, self.tx_power, noise_power, budget, ap_index)
