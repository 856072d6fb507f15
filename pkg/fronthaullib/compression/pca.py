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

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from fronthaullib.compression.base import CompressionOption
from fronthaullib.compression.base import CompressionSolution
from fronthaullib.compression.base import Compressor
from fronthaullib.compression.waterfill import waterfill


@dataclass
class PcaMap:
    """
    Projection of the received vector onto the x = min(N, K) principal directions of the channel, where the
    mapped signal has a diagonal covariance.
    """

    projector: np.ndarray
    effective_channel: np.ndarray
    effective_spectrum: np.ndarray

    @property
    def dimension(self) -> int:
        return self.projector.shape[1]


def pca_transform(channel_block: np.ndarray, tx_power: float, noise_power: float) -> PcaMap:
    h = np.atleast_2d(np.asarray(channel_block, dtype=complex))
    antennas, users = h.shape
    dimension = min(antennas, users)

    u, singular_values, _ = linalg.svd(h, full_matrices=True)
    projector = u[:, :dimension]
    spectrum = tx_power * singular_values[:dimension] ** 2 + noise_power

    return PcaMap(projector, projector.conj().T @ h, spectrum)


def solve_pca_ec(pca_map: PcaMap, noise_power: float, budget: float, ap_index: int = 0) -> CompressionSolution:
    """
    Element-wise compression of the mapped vector; the mapped elements are the principal modes, so the
    allocation matches vector-wise compression mode for mode.
    """
    spectrum = pca_map.effective_spectrum
    result = waterfill(spectrum, noise_power, budget)

    lam = result.lambdas
    finite = np.isfinite(lam)
    achieved = float(np.sum(np.log2(lam[finite] * spectrum[finite] + 1))) + float(np.sum(result.mode_bits[~finite]))

    return CompressionSolution(
        ap_index=ap_index,
        option=CompressionOption.PCA_ELEMENT_WISE,
        eigenbasis=np.eye(pca_map.dimension, dtype=complex),
        noise_inverse_eigenvalues=lam,
        lagrange_multiplier=result.mu,
        target_bits=budget,
        achieved_bits=achieved,
        noise_power=noise_power,
        signal_eigenvalues=spectrum,
        mode_bits=result.mode_bits,
        projector=pca_map.projector,
    )


class PcaElementWiseCompressor(Compressor):
    option = CompressionOption.PCA_ELEMENT_WISE

    def compress(self, channel_block, noise_power, budget, ap_index=0):
        return solve_pca_ec(pca_transform(channel_block, self.tx_power, noise_power), noise_power, budget, ap_index)
