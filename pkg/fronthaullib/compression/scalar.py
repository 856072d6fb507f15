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
Bits needed to describe a unit-power Gaussian sample through a test channel with noise variance Q.
"""

from enum import Enum
from typing import Iterable
from typing import List
from typing import Tuple

import numpy as np

from fronthaullib.exceptions import ValidationException


class TestChannel(Enum):
    __test__ = False

    ADDITIVE = 'additive'
    OPTIMAL = 'optimal'


def mutual_info_scalar(noise_variance: float, variant: TestChannel = TestChannel.ADDITIVE) -> float:
    """
    :param noise_variance: compression noise variance Q, relative to the signal power
    :param variant: additive test channel x + q, or the optimal backward channel
    :return: bits per sample
    """
    if not noise_variance > 0:
        raise ValidationException(f'Compression noise variance must be positive, got {noise_variance!r}')

    if variant == TestChannel.ADDITIVE:
        return float(np.log2(1 / noise_variance + 1))

    return max(0.0, float(-np.log2(noise_variance)))


def scalar_curves(noise_variances: Iterable[float]) -> List[Tuple[float, float, float]]:
    """
    Rows of (Q, additive bits, optimal bits) for plotting both test channels against each other
    """
    return [(float(q), mutual_info_scalar(q, TestChannel.ADDITIVE), mutual_info_scalar(q, TestChannel.OPTIMAL))
            for q in noise_variances]


def default_noise_grid(points: int = 200) -> np.ndarray:
    return np.logspace(-3, 1, points)
