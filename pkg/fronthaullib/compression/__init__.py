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

from typing import Union

from .base import CompressionOption  # noqa
from .base import CompressionSolution  # noqa
from .base import Compressor
from .base import achieved_bits  # noqa
from .base import lossless_solution  # noqa
from .element import element_power_profile  # noqa
from .element import solve_ec  # noqa
from .element import solve_ec_equal_bits  # noqa
from .pca import PcaMap  # noqa
from .pca import pca_transform  # noqa
from .pca import solve_pca_ec  # noqa
from .scalar import TestChannel  # noqa
from .scalar import mutual_info_scalar  # noqa
from .vector import solve_vc  # noqa
from .waterfill import reverse_waterfill  # noqa
from fronthaullib.exceptions import InvalidConfigurationException


def create_compressor(option: Union[str, CompressionOption], tx_power: float) -> Compressor:
    """
    Creates the Compressor for the given option

    :param option: option name ('vc', 'ec', 'ec_equal', 'pca_ec') or CompressionOption
    :param tx_power: uplink power p
    :return: Compressor
    """
    option = CompressionOption.parse(option)

    if option == CompressionOption.VECTOR_WISE:
        from fronthaullib.compression.vector import VectorWiseCompressor

        return VectorWiseCompressor(tx_power)

    elif option == CompressionOption.ELEMENT_WISE:
        from fronthaullib.compression.element import ElementWiseCompressor

        return ElementWiseCompressor(tx_power)

    elif option == CompressionOption.ELEMENT_WISE_EQUAL_BITS:
        from fronthaullib.compression.element import EqualBitsCompressor

        return EqualBitsCompressor(tx_power)

    elif option == CompressionOption.PCA_ELEMENT_WISE:
        from fronthaullib.compression.pca import PcaElementWiseCompressor

        return PcaElementWiseCompressor(tx_power)

    else:
        raise InvalidConfigurationException(f'No compressor for option: {option.value}')
