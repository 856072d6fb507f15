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

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

from fronthaullib.exceptions import InfeasibleParameterException
from fronthaullib.exceptions import InvalidConfigurationException


class TopologyKind(Enum):
    DAISY_CHAIN = 'daisy_chain'
    BINARY_TREE = 'binary_tree'

    @classmethod
    def parse(cls, value: Union[str, 'TopologyKind']) -> 'TopologyKind':
        if isinstance(value, cls):
            return value

        key = str(value).strip().lower().replace('-', '_')
        key = {'chain': 'daisy_chain', 'tree': 'binary_tree'}.get(key, key)

        for kind in cls:
            if kind.value == key:
                return kind

        raise InvalidConfigurationException(f'Unknown topology: {value}')


@dataclass(frozen=True)
class Topology:
    """
    Processing level of every AP and the AP it forwards its estimate to (None for the last AP).
    """

    kind: TopologyKind
    num_aps: int
    levels: Tuple[int, ...]
    downstream: Tuple[Optional[int], ...]

    @property
    def depth(self) -> int:
        return max(self.levels)

    def level_population(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.levels).items()))

    def upstream(self, ap_index: int) -> List[int]:
        return [i for i, target in enumerate(self.downstream) if target == ap_index]


def _trailing_zeros(value: int) -> int:
    return (value & -value).bit_length() - 1


def _tree_parent(index: int, num_aps: int) -> Optional[int]:
    if num_aps == 1 or index == num_aps // 2:
        return None

    if index == 0:
        return 1

    step = 1 << _trailing_zeros(index)
    if (index >> (_trailing_zeros(index) + 1)) & 1:
        return index - step

    return index + step


def build_topology(kind: Union[str, TopologyKind], num_aps: int) -> Topology:
    """
    Builds a daisy chain or a pairwise fan-in tree over the APs

    :param kind: topology kind
    :param num_aps: number of APs, a power of two for trees
    :return: Topology
    """
    kind = TopologyKind.parse(kind)

    if num_aps < 1:
        raise InvalidConfigurationException(f'num_aps must be positive, got {num_aps}')

    if kind == TopologyKind.DAISY_CHAIN:
        levels = tuple(range(1, num_aps + 1))
        downstream = tuple(i + 1 if i + 1 < num_aps else None for i in range(num_aps))
        return Topology(kind, num_aps, levels, downstream)

    if num_aps & (num_aps - 1):
        raise InfeasibleParameterException(f'A binary tree needs a power-of-two number of APs, got {num_aps}')

    # AP j > 0 sits above the two APs j -/+ 2^(t-1) where t = trailing zeros of j; AP 0 feeds AP 1
    levels = tuple(1 if j == 0 else 2 + _trailing_zeros(j) for j in range(num_aps))
    downstream = tuple(_tree_parent(j, num_aps) for j in range(num_aps))

    return Topology(kind, num_aps, levels, downstream)


def stored_vectors(topology: Topology, num_subcarriers: int) -> List[int]:
    """
    Received vectors each AP buffers while waiting for the estimates of the APs before it
    """
    return [(level - 1) * num_subcarriers for level in topology.levels]
