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

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List
from typing import Sequence
from typing import Tuple
from typing import Union

from fronthaullib.resources.fronthaul import FronthaulRate
from fronthaullib.resources.fronthaul import fronthaul_rate_bound
from fronthaullib.resources.memory import BitsPerVector
from fronthaullib.resources.memory import MemoryModel
from fronthaullib.resources.memory import parse_memory_model
from fronthaullib.resources.topology import Topology
from fronthaullib.resources.topology import TopologyKind
from fronthaullib.resources.topology import build_topology
from fronthaullib.resources.topology import stored_vectors
from fronthaullib.scenario import ScenarioConfig

DEFAULT_COMBINING_WIDTH = 16


@dataclass(frozen=True)
class ResourcePlan:
    topology: Topology
    memory: MemoryModel
    stored_vectors: Tuple[int, ...]
    bits_per_vector: Tuple[BitsPerVector, ...]
    num_users: int
    num_subcarriers: int
    symbol_duration: Fraction
    combining_width: int = DEFAULT_COMBINING_WIDTH

    def total_stored_bits(self) -> Fraction:
        return sum((Fraction(c) * n for c, n in zip(self.bits_per_vector, self.stored_vectors) if n),
                   Fraction(0))

    def link_rate(self, element_widths: Sequence[float]) -> FronthaulRate:
        return fronthaul_rate_bound(self.num_users, self.num_subcarriers, self.combining_width, element_widths,
                                    self.symbol_duration)

    def link_rate_upper_bounds(self) -> List[Union[Fraction, float]]:
        """
        Upper bound K N_sc (rho + C_sc) / T_s on the outgoing link rate of every AP; math.inf where the AP keeps
        its vectors uncompressed
        """
        rates = list()
        for bits in self.bits_per_vector:
            if math.isinf(bits):
                rates.append(math.inf)
            else:
                rates.append(self.num_users * self.num_subcarriers * (self.combining_width + bits)
                             / self.symbol_duration)

        return rates

    def mean_incoming_rate(self) -> Fraction:
        finite = [r for r in self.link_rate_upper_bounds() if not math.isinf(r)]
        if not finite:
            return Fraction(0)

        return sum(finite, Fraction(0)) / len(finite)


def build_plan(config: ScenarioConfig, memory: Union[str, MemoryModel],
               topology: Union[str, TopologyKind, Topology] = TopologyKind.DAISY_CHAIN,
               combining_width: int = DEFAULT_COMBINING_WIDTH) -> ResourcePlan:
    """
    Builds the resource plan for one network

    :param config: scenario parameters
    :param memory: memory model or its string form
    :param topology: topology or its kind
    :param combining_width: width rho of the combining weights in bits
    :return: ResourcePlan
    """
    if not isinstance(topology, Topology):
        topology = build_topology(topology, config.num_aps)

    memory = parse_memory_model(memory)
    bits = memory.bits_per_vector(topology, config.num_subcarriers)

    return ResourcePlan(
        topology=topology,
        memory=memory,
        stored_vectors=tuple(stored_vectors(topology, config.num_subcarriers)),
        bits_per_vector=tuple(bits),
        num_users=config.num_users,
        num_subcarriers=config.num_subcarriers,
        symbol_duration=config.symbol_duration,
        combining_width=combining_width,
    )
