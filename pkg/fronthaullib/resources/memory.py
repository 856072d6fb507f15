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
import re
from abc import ABC
from abc import abstractmethod
from enum import Enum
from fractions import Fraction
from typing import List
from typing import Optional
from typing import Union

from fronthaullib.exceptions import InfeasibleParameterException
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.exceptions import ValidationException
from fronthaullib.resources.topology import Topology
from fronthaullib.resources.topology import TopologyKind
from fronthaullib.resources.topology import stored_vectors

logger = logging.getLogger(__name__)

# binary prefixes, 1 KB = 1024 bytes
KB = 8 * 1024
MB = 1024 * KB
GB = 1024 * MB

_UNITS = {'': 1, 'b': 1, 'bit': 1, 'bits': 1, 'kb': KB, 'mb': MB, 'gb': GB}
_CAPACITY_PATTERN = re.compile(r'^\s*(\d+(?:\.\d*)?)\s*([a-z]*)\s*$', re.IGNORECASE)

BitsPerVector = Union[Fraction, float]


def parse_capacity(value: Union[int, str, Fraction]) -> int:
    """
    Parses a memory capacity such as '64KB', '8MB' or a raw bit count into bits

    :param value: capacity string or bit count
    :return: capacity in bits
    """
    if isinstance(value, bool):
        raise InvalidConfigurationException(f'Invalid capacity: {value!r}')

    if isinstance(value, (int, Fraction, float)):
        bits = Fraction(value)

    else:
        match = _CAPACITY_PATTERN.match(str(value))
        if not match or match.group(2).lower() not in _UNITS:
            raise InvalidConfigurationException(f'Invalid capacity: {value!r}')

        bits = Fraction(match.group(1)) * _UNITS[match.group(2).lower()]

    if bits.denominator != 1:
        raise InvalidConfigurationException(f'Capacity must be a whole number of bits: {value!r}')

    return int(bits)


def format_capacity(bits: Optional[int]) -> str:
    if bits is None:
        return 'inf'

    for suffix, unit in (('GB', GB), ('MB', MB), ('KB', KB)):
        if bits % unit == 0:
            return f'{bits // unit}{suffix}'

    return str(bits)


class MemoryScheme(Enum):
    FIXED_PER_AP = 'fap'
    FIXED_TOTAL_EQUAL = 'ft_ea'
    FIXED_TOTAL_LINEAR = 'ft_la'
    INFINITE = 'inf'

    @classmethod
    def parse(cls, value: Union[str, 'MemoryScheme']) -> 'MemoryScheme':
        if isinstance(value, cls):
            return value

        key = str(value).strip().lower().replace('-', '_')
        for scheme in cls:
            if scheme.value == key:
                return scheme

        raise InvalidConfigurationException(f'Unknown memory scheme: {value}')


class MemoryModel(ABC):
    """
    Base class for the memory allocation models. A model turns its capacity into the number of bits every AP
    can spend per stored received vector.

    :param capacity: capacity in bits or as a string like '64KB'
    """

    scheme = MemoryScheme.INFINITE

    def __init__(self, capacity: Union[int, str, None] = None):
        if capacity is None:
            raise ValidationException(f'{self.scheme.value} memory needs a capacity')

        self.capacity = parse_capacity(capacity)

        if self.capacity <= 0:
            raise ValidationException(f'{self.scheme.value} memory capacity must be positive, got {self.capacity}')

    @abstractmethod
    def bits_per_vector(self, topology: Topology, num_subcarriers: int) -> List[BitsPerVector]:
        pass

    def scaled(self, factor) -> 'MemoryModel':
        return create_memory_model(self.scheme, max(1, round(Fraction(self.capacity) * Fraction(factor))))

    def with_capacity(self, capacity) -> 'MemoryModel':
        return create_memory_model(self.scheme, capacity)

    @property
    def label(self) -> str:
        return f'{self.scheme.value}:{format_capacity(self.capacity)}'

    def __eq__(self, other):
        return isinstance(other, MemoryModel) and self.scheme == other.scheme and self.capacity == other.capacity

    def __hash__(self):
        return hash((self.scheme, self.capacity))

    def __repr__(self):
        return f'{self.__class__.__name__}({self.label!r})'


def _per_ap_allocation(per_ap: Fraction, stored: List[int]) -> List[BitsPerVector]:
    return [math.inf if count == 0 else per_ap / count for count in stored]


class FixedPerApMemory(MemoryModel):
    scheme = MemoryScheme.FIXED_PER_AP

    def bits_per_vector(self, topology, num_subcarriers):
        return _per_ap_allocation(Fraction(self.capacity), stored_vectors(topology, num_subcarriers))


class FixedTotalEqualMemory(MemoryModel):
    scheme = MemoryScheme.FIXED_TOTAL_EQUAL

    def bits_per_vector(self, topology, num_subcarriers):
        per_ap = Fraction(self.capacity, topology.num_aps)
        return _per_ap_allocation(per_ap, stored_vectors(topology, num_subcarriers))


class FixedTotalLinearMemory(MemoryModel):
    scheme = MemoryScheme.FIXED_TOTAL_LINEAR

    def bits_per_vector(self, topology, num_subcarriers):
        if topology.kind != TopologyKind.DAISY_CHAIN:
            raise InfeasibleParameterException('Linear allocation of a total memory is only defined on a daisy chain')

        stored = stored_vectors(topology, num_subcarriers)
        total_stored = sum(stored)

        if total_stored == 0:
            return [math.inf] * topology.num_aps

        uniform = Fraction(self.capacity, total_stored)
        return [math.inf if count == 0 else uniform for count in stored]


class InfiniteMemory(MemoryModel):
    scheme = MemoryScheme.INFINITE

    def __init__(self, capacity=None):
        self.capacity = None

    def bits_per_vector(self, topology, num_subcarriers):
        return [math.inf] * topology.num_aps

    def scaled(self, factor):
        return self

    def with_capacity(self, capacity):
        return self

    @property
    def label(self) -> str:
        return 'inf'


def create_memory_model(scheme: Union[str, MemoryScheme], capacity=None) -> MemoryModel:
    scheme = MemoryScheme.parse(scheme)

    if scheme == MemoryScheme.FIXED_PER_AP:
        return FixedPerApMemory(capacity)

    elif scheme == MemoryScheme.FIXED_TOTAL_EQUAL:
        return FixedTotalEqualMemory(capacity)

    elif scheme == MemoryScheme.FIXED_TOTAL_LINEAR:
        return FixedTotalLinearMemory(capacity)

    return InfiniteMemory()


def parse_memory_model(text: Union[str, MemoryModel]) -> MemoryModel:
    """
    Parses 'inf', 'fap:256KB', 'ft_ea:8MB' or 'ft_la:8MB'
    """
    if isinstance(text, MemoryModel):
        return text

    scheme, _, capacity = str(text).strip().partition(':')
    if MemoryScheme.parse(scheme) != MemoryScheme.INFINITE and not capacity:
        raise InvalidConfigurationException(f'Memory model {text!r} needs a capacity, e.g. {scheme}:64KB')

    return create_memory_model(scheme, capacity or None)


def bits_per_vector(memory_model: Union[str, MemoryModel], topology: Topology,
                    num_subcarriers: int) -> List[BitsPerVector]:
    """
    Bits per stored received vector at every AP; math.inf for APs that store nothing

    :param memory_model: memory model or its string form
    :param topology: fronthaul topology
    :param num_subcarriers: number of subcarriers N_sc
    :return: list of Fraction or math.inf, one per AP
    """
    return parse_memory_model(memory_model).bits_per_vector(topology, num_subcarriers)
