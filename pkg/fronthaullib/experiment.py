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

import dataclasses
import logging
import math
import os
import sys
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from fronthaullib.compression import CompressionOption
from fronthaullib.compression import create_compressor
from fronthaullib.compression import lossless_solution
from fronthaullib.estimation import sum_se_ec
from fronthaullib.estimation import sum_se_exact
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.resources import MemoryModel
from fronthaullib.resources import MemoryScheme
from fronthaullib.resources import ResourcePlan
from fronthaullib.resources import TopologyKind
from fronthaullib.resources import build_plan
from fronthaullib.resources import parse_capacity
from fronthaullib.resources.memory import InfiniteMemory
from fronthaullib.resources.memory import create_memory_model
from fronthaullib.scenario import ChannelRealization
from fronthaullib.scenario import ScenarioConfig
from fronthaullib.scenario import build_geometry
from fronthaullib.scenario import estimate_channel
from fronthaullib.scenario import sample_channel

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

if not len(logger.handlers):
    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(logging.DEBUG)
    logger.addHandler(handler)

if os.environ.get('FRONTHAUL_DEBUG', False):
    logger.setLevel(logging.DEBUG)

SCENARIO_FIELDS = tuple(f.name for f in dataclasses.fields(ScenarioConfig))
CAPACITY_PARAMS = ('capacity', 'capacity_scale')

DEFAULT_TRIALS = 500
DESK_TRIALS = 100
DESK_SUBCARRIERS = 64
DESK_ANTENNA_FACTOR = Fraction(16, 128)


class FigurePreset(Enum):
    FIG3 = 'Fig3'
    FIG5 = 'Fig5'
    FIG6 = 'Fig6'
    FIG7 = 'Fig7'
    FIG8 = 'Fig8'
    FIG9 = 'Fig9'
    FIG10 = 'Fig10'
    CUSTOM = 'Custom'

    @classmethod
    def parse(cls, value) -> 'FigurePreset':
        if isinstance(value, cls):
            return value

        for preset in cls:
            if preset.value.lower() == str(value).strip().lower():
                return preset

        raise InvalidConfigurationException(f'Unknown figure preset: {value}')


@dataclass
class SweepAxis:
    param: str
    values: List[Any]


@dataclass
class SweepPoint:
    index: int
    variant_index: int
    variant: Dict[str, Any]
    value: Any
    scenario: Optional[ScenarioConfig]
    error: Optional[str] = None
    # points of a capacity sweep share channel draws within a variant
    seed_index: Optional[int] = None

    @property
    def draw_index(self) -> int:
        return self.index if self.seed_index is None else self.seed_index


@dataclass
class Curve:
    memory: MemoryModel
    topology: TopologyKind
    option: CompressionOption
    plan: Optional[ResourcePlan] = None
    error: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return self.plan is not None


@dataclass
class ExperimentSpec:
    """
    A Monte-Carlo sweep. Every sweep value is combined with every variant (a set of scenario overrides),
    and every point is evaluated for every memory model, topology and compression option.
    """

    name: str = 'custom'
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    sweep: SweepAxis = field(default_factory=lambda: SweepAxis('num_aps', [32]))
    variants: List[Dict[str, Any]] = field(default_factory=lambda: [dict()])
    memory_models: List[MemoryModel] = field(default_factory=lambda: [InfiniteMemory()])
    options: List[CompressionOption] = field(default_factory=lambda: [CompressionOption.VECTOR_WISE])
    topologies: List[TopologyKind] = field(default_factory=lambda: [TopologyKind.DAISY_CHAIN])
    num_trials: int = DEFAULT_TRIALS
    base_seed: int = 0
    figure_preset: Optional[FigurePreset] = None
    combining_width: int = 16

    def validate(self) -> 'ExperimentSpec':
        if self.num_trials < 1:
            raise InvalidConfigurationException(f'num_trials must be at least 1, got {self.num_trials}')

        if self.sweep.param not in SCENARIO_FIELDS + CAPACITY_PARAMS:
            raise InvalidConfigurationException(f'Cannot sweep over unknown parameter: {self.sweep.param}')

        if not self.sweep.values:
            raise InvalidConfigurationException('The sweep has no values')

        for name in ('variants', 'memory_models', 'options', 'topologies'):
            if not getattr(self, name):
                raise InvalidConfigurationException(f'{name} must not be empty')

        for variant in self.variants:
            unknown = set(variant) - set(SCENARIO_FIELDS)
            if unknown:
                raise InvalidConfigurationException(f'Unknown scenario fields in variant: {sorted(unknown)}')

        if CompressionOption.NONE in self.options:
            raise InvalidConfigurationException('Option none is implied by infinite memory, list a real option')

        points = self.points()
        if all(p.scenario is None for p in points):
            raise InvalidConfigurationException(f'No feasible sweep point: {points[0].error}')

        return self

    def points(self) -> List[SweepPoint]:
        points = list()
        for variant_index, variant in enumerate(self.variants):
            for value in self.sweep.values:
                overrides = dict(variant)
                if self.sweep.param in SCENARIO_FIELDS:
                    overrides[self.sweep.param] = value

                seed_index = variant_index if self.sweep.param in CAPACITY_PARAMS else None
                point = SweepPoint(len(points), variant_index, dict(variant), value, None, seed_index=seed_index)
                try:
                    point.scenario = self.scenario.with_overrides(**overrides).validate()

                except InvalidConfigurationException as ice:
                    point.error = str(ice)

                points.append(point)

        return points

    def to_dict(self) -> dict:
        """
        Spec in the form of an experiment spec file, used to echo the effective configuration
        """
        return OrderedDict(
            name=self.name,
            preset=self.figure_preset.value if self.figure_preset else None,
            scenario=self.scenario.to_dict(),
            sweep=OrderedDict(param=self.sweep.param, values=list(self.sweep.values)),
            variants=[dict(v) for v in self.variants],
            memory=[m.label for m in self.memory_models],
            options=[o.value for o in self.options],
            topologies=[t.value for t in self.topologies],
            trials=self.num_trials,
            seed=self.base_seed,
            combining_width=self.combining_width,
        )


@dataclass
class SERow:
    sweep_param: str
    sweep_value: Any
    option: str
    memory_scheme: str
    capacity_bits: Optional[int]
    topology: str
    num_users: int
    total_antennas: int
    mean_se: float
    std_se: float
    trials: int
    seed: int
    variant_index: int = 0
    variant: Dict[str, Any] = field(default_factory=dict)
    feasible: bool = True
    note: str = ''

    @property
    def memory_label(self) -> str:
        if self.capacity_bits is None:
            return self.memory_scheme

        return create_memory_model(self.memory_scheme, self.capacity_bits).label


@dataclass
class SEReport:
    rows: List[SERow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def curves(self) -> 'OrderedDict[Tuple, List[SERow]]':
        """
        Rows grouped per plotted curve, in first-seen order
        """
        grouped = OrderedDict()
        for row in self.rows:
            key = (row.variant_index, row.memory_label, row.topology, row.option)
            grouped.setdefault(key, list()).append(row)

        return grouped


def trial_seed(base_seed: int, point_index: int, trial_index: int) -> np.random.SeedSequence:
    """
    Independent stream for one trial of one sweep point, the same whatever order trials run in
    """
    return np.random.SeedSequence(base_seed, spawn_key=(point_index, trial_index))


def _point_memory(memory: MemoryModel, param: str, value: Any) -> MemoryModel:
    if param == 'capacity':
        return memory.with_capacity(value)

    if param == 'capacity_scale':
        return memory.scaled(Fraction(str(value)))

    return memory


def curves_for_point(spec: ExperimentSpec, point: SweepPoint) -> List[Curve]:
    curves = list()
    for memory in spec.memory_models:
        memory = _point_memory(memory, spec.sweep.param, point.value)
        options = [CompressionOption.NONE] if memory.scheme == MemoryScheme.INFINITE else spec.options

        for topology in spec.topologies:
            plan = None
            error = point.error
            if point.scenario is not None:
                try:
                    plan = build_plan(point.scenario, memory, topology, spec.combining_width)

                except InvalidConfigurationException as ice:
                    error = str(ice)

            for option in options:
                curves.append(Curve(memory, topology, option, plan, error))

    return curves


def evaluate_curve(channel: ChannelRealization, config: ScenarioConfig, curve: Curve) -> float:
    """
    Compresses every AP's received vectors as the curve's plan allows and returns the resulting sum SE
    """
    compressor = None
    if curve.option != CompressionOption.NONE:
        compressor = create_compressor(curve.option, config.tx_power)

    blocks = list()
    precisions = list()
    for ap, h in enumerate(channel.blocks):
        noise_power = float(channel.effective_noise_per_ap[ap])
        budget = float(curve.plan.bits_per_vector[ap])

        if compressor is None:
            solution = lossless_solution(h, noise_power, ap)
        else:
            solution = compressor.solve(h, noise_power, budget, ap)

        blocks.append(solution.effective_channel(h))
        precisions.append(solution.noise_precision())

    if compressor is not None and compressor.diagonal_noise:
        return sum_se_ec(blocks, precisions, config.tx_power, config.prelog)

    return sum_se_exact(blocks, precisions, config.tx_power, config.prelog)


def run_trial(point: SweepPoint, curves: List[Curve], base_seed: int, trial_index: int) -> List[float]:
    """
    One channel draw shared by all curves of a sweep point

    :return: sum SE per curve
    """
    config = point.scenario
    geometry_seed, channel_seed, pilot_seed = trial_seed(base_seed, point.draw_index, trial_index).spawn(3)

    geometry = build_geometry(config, geometry_seed)
    channel = sample_channel(geometry, config, channel_seed)
    if not config.perfect_csi:
        channel = estimate_channel(channel, config, seed=pilot_seed)

    return [evaluate_curve(channel, config, curve) for curve in curves]


def _row(spec: ExperimentSpec, point: SweepPoint, curve: Curve, sums: Optional[List[float]]) -> SERow:
    config = point.scenario or spec.scenario.with_overrides(**point.variant)
    num_users = config.num_users
    total_antennas = config.total_antennas
    if spec.sweep.param == 'num_users':
        num_users = point.value
    elif spec.sweep.param == 'total_antennas':
        total_antennas = point.value

    if sums is None:
        mean_se = std_se = math.nan
    else:
        per_user = np.asarray(sums) / num_users
        mean_se = math.fsum(sums) / (num_users * len(sums))
        std_se = float(np.std(per_user, ddof=1)) if len(sums) > 1 else 0.0

    return SERow(
        sweep_param=spec.sweep.param,
        sweep_value=point.value,
        option=curve.option.value,
        memory_scheme=curve.memory.scheme.value,
        capacity_bits=curve.memory.capacity,
        topology=curve.topology.value,
        num_users=num_users,
        total_antennas=total_antennas,
        mean_se=mean_se,
        std_se=std_se,
        trials=spec.num_trials,
        seed=spec.base_seed,
        variant_index=point.variant_index,
        variant=dict(point.variant),
        feasible=sums is not None,
        note=curve.error or '',
    )


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> SEReport:
    """
    Runs every trial of every sweep point and averages the per-user SE of every curve

    :param spec: experiment spec
    :param jobs: worker processes; results do not depend on it
    :return: SEReport
    """
    spec.validate()
    points = spec.points()
    rows = list()

    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None

    try:
        for point in points:
            curves = curves_for_point(spec, point)
            feasible = [c for c in curves if c.feasible]

            for curve in curves:
                if not curve.feasible:
                    logger.warning(f'{spec.name}: {spec.sweep.param}={point.value} {curve.memory.label} '
                                   f'{curve.topology.value} is infeasible: {curve.error}')

            per_curve = [list() for _ in feasible]
            if feasible:
                task = partial(run_trial, point, feasible, spec.base_seed)
                trials = range(spec.num_trials)

                if executor is not None:
                    results = executor.map(task, trials, chunksize=max(1, spec.num_trials // (4 * jobs)))
                else:
                    results = map(task, trials)

                for sums in results:
                    for index, value in enumerate(sums):
                        per_curve[index].append(value)

            feasible_sums = iter(per_curve)
            for curve in curves:
                rows.append(_row(spec, point, curve, next(feasible_sums) if curve.feasible else None))

            logger.info(f'{spec.name}: point {point.index + 1}/{len(points)} '
                        f'({spec.sweep.param}={point.value}) done')

    finally:
        if executor is not None:
            executor.shutdown()

    from fronthaullib import __version__

    metadata = OrderedDict(
        name=spec.name,
        version=__version__,
        spec=spec.to_dict(),
        variants=[dict(v) for v in spec.variants],
        row_variants=[r.variant_index for r in rows],
    )

    return SEReport(rows, metadata)


def _scale_antennas(total_antennas: int) -> int:
    return max(1, int(total_antennas * DESK_ANTENNA_FACTOR))


def desk_scale(spec: ExperimentSpec) -> ExperimentSpec:
    """
    Shrinks a full-scale spec so it runs on a desktop: fewer antennas and subcarriers, capacities scaled with
    the subcarrier count so bits per stored vector stay the same, and at most 100 trials.
    """
    ratio = Fraction(DESK_SUBCARRIERS, spec.scenario.num_subcarriers)

    scenario = spec.scenario.with_overrides(num_subcarriers=DESK_SUBCARRIERS,
                                            total_antennas=_scale_antennas(spec.scenario.total_antennas))

    variants = list()
    for variant in spec.variants:
        variant = dict(variant)
        if 'total_antennas' in variant:
            variant['total_antennas'] = _scale_antennas(variant['total_antennas'])
        if 'num_subcarriers' in variant:
            variant['num_subcarriers'] = DESK_SUBCARRIERS
        variants.append(variant)

    antenna_counts = {v.get('total_antennas', scenario.total_antennas) for v in variants}

    if spec.sweep.param != 'num_aps' and any(m % scenario.num_aps for m in antenna_counts):
        num_aps = math.gcd(scenario.num_aps, *antenna_counts)
        logger.info(f'{spec.name}: desk scale runs {num_aps} APs instead of {scenario.num_aps}')
        scenario = scenario.with_overrides(num_aps=num_aps)

    values = list(spec.sweep.values)
    if spec.sweep.param == 'num_aps':
        values = [v for v in values if any(m % v == 0 for m in antenna_counts)]
    elif spec.sweep.param == 'total_antennas':
        values = [_scale_antennas(v) for v in values]
    elif spec.sweep.param == 'capacity':
        values = [max(1, round(parse_capacity(v) * ratio)) for v in values]

    return dataclasses.replace(
        spec,
        name=f'{spec.name}-desk',
        scenario=scenario,
        sweep=SweepAxis(spec.sweep.param, values),
        variants=variants,
        memory_models=[m.scaled(ratio) for m in spec.memory_models],
        num_trials=min(spec.num_trials, DESK_TRIALS),
    )
