"""
Full-scale curve shapes. These run hundreds of trials at 128 antennas and 4096 subcarriers, so they only run
when FRONTHAUL_SLOW_TESTS is set.
"""

import dataclasses
import os
from typing import Dict
from typing import List

import numpy as np
import pytest

from fronthaullib.experiment import ExperimentSpec
from fronthaullib.experiment import run_experiment
from fronthaullib.resources import TopologyKind
from fronthaullib.resources import parse_memory_model
from fronthaullib.specLoader import SpecLoader
from fronthaullib.utils.testing_utils import setup_dir

setup_dir()

pytestmark = pytest.mark.skipif(not os.environ.get('FRONTHAUL_SLOW_TESTS'), reason='set FRONTHAUL_SLOW_TESTS to run')

TRIALS = 200
# Monte-Carlo slack between neighbouring points of a rising curve
TREND_SLACK = 0.05


def preset(name: str, num_users: int, memory: List[str], topologies=('daisy_chain',)) -> ExperimentSpec:
    spec = SpecLoader().load_preset(name)
    return dataclasses.replace(
        spec,
        variants=[{'num_users': num_users}],
        memory_models=[parse_memory_model(m) for m in memory],
        topologies=[TopologyKind.parse(t) for t in topologies],
        num_trials=TRIALS,
    ).validate()


def curves(spec: ExperimentSpec) -> Dict[tuple, Dict[int, float]]:
    grouped = dict()
    for row in run_experiment(spec).rows:
        if row.feasible:
            grouped.setdefault((row.memory_label, row.topology), dict())[row.sweep_value] = row.mean_se

    return grouped


def peak(curve: Dict[int, float]):
    best = max(curve, key=curve.get)
    return best, curve[best]


def test_equal_allocation_peaks_near_32_aps():
    result = curves(preset('Fig3', 4, ['ft_ea:8MB']))
    best, value = peak(result[('ft_ea:8MB', 'daisy_chain')])

    assert best == 32
    assert value == pytest.approx(7.8, abs=0.4)


def test_infinite_memory_rises_with_chain_length():
    result = curves(preset('Fig3', 4, ['inf']))
    values = [v for _, v in sorted(result[('inf', 'daisy_chain')].items())]

    assert np.all(np.diff(values) > -TREND_SLACK)


def test_more_users_peak_earlier():
    few = curves(preset('Fig3', 4, ['fap:64KB']))[('fap:64KB', 'daisy_chain')]
    many = curves(preset('Fig3', 64, ['fap:64KB']))[('fap:64KB', 'daisy_chain')]

    assert peak(many)[0] < peak(few)[0]


def test_linear_allocation_loses_on_long_chains():
    result = curves(preset('Fig9', 4, ['ft_la:8MB', 'ft_ea:8MB']))

    assert result[('ft_la:8MB', 'daisy_chain')][128] < result[('ft_ea:8MB', 'daisy_chain')][128]


def test_tree_with_less_memory_matches_chain_peak():
    tree = curves(preset('Fig10', 4, ['ft_ea:512KB'], ('binary_tree',)))[('ft_ea:512KB', 'binary_tree')]
    chain = curves(preset('Fig10', 4, ['ft_ea:8MB']))[('ft_ea:8MB', 'daisy_chain')]

    assert abs(peak(tree)[1] - peak(chain)[1]) < 0.3


if __name__ == '__main__':
    test_equal_allocation_peaks_near_32_aps()
