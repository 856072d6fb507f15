import math
from fractions import Fraction

import numpy as np
import pytest

from fronthaullib.compression import CompressionOption
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.experiment import DESK_SUBCARRIERS
from fronthaullib.experiment import ExperimentSpec
from fronthaullib.experiment import FigurePreset
from fronthaullib.experiment import SweepAxis
from fronthaullib.experiment import desk_scale
from fronthaullib.experiment import run_experiment
from fronthaullib.experiment import trial_seed
from fronthaullib.resources import TopologyKind
from fronthaullib.resources import parse_memory_model
from fronthaullib.scenario import ScenarioConfig
from fronthaullib.specLoader import SpecLoader
from fronthaullib.utils.testing_utils import setup_dir

setup_dir()


def small_spec(**changes) -> ExperimentSpec:
    spec = ExperimentSpec(
        name='unit',
        scenario=ScenarioConfig(total_antennas=8, num_users=2, num_subcarriers=4),
        sweep=SweepAxis('num_aps', [2, 4]),
        memory_models=[parse_memory_model('inf'), parse_memory_model('fap:256')],
        options=[CompressionOption.VECTOR_WISE, CompressionOption.PCA_ELEMENT_WISE, CompressionOption.ELEMENT_WISE,
                 CompressionOption.ELEMENT_WISE_EQUAL_BITS],
        num_trials=3,
        base_seed=21,
    )
    for key, value in changes.items():
        setattr(spec, key, value)

    return spec


def numbers(report):
    return [(r.sweep_value, r.memory_label, r.topology, r.option, r.mean_se, r.std_se) for r in report.rows]


def test_rows_per_curve():
    report = run_experiment(small_spec())

    # one infinite-memory row plus four options per sweep point
    assert len(report.rows) == 2 * (1 + 4)
    assert [r.option for r in report.rows[:5]] == ['none', 'vc', 'pca_ec', 'ec', 'ec_equal']
    assert all(r.feasible for r in report.rows)
    assert all(r.trials == 3 and r.seed == 21 for r in report.rows)
    assert report.rows[0].capacity_bits is None
    assert report.rows[1].capacity_bits == 256


def test_reproducible_and_parallel_safe():
    serial = run_experiment(small_spec())
    again = run_experiment(small_spec())
    parallel = run_experiment(small_spec(), jobs=2)

    assert numbers(serial) == numbers(again)
    assert numbers(serial) == numbers(parallel)


def test_option_ordering_per_trial():
    report = run_experiment(small_spec(num_trials=5))

    for value in (2, 4):
        rows = {r.option: r.mean_se for r in report.rows if r.sweep_value == value}
        assert rows['pca_ec'] == pytest.approx(rows['vc'], rel=1e-9)
        assert rows['none'] >= rows['vc'] - 1e-9
        assert rows['none'] >= rows['ec'] - 1e-9


def desk_ordering_spec(num_trials: int) -> ExperimentSpec:
    return small_spec(
        scenario=ScenarioConfig(total_antennas=16, num_users=4, num_subcarriers=DESK_SUBCARRIERS),
        sweep=SweepAxis('num_aps', [8, 16]),
        memory_models=[parse_memory_model('fap:2048')],
        options=[CompressionOption.VECTOR_WISE, CompressionOption.ELEMENT_WISE,
                 CompressionOption.ELEMENT_WISE_EQUAL_BITS],
        num_trials=num_trials,
    )


def test_mean_option_ordering_under_tight_memory():
    report = run_experiment(desk_ordering_spec(200))

    for value in (8, 16):
        rows = {r.option: r.mean_se for r in report.rows if r.sweep_value == value}
        assert rows['vc'] >= rows['ec'] - 1e-9
        assert rows['ec'] >= rows['ec_equal'] - 1e-9

    # one antenna per AP leaves nothing to split
    single = {r.option: r.mean_se for r in report.rows if r.sweep_value == 16}
    assert single['vc'] == pytest.approx(single['ec_equal'], rel=1e-6)


def test_doubling_trials_keeps_means_within_three_standard_errors():
    fewer = run_experiment(desk_ordering_spec(100))
    more = run_experiment(desk_ordering_spec(200))

    for short, long in zip(fewer.rows, more.rows):
        assert (short.sweep_value, short.option) == (long.sweep_value, long.option)
        standard_error = short.std_se / math.sqrt(short.trials)
        assert abs(long.mean_se - short.mean_se) < 3 * standard_error


def test_trial_seed_is_stable():
    first = trial_seed(3, 1, 2).generate_state(4)
    second = trial_seed(3, 1, 2).generate_state(4)
    other = trial_seed(3, 2, 1).generate_state(4)

    assert np.array_equal(first, second)
    assert not np.array_equal(first, other)


def test_infeasible_points_are_flagged():
    spec = small_spec(
        scenario=ScenarioConfig(total_antennas=12, num_users=2, num_subcarriers=4),
        sweep=SweepAxis('num_aps', [3, 4, 5]),
        memory_models=[parse_memory_model('ft_ea:1KB')],
        options=[CompressionOption.VECTOR_WISE],
        topologies=[TopologyKind.DAISY_CHAIN, TopologyKind.BINARY_TREE],
        num_trials=2,
    )
    report = run_experiment(spec)
    flags = {(r.sweep_value, r.topology): r for r in report.rows}

    assert flags[(3, 'daisy_chain')].feasible
    assert not flags[(3, 'binary_tree')].feasible
    assert math.isnan(flags[(3, 'binary_tree')].mean_se)
    assert 'power-of-two' in flags[(3, 'binary_tree')].note
    assert flags[(4, 'binary_tree')].feasible

    # 5 does not divide 12
    assert not flags[(5, 'daisy_chain')].feasible
    assert 'divisible' in flags[(5, 'daisy_chain')].note


def test_invalid_specs():
    with pytest.raises(InvalidConfigurationException):
        small_spec(num_trials=0).validate()

    with pytest.raises(InvalidConfigurationException):
        small_spec(sweep=SweepAxis('num_antennas', [1])).validate()

    with pytest.raises(InvalidConfigurationException):
        small_spec(options=[CompressionOption.NONE]).validate()

    with pytest.raises(InvalidConfigurationException):
        small_spec(sweep=SweepAxis('num_aps', [3, 5])).validate()


def test_capacity_sweep():
    spec = SpecLoader().load_spec_from_path('../example_specs/capacity_sweep')
    report = run_experiment(spec)

    fap = [r for r in report.rows if r.memory_scheme == 'fap']
    assert [r.capacity_bits for r in fap] == [64, 128, 256]

    ft_ea = [r for r in report.rows if r.memory_scheme == 'ft_ea']
    assert [r.capacity_bits for r in ft_ea] == [256, 512, 1024]

    infinite = [r.mean_se for r in report.rows if r.memory_scheme == 'inf']
    assert len(set(infinite)) == 1

    # more memory never hurts on the same channel draws
    assert fap[0].mean_se <= fap[1].mean_se + 1e-9
    assert fap[1].mean_se <= fap[2].mean_se + 1e-9
    assert fap[2].mean_se <= infinite[0] + 1e-9


def test_imperfect_csi_variants():
    spec = SpecLoader().load_spec_from_path('../example_specs/pilot_contamination')
    report = run_experiment(spec)

    assert report.metadata['variants'] == [{'pilot_length': 2}, {'pilot_length': 1}]
    assert report.metadata['row_variants'] == [0, 0, 1, 1]
    assert all(r.feasible for r in report.rows)


def test_metadata_echoes_spec():
    spec = small_spec()
    report = run_experiment(spec)

    assert report.metadata['name'] == 'unit'
    assert report.metadata['spec']['memory'] == ['inf', 'fap:256']
    assert report.metadata['spec']['trials'] == 3
    assert report.metadata['version']


def test_desk_scaling():
    spec = SpecLoader().load_preset('Fig3')
    desk = desk_scale(spec).validate()

    assert desk.scenario.num_subcarriers == DESK_SUBCARRIERS
    assert desk.scenario.total_antennas == 16
    assert desk.num_trials == 100
    assert desk.sweep.values == [2, 4, 8, 16]

    ratio = Fraction(DESK_SUBCARRIERS, spec.scenario.num_subcarriers)
    for full, scaled in zip(spec.memory_models, desk.memory_models):
        if full.capacity is not None:
            assert scaled.capacity == full.capacity * ratio

    assert desk_scale(small_spec(num_trials=5)).num_trials == 5

    # a fixed chain length that no longer divides the antennas is brought down
    fig5 = desk_scale(SpecLoader().load_preset('Fig5')).validate()
    assert fig5.scenario.num_aps == 16
    assert fig5.sweep.values == [1, 2, 3, 4]


def test_figure_preset_enum():
    assert FigurePreset.parse('fig10') == FigurePreset.FIG10

    with pytest.raises(InvalidConfigurationException):
        FigurePreset.parse('Fig4')


if __name__ == '__main__':
    test_rows_per_curve()
    test_infeasible_points_are_flagged()
    test_desk_scaling()
