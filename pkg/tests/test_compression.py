import math
import warnings

import numpy as np
import pytest

from fronthaullib.compression import CompressionOption
from fronthaullib.compression import TestChannel
from fronthaullib.compression import achieved_bits
from fronthaullib.compression import create_compressor
from fronthaullib.compression import mutual_info_scalar
from fronthaullib.compression import pca_transform
from fronthaullib.compression import reverse_waterfill
from fronthaullib.compression import solve_ec
from fronthaullib.compression import solve_ec_equal_bits
from fronthaullib.compression import solve_pca_ec
from fronthaullib.compression import solve_vc
from fronthaullib.compression.scalar import default_noise_grid
from fronthaullib.compression.scalar import scalar_curves
from fronthaullib.compression.waterfill import compression_objective
from fronthaullib.compression.waterfill import spent_bits
from fronthaullib.compression.waterfill import waterfill
from fronthaullib.exceptions import InfeasibleSpectrumException
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.exceptions import ValidationException
from fronthaullib.utils.testing_utils import random_complex
from fronthaullib.utils.testing_utils import setup_dir

setup_dir()

TX_POWER = 1.0
NOISE = 1.0


def objective(solution) -> float:
    return compression_objective(solution.noise_inverse_eigenvalues, solution.signal_eigenvalues, NOISE)


def test_single_mode_closed_form():
    lambdas, mu = reverse_waterfill([4.0], 1.0, 2.0)
    assert lambdas[0] == pytest.approx(0.75, rel=1e-9)
    assert mu == pytest.approx(3 / 7, rel=1e-9)


def test_equal_modes_split_evenly():
    result = waterfill([5.0, 5.0], 1.0, 6.0)
    assert np.allclose(result.mode_bits, [3.0, 3.0], atol=1e-9)
    assert result.lambdas[0] == pytest.approx(result.lambdas[1])


def test_noise_mode_gets_nothing():
    result = waterfill([1.0, 5.0], 1.0, 3.0)
    assert result.lambdas[0] == 0.0
    assert result.mode_bits[1] == pytest.approx(3.0, abs=1e-6)


def test_zero_budget_stores_nothing():
    lambdas, mu = reverse_waterfill([3.0, 2.0], 1.0, 0.0)
    assert not np.any(lambdas)
    assert mu > 0


def test_more_bits_lower_multiplier():
    spectrum = [9.0, 4.0, 1.5]
    multipliers = [reverse_waterfill(spectrum, 1.0, budget)[1] for budget in (1.0, 2.0, 4.0, 8.0)]
    assert all(a > b for a, b in zip(multipliers, multipliers[1:]))


def test_very_large_budget_stays_exact():
    """
    Thousands of bits per mode overflow the inverse noise, the log-domain bit split must still add up
    """
    result = waterfill([2.0, 30.0, 1.0, 1.0], 1.0, 16384.0)
    assert result.achieved_bits == pytest.approx(16384.0, abs=1e-6)
    assert np.all(result.lambdas[:2] > 0)
    assert not np.any(result.lambdas[2:])


def test_spent_bits_match_the_split():
    spectrum = [9.0, 4.0, 1.5]
    result = waterfill(spectrum, 1.0, 5.0)

    assert spent_bits(result.lambdas, spectrum) == pytest.approx(5.0, abs=1e-6)
    assert spent_bits(result.lambdas, spectrum) == pytest.approx(result.achieved_bits, abs=1e-9)


def test_waterfill_large_budget_is_quiet():
    # the precision of a mode this far above the floor overflows to inf
    with warnings.catch_warnings():
        warnings.simplefilter('error', RuntimeWarning)
        result = waterfill([1e-10], 1e-20, 1000.0)

    assert result.achieved_bits == pytest.approx(1000.0, abs=1e-6)
    assert np.isinf(result.lambdas[0])


def test_waterfill_errors():
    with pytest.raises(InfeasibleSpectrumException):
        waterfill([1.0, 1.0], 1.0, 2.0)

    with pytest.raises(ValidationException):
        waterfill([2.0], 1.0, -1.0)

    with pytest.raises(ValidationException):
        waterfill([0.5], 1.0, 1.0)

    with pytest.raises(ValidationException):
        waterfill([2.0], 1.0, math.inf)


def test_vc_single_antenna_is_scalar_case():
    h = np.array([[np.sqrt(3.0)]])
    solution = solve_vc(h, TX_POWER, NOISE, 2.0)

    assert solution.noise_inverse_eigenvalues[0] == pytest.approx(0.75, rel=1e-9)
    assert solution.achieved_bits == pytest.approx(2.0, abs=1e-6)

    # log2(1 + (p|h|^2 + sigma^2) / Q) with Q = 1 / lambda
    scalar = math.log2(1 + 4.0 * solution.noise_inverse_eigenvalues[0])
    assert achieved_bits(solution, h, TX_POWER, NOISE) == pytest.approx(scalar)


def test_vc_rank_one_uses_one_mode():
    h = np.array([[1.0], [2.0j]])
    solution = solve_vc(h, TX_POWER, NOISE, 3.0)

    assert np.count_nonzero(solution.noise_inverse_eigenvalues) == 1
    assert solution.achieved_bits == pytest.approx(3.0, abs=1e-6)


def test_vc_rank_one_grid_oracle():
    h = np.array([[1.0], [0.5]])
    budget = 2.0
    solution = solve_vc(h, TX_POWER, NOISE, budget)
    eigs = solution.signal_eigenvalues

    best = -math.inf
    for bits in np.arange(0.0, budget + 1e-9, 1e-3):
        lam = np.array([(2 ** bits - 1) / eigs[0], (2 ** (budget - bits) - 1) / eigs[1]])
        best = max(best, compression_objective(lam, eigs, NOISE))

    assert objective(solution) >= best - 1e-4


def test_vc_zero_budget():
    solution = solve_vc(random_complex(np.random.default_rng(0), (3, 2)), TX_POWER, NOISE, 0.0)
    assert not np.any(solution.noise_inverse())
    assert achieved_bits(solution, np.ones((3, 2)), TX_POWER, NOISE) == 0.0


def test_vc_pure_noise_channel_fails():
    with pytest.raises(InfeasibleSpectrumException):
        solve_vc(np.zeros((2, 2)), TX_POWER, NOISE, 1.0)


def test_ec_equal_rows_split_evenly():
    h = np.array([[1.0, 0.0], [0.0, 1.0], [1j, 0.0]])
    solution = solve_ec(h, TX_POWER, NOISE, 6.0)

    assert np.allclose(solution.bits_per_mode(), 2.0, atol=1e-6)
    assert np.allclose(solution.eigenbasis, np.eye(3))

    equal = solve_ec_equal_bits(h, TX_POWER, NOISE, 6.0)
    assert np.allclose(equal.noise_inverse_eigenvalues, solution.noise_inverse_eigenvalues, rtol=1e-6)


def test_ec_zero_row_gets_nothing():
    h = np.array([[1.0, 1.0], [0.0, 0.0]])
    solution = solve_ec(h, TX_POWER, NOISE, 4.0)

    assert solution.noise_inverse_eigenvalues[1] == 0.0
    assert solution.achieved_bits == pytest.approx(4.0, abs=1e-6)


def test_ec_grid_oracle():
    h = np.array([[2.0, 0.5], [0.3, 0.2]])
    budget = 3.0
    solution = solve_ec(h, TX_POWER, NOISE, budget)
    profile = solution.element_power_profile

    best = -math.inf
    for bits in np.arange(0.0, budget + 1e-9, 1e-3):
        lam = np.array([(2 ** bits - 1) / profile[0], (2 ** (budget - bits) - 1) / profile[1]])
        best = max(best, compression_objective(lam, profile, NOISE))

    assert objective(solution) >= best - 1e-4


def test_equal_bits_unit_element():
    # one bit on an element of unit power leaves a unit noise variance
    h = np.zeros((1, 1))
    solution = solve_ec_equal_bits(h, TX_POWER, 1.0, 1.0)
    assert 1 / solution.noise_inverse_eigenvalues[0] == pytest.approx(1.0)
    assert solution.lagrange_multiplier is None


def test_optimal_ec_beats_equal_bits():
    rng = np.random.default_rng(1)
    for _ in range(20):
        h = random_complex(rng, (4, 3)) * rng.uniform(0.1, 3.0, size=(4, 1))
        budget = float(rng.uniform(1, 20))
        assert objective(solve_ec(h, TX_POWER, NOISE, budget)) >= objective(
            solve_ec_equal_bits(h, TX_POWER, NOISE, budget)) - 1e-9


def test_pca_map_properties():
    rng = np.random.default_rng(2)
    h = random_complex(rng, (5, 3))
    pca_map = pca_transform(h, TX_POWER, NOISE)

    assert pca_map.dimension == 3
    assert np.allclose(pca_map.projector.conj().T @ pca_map.projector, np.eye(3), atol=1e-10)

    mapped = pca_map.projector.conj().T @ (TX_POWER * h @ h.conj().T + NOISE * np.eye(5)) @ pca_map.projector
    assert np.allclose(mapped - np.diag(np.diag(mapped)), 0, atol=1e-10)

    singular_values = np.linalg.svd(h, compute_uv=False)
    gram = pca_map.effective_channel @ pca_map.effective_channel.conj().T
    assert np.allclose(np.diag(gram).real, singular_values ** 2)


def test_pca_without_truncation_is_unitary():
    h = random_complex(np.random.default_rng(3), (2, 4))
    pca_map = pca_transform(h, TX_POWER, NOISE)
    assert pca_map.projector.shape == (2, 2)
    assert np.allclose(pca_map.projector @ pca_map.projector.conj().T, np.eye(2))


def test_pca_zero_channel():
    pca_map = pca_transform(np.zeros((3, 2)), TX_POWER, NOISE)
    assert not np.any(pca_map.effective_channel)
    assert np.allclose(pca_map.effective_spectrum, NOISE)


def test_pca_matches_vc_allocation():
    rng = np.random.default_rng(4)
    for _ in range(20):
        h = random_complex(rng, (4, 2))
        budget = float(rng.uniform(0.5, 30))

        vc = solve_vc(h, TX_POWER, NOISE, budget)
        pca = solve_pca_ec(pca_transform(h, TX_POWER, NOISE), NOISE, budget)

        active = np.sort(vc.noise_inverse_eigenvalues[vc.noise_inverse_eigenvalues > 0])
        assert np.allclose(np.sort(pca.noise_inverse_eigenvalues[pca.noise_inverse_eigenvalues > 0]), active,
                           rtol=1e-10)
        assert pca.achieved_bits == pytest.approx(budget, abs=1e-6)


def test_pca_single_mode():
    h = np.array([[np.sqrt(3.0)], [0.0]])
    solution = solve_pca_ec(pca_transform(h, TX_POWER, NOISE), NOISE, 2.0)
    assert solution.noise_inverse_eigenvalues[0] == pytest.approx(0.75, rel=1e-9)

    empty = solve_pca_ec(pca_transform(h, TX_POWER, NOISE), NOISE, 0.0)
    assert not np.any(empty.noise_inverse_eigenvalues)


def test_scalar_test_channels():
    assert mutual_info_scalar(1.0, TestChannel.ADDITIVE) == pytest.approx(1.0)
    assert mutual_info_scalar(1.0, TestChannel.OPTIMAL) == 0.0
    assert mutual_info_scalar(1 / 3, TestChannel.ADDITIVE) == pytest.approx(2.0)
    assert mutual_info_scalar(4.0, TestChannel.OPTIMAL) == 0.0

    for q, additive, optimal in scalar_curves(default_noise_grid()):
        assert additive > optimal

    with pytest.raises(ValidationException):
        mutual_info_scalar(0.0)


def test_create_compressor():
    assert create_compressor('vc', TX_POWER).option == CompressionOption.VECTOR_WISE
    assert create_compressor('EC', TX_POWER).diagonal_noise
    assert create_compressor('ec_equal_bits', TX_POWER).option == CompressionOption.ELEMENT_WISE_EQUAL_BITS
    assert create_compressor('pca', TX_POWER).option == CompressionOption.PCA_ELEMENT_WISE

    with pytest.raises(InvalidConfigurationException):
        create_compressor('none', TX_POWER)

    with pytest.raises(InvalidConfigurationException):
        create_compressor('zip', TX_POWER)

    with pytest.raises(ValidationException):
        create_compressor('vc', 0.0)


def test_infinite_budget_is_lossless():
    h = random_complex(np.random.default_rng(5), (3, 2))
    solution = create_compressor('vc', TX_POWER).solve(h, NOISE, math.inf)

    assert solution.is_lossless
    assert solution.achieved_bits == math.inf
    assert np.allclose(solution.noise_precision(), np.eye(3) / NOISE)


def test_overflowing_inverse_noise_keeps_precision_finite():
    h = random_complex(np.random.default_rng(6), (2, 2))
    solution = create_compressor('ec_equal', TX_POWER).solve(h, NOISE, 8192.0)

    assert np.all(np.isinf(solution.noise_inverse_eigenvalues))
    assert solution.achieved_bits == pytest.approx(8192.0)
    assert np.allclose(solution.noise_precision(), np.eye(2) / NOISE)


if __name__ == '__main__':
    test_single_mode_closed_form()
    test_pca_matches_vc_allocation()
    test_scalar_test_channels()
